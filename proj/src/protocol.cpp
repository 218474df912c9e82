#include "clustercast/protocol.hpp"

#include "clustercast/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <queue>
#include <random>

namespace clustercast {

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
  case EventKind::BsBroadcastEnd: return "BsBroadcastEnd";
  case EventKind::RequestTxEnd: return "RequestTxEnd";
  case EventKind::ReplyTxEnd: return "ReplyTxEnd";
  case EventKind::BackoffExpiry: return "BackoffExpiry";
  case EventKind::AckRxEnd: return "AckRxEnd";
  case EventKind::Collision: return "Collision";
  }
  return "?";
}

void write_event_log_csv(std::ostream& out, const std::vector<EventRecord>& events) {
  char buf[160];
  for (const EventRecord& e : events) {
    std::snprintf(buf, sizeof buf, "%.9f,%d,%s,%d,%d\n", e.time_ms, e.actor, to_string(e.kind).data(), e.packet_id,
                  e.cluster_id);
    out << buf;
  }
}

SimParams sim_params_from(const ScenarioConfig& cfg) {
  SimParams sim;
  sim.packet_len_ms = cfg.packet_len_ms;
  sim.t_req_ms = cfg.t_req_ms;
  sim.t_ack_ms = cfg.t_ack_ms;
  sim.slot_ms = cfg.slot_us / 1000.0;
  sim.cw_min = cfg.cw_min;
  sim.cw_max = cfg.cw_max;
  sim.max_time_ms = cfg.max_time_ms;
  sim.generation_size = cfg.generation_size;
  sim.opportunistic_overhearing = cfg.opportunistic_overhearing;
  return sim;
}

void validate(const SimParams& sim) {
  if (!(sim.packet_len_ms > 0.0)) throw ParameterError("packet_len_ms", "must be positive");
  if (!(sim.t_req_ms >= 0.0)) throw ParameterError("t_req_ms", "must be >= 0");
  if (!(sim.t_ack_ms >= 0.0)) throw ParameterError("t_ack_ms", "must be >= 0");
  if (!(sim.slot_ms > 0.0)) throw ParameterError("slot_us", "must be positive");
  if (sim.cw_min < 1) throw ParameterError("cw_min", "must be >= 1");
  if (sim.cw_max < sim.cw_min) throw ParameterError("cw_max", "must be >= cw_min");
  if (!(sim.max_time_ms > 0.0)) throw ParameterError("max_time_ms", "must be positive");
  if (sim.generation_size < 1) throw ParameterError("generation_size", "must be >= 1");
}

int SchemeOutcome::delivered_count() const noexcept {
  return static_cast<int>(std::count_if(uavs.begin(), uavs.end(), [](const UavOutcome& u) { return u.delivered; }));
}

int SchemeOutcome::undelivered_count() const noexcept {
  return static_cast<int>(uavs.size()) - delivered_count();
}

double SchemeOutcome::mean_delay_ms() const noexcept {
  double sum = 0.0;
  int n = 0;
  for (const UavOutcome& u : uavs) {
    if (u.delivered) {
      sum += u.delivery_time_ms;
      ++n;
    }
  }
  return n > 0 ? sum / n : 0.0;
}

double SchemeOutcome::delivery_ratio() const noexcept {
  return uavs.empty() ? 0.0 : static_cast<double>(delivered_count()) / static_cast<double>(uavs.size());
}

double SchemeOutcome::first_attempt_success_ratio() const noexcept {
  if (uavs.empty()) return 0.0;
  int hits = 0;
  for (const UavOutcome& u : uavs) {
    if (u.first_broadcast_success || u.first_peer_attempt == PeerAttempt::Success) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(uavs.size());
}

void write_outcome_csv_rows(std::ostream& out, const SchemeOutcome& outcome) {
  static constexpr const char* kAttempt[] = {"none", "success", "failure"};
  char buf[200];
  for (std::size_t i = 0; i < outcome.uavs.size(); ++i) {
    const UavOutcome& u = outcome.uavs[i];
    std::snprintf(buf, sizeof buf, "%zu,%d,%d,%.9f,%d,%s,%d,%d\n", i, u.cluster_id, u.delivered ? 1 : 0,
                  u.delivery_time_ms, u.first_broadcast_success ? 1 : 0,
                  kAttempt[static_cast<int>(u.first_peer_attempt)], u.requests_sent, u.replies_sent);
    out << buf;
  }
}

namespace {

struct Node {
  int cluster = -1;
  Position3 position{};
  double bs_distance = 0.0;
};

std::vector<Node> flatten(const Topology& topo) {
  std::vector<Node> nodes;
  nodes.reserve(topo.uav_count());
  for (std::size_t c = 0; c < topo.clusters.size(); ++c) {
    for (const Position3& p : topo.clusters[c].members) {
      nodes.push_back({static_cast<int>(c), p, distance(topo.bs_position, p)});
    }
  }
  return nodes;
}

void check_inputs(const Topology& topo, const RadioParams& radio, const SimParams& sim) {
  validate(radio);
  validate(sim);
  if (topo.uav_count() == 0) throw ParameterError("topology", "must contain at least one UAV");
  if (sim.broadcast_override && sim.broadcast_override->size() != topo.uav_count()) {
    throw ParameterError("broadcast_override", "must hold one entry per UAV");
  }
}

/// Draws the BS broadcast outcome for every UAV in `targets`, in order.
/// The very first broadcast may be overridden.
std::vector<bool> broadcast_round(const std::vector<Node>& nodes, const std::vector<int>& targets,
                                  const RadioParams& radio, const SimParams& sim, Rng& rng, bool first_round) {
  std::vector<bool> got(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const int u = targets[i];
    if (first_round && sim.broadcast_override) {
      got[i] = (*sim.broadcast_override)[static_cast<std::size_t>(u)];
    } else {
      got[i] = reception_success(radio.p_bs_mw, nodes[static_cast<std::size_t>(u)].bs_distance,
                                 LinkKind::BsToUav, radio, rng);
    }
  }
  return got;
}

SchemeOutcome blank_outcome(Scheme scheme, const std::vector<Node>& nodes) {
  SchemeOutcome out;
  out.scheme = scheme;
  out.uavs.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out.uavs[i].cluster_id = nodes[i].cluster;
  return out;
}

class ClusteringEngine {
public:
  ClusteringEngine(const Topology& topo, const RadioParams& radio, const SimParams& sim, std::uint64_t seed)
      : radio_(radio), sim_(sim), nodes_(flatten(topo)), broadcast_rng_(make_rng(seed, kBroadcastStream)),
        recovery_rng_(make_rng(seed, kRecoveryStream)), states_(nodes_.size()),
        clusters_(topo.clusters.size()) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      clusters_[static_cast<std::size_t>(nodes_[i].cluster)].members.push_back(static_cast<int>(i));
    }
    out_ = blank_outcome(Scheme::Clustering, nodes_);
  }

  SchemeOutcome run() {
    push(sim_.packet_len_ms, EventKind::BsBroadcastEnd, -1, -1, 0);
    while (!queue_.empty()) {
      const Pending ev = queue_.top();
      queue_.pop();
      if (ev.time > sim_.max_time_ms) break;
      switch (ev.kind) {
      case EventKind::BsBroadcastEnd: on_broadcast_end(ev.time); break;
      case EventKind::BackoffExpiry: on_backoff_expiry(ev); break;
      case EventKind::RequestTxEnd: on_request_end(ev); break;
      case EventKind::ReplyTxEnd: on_reply_end(ev); break;
      case EventKind::Collision: on_collision_end(ev); break;
      case EventKind::AckRxEnd: break;
      }
    }
    return std::move(out_);
  }

private:
  struct Pending {
    double time;
    std::uint64_t seq;
    EventKind kind;
    int cluster;
    int actor;
    std::uint64_t generation;
  };
  struct Later {
    bool operator()(const Pending& a, const Pending& b) const noexcept {
      return a.time > b.time || (a.time == b.time && a.seq > b.seq);
    }
  };
  struct ClusterRuntime {
    std::vector<int> members;
    MediumState medium;
    std::uint64_t generation = 0;
    bool access_pending = false;
    int pending_slots = 0;
    bool request_outstanding = false;
    int current_requester = -1;
    std::vector<int> in_flight;
    bool done = false;
  };

  void push(double t, EventKind kind, int cluster, int actor, std::uint64_t generation) {
    queue_.push({t, seq_++, kind, cluster, actor, generation});
  }

  void log(double t, int actor, EventKind kind, int cluster) {
    if (sim_.record_events) out_.events.push_back({t, actor, kind, sim_.packet_id, cluster});
  }

  UavState& state(int u) { return states_[static_cast<std::size_t>(u)]; }
  UavOutcome& outcome(int u) { return out_.uavs[static_cast<std::size_t>(u)]; }

  void start_contention(int u, UavState::Contention kind) {
    UavState& s = state(u);
    s.contention = kind;
    s.contention_window = sim_.cw_min;
    s.backoff_slots = draw_backoff(s.contention_window);
  }

  int draw_backoff(int window) { return std::uniform_int_distribution<int>(0, window - 1)(recovery_rng_); }

  void deliver(int u, double t) {
    state(u).received = true;
    state(u).awaiting_reply = false;
    outcome(u).delivered = true;
    outcome(u).delivery_time_ms = t;
  }

  void on_broadcast_end(double t) {
    ++out_.bs_transmissions;
    std::vector<int> all(nodes_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    const std::vector<bool> got = broadcast_round(nodes_, all, radio_, sim_, broadcast_rng_, true);
    for (std::size_t i = 0; i < got.size(); ++i) {
      outcome(static_cast<int>(i)).first_broadcast_success = got[i];
      if (got[i]) deliver(static_cast<int>(i), t);
    }
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
      ClusterRuntime& cl = clusters_[c];
      log(t, -1, EventKind::BsBroadcastEnd, static_cast<int>(c));
      const bool any_holder = std::any_of(cl.members.begin(), cl.members.end(), [&](int u) { return state(u).received; });
      const bool all_hold = std::all_of(cl.members.begin(), cl.members.end(), [&](int u) { return state(u).received; });
      // Without a holder nobody can answer: the cluster's losses are final.
      if (!any_holder || all_hold) {
        cl.done = true;
        continue;
      }
      for (int u : cl.members) {
        if (!state(u).received) start_contention(u, UavState::Contention::Request);
      }
      schedule_access(static_cast<int>(c), t);
    }
  }

  void schedule_access(int c, double now) {
    ClusterRuntime& cl = clusters_[static_cast<std::size_t>(c)];
    if (cl.done || cl.medium.busy) return;
    if (cl.access_pending) throw IntegrityError("contention rescheduled while a countdown is pending");
    int min_slots = std::numeric_limits<int>::max();
    for (int u : cl.members) {
      if (state(u).contention != UavState::Contention::None) min_slots = std::min(min_slots, state(u).backoff_slots);
    }
    if (min_slots == std::numeric_limits<int>::max()) return;
    cl.access_pending = true;
    cl.pending_slots = min_slots;
    ++cl.generation;
    // One CCA slot, then the countdown of the smallest backoff counter.
    push(now + sim_.slot_ms * static_cast<double>(1 + min_slots), EventKind::BackoffExpiry, c, -1, cl.generation);
  }

  void on_backoff_expiry(const Pending& ev) {
    ClusterRuntime& cl = clusters_[static_cast<std::size_t>(ev.cluster)];
    if (ev.generation != cl.generation || !cl.access_pending) return;
    cl.access_pending = false;
    cl.in_flight.clear();
    for (int u : cl.members) {
      UavState& s = state(u);
      if (s.contention == UavState::Contention::None) continue;
      s.backoff_slots -= cl.pending_slots;
      if (s.backoff_slots == 0) cl.in_flight.push_back(u);
    }
    double longest = 0.0;
    for (int u : cl.in_flight) {
      const bool is_request = state(u).contention == UavState::Contention::Request;
      if (is_request && state(u).received) ++out_.requests_for_held_packet;
      longest = std::max(longest, is_request ? sim_.t_req_ms : sim_.packet_len_ms);
      ++out_.uav_transmissions;
      if (is_request) {
        ++out_.requests;
        ++out_.control_messages;
        ++outcome(u).requests_sent;
      } else {
        ++out_.replies;
        ++outcome(u).replies_sent;
      }
      log(ev.time, u, EventKind::BackoffExpiry, ev.cluster);
    }
    cl.medium.busy = true;
    cl.medium.busy_until_ms = ev.time + longest;
    if (cl.in_flight.size() == 1) {
      const int u = cl.in_flight.front();
      const bool is_request = state(u).contention == UavState::Contention::Request;
      cl.medium.transmitter = u;
      cl.medium.frame = is_request ? FrameKind::Request : FrameKind::Reply;
      state(u).contention = UavState::Contention::None;
      push(cl.medium.busy_until_ms, is_request ? EventKind::RequestTxEnd : EventKind::ReplyTxEnd, ev.cluster, u, 0);
    } else {
      ++out_.collisions;
      cl.medium.transmitter = -1;
      push(cl.medium.busy_until_ms, EventKind::Collision, ev.cluster, -1, 0);
    }
  }

  void on_collision_end(const Pending& ev) {
    ClusterRuntime& cl = clusters_[static_cast<std::size_t>(ev.cluster)];
    cl.medium.busy = false;
    for (int u : cl.in_flight) {
      UavState& s = state(u);
      s.contention_window = std::min(2 * s.contention_window, sim_.cw_max);
      s.backoff_slots = draw_backoff(s.contention_window);
      log(ev.time, u, EventKind::Collision, ev.cluster);
    }
    cl.in_flight.clear();
    schedule_access(ev.cluster, ev.time);
  }

  void on_request_end(const Pending& ev) {
    ClusterRuntime& cl = clusters_[static_cast<std::size_t>(ev.cluster)];
    cl.medium.busy = false;
    cl.in_flight.clear();
    log(ev.time, ev.actor, EventKind::RequestTxEnd, ev.cluster);
    // Every peer decodes the frame header, whatever the payload SNR.
    state(ev.actor).awaiting_reply = true;
    for (int u : cl.members) {
      UavState& s = state(u);
      if (s.received) {
        if (s.contention == UavState::Contention::None) start_contention(u, UavState::Contention::Reply);
      } else if (u != ev.actor) {
        if (s.contention == UavState::Contention::Request) {
          s.contention = UavState::Contention::None;
          s.request_suppressed = true;
        }
        s.awaiting_reply = true;
      }
    }
    cl.request_outstanding = true;
    cl.current_requester = ev.actor;
    schedule_access(ev.cluster, ev.time);
  }

  void on_reply_end(const Pending& ev) {
    ClusterRuntime& cl = clusters_[static_cast<std::size_t>(ev.cluster)];
    cl.medium.busy = false;
    cl.in_flight.clear();
    log(ev.time, ev.actor, EventKind::ReplyTxEnd, ev.cluster);
    if (!cl.request_outstanding) ++out_.duplicate_replies;
    cl.request_outstanding = false;

    for (int u : cl.members) {
      UavState& s = state(u);
      if (s.received && s.contention == UavState::Contention::Reply) {
        s.contention = UavState::Contention::None;
        s.reply_suppressed = true;
      }
    }

    const Position3& from = nodes_[static_cast<std::size_t>(ev.actor)].position;
    for (int u : cl.members) {
      UavState& s = state(u);
      if (s.received || !s.awaiting_reply) continue;
      const bool addressed = u == cl.current_requester;
      if (!addressed && !sim_.opportunistic_overhearing) {
        s.awaiting_reply = false;
        start_contention(u, UavState::Contention::Request);
        continue;
      }
      const double d2 = planar_distance(from, nodes_[static_cast<std::size_t>(u)].position);
      const bool ok = sim_.perfect_peer_links ||
                      reception_success(radio_.p_uav_mw, d2, LinkKind::UavToUav, radio_, recovery_rng_);
      UavOutcome& o = outcome(u);
      if (o.first_peer_attempt == PeerAttempt::None) o.first_peer_attempt = ok ? PeerAttempt::Success : PeerAttempt::Failure;
      if (ok) {
        deliver(u, ev.time);
      } else {
        s.awaiting_reply = false;
        start_contention(u, UavState::Contention::Request);
      }
    }
    cl.current_requester = -1;
    cl.done = std::all_of(cl.members.begin(), cl.members.end(), [&](int u) { return state(u).received; });
    schedule_access(ev.cluster, ev.time);
  }

  const RadioParams& radio_;
  const SimParams& sim_;
  std::vector<Node> nodes_;
  Rng broadcast_rng_;
  Rng recovery_rng_;
  std::vector<UavState> states_;
  std::vector<ClusterRuntime> clusters_;
  std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
  std::uint64_t seq_ = 0;
  SchemeOutcome out_;
};

} // namespace

SchemeOutcome run_clustering_scheme(const Topology& topo, const RadioParams& radio, const SimParams& sim,
                                    std::uint64_t seed) {
  check_inputs(topo, radio, sim);
  return ClusteringEngine(topo, radio, sim, seed).run();
}

SchemeOutcome run_ack_benchmark(const Topology& topo, const RadioParams& radio, const SimParams& sim,
                                std::uint64_t seed) {
  check_inputs(topo, radio, sim);
  const std::vector<Node> nodes = flatten(topo);
  SchemeOutcome out = blank_outcome(Scheme::Benchmark, nodes);
  Rng rng = make_rng(seed, kBroadcastStream);

  std::vector<int> unserved(nodes.size());
  for (std::size_t i = 0; i < unserved.size(); ++i) unserved[i] = static_cast<int>(i);

  const double round_len = sim.packet_len_ms + sim.t_ack_ms;
  for (int k = 1; !unserved.empty() && k * round_len <= sim.max_time_ms; ++k) {
    const double broadcast_end = (k - 1) * round_len + sim.packet_len_ms;
    const double ack_end = k * round_len;
    ++out.bs_transmissions;
    if (sim.record_events) out.events.push_back({broadcast_end, -1, EventKind::BsBroadcastEnd, sim.packet_id, -1});
    const std::vector<bool> got = broadcast_round(nodes, unserved, radio, sim, rng, k == 1);
    std::vector<int> still;
    for (std::size_t i = 0; i < unserved.size(); ++i) {
      const int u = unserved[i];
      UavOutcome& o = out.uavs[static_cast<std::size_t>(u)];
      if (k == 1) o.first_broadcast_success = got[i];
      if (got[i]) {
        o.delivered = true;
        o.delivery_time_ms = ack_end;
        ++out.control_messages;
        if (sim.record_events) out.events.push_back({ack_end, u, EventKind::AckRxEnd, sim.packet_id, o.cluster_id});
      } else {
        still.push_back(u);
      }
    }
    unserved = std::move(still);
  }
  return out;
}

SchemeOutcome run_rnc_scheme(const Topology& topo, const RadioParams& radio, const SimParams& sim,
                             std::uint64_t seed) {
  check_inputs(topo, radio, sim);
  const std::vector<Node> nodes = flatten(topo);
  SchemeOutcome out = blank_outcome(Scheme::Rnc, nodes);
  Rng rng = make_rng(seed, kBroadcastStream);
  const int g = sim.generation_size;
  const double budget = sim.max_time_ms * g;

  std::vector<int> unserved(nodes.size());
  for (std::size_t i = 0; i < unserved.size(); ++i) unserved[i] = static_cast<int>(i);
  std::vector<int> collected(nodes.size(), 0);

  for (int n = 1; !unserved.empty() && n * sim.packet_len_ms <= budget; ++n) {
    const double end = n * sim.packet_len_ms;
    ++out.bs_transmissions;
    if (sim.record_events) out.events.push_back({end, -1, EventKind::BsBroadcastEnd, sim.packet_id, -1});
    const std::vector<bool> got = broadcast_round(nodes, unserved, radio, sim, rng, n == 1);
    std::vector<int> still;
    for (std::size_t i = 0; i < unserved.size(); ++i) {
      const int u = unserved[i];
      UavOutcome& o = out.uavs[static_cast<std::size_t>(u)];
      if (n == 1) o.first_broadcast_success = got[i];
      if (got[i] && ++collected[static_cast<std::size_t>(u)] == g) {
        o.delivered = true;
        o.delivery_time_ms = (end + sim.t_ack_ms) / g;
        ++out.control_messages;
        if (sim.record_events) {
          out.events.push_back({end + sim.t_ack_ms, u, EventKind::AckRxEnd, sim.packet_id, o.cluster_id});
        }
      } else if (!o.delivered) {
        still.push_back(u);
      }
    }
    unserved = std::move(still);
  }
  return out;
}

SchemeOutcome run_scheme(Scheme scheme, const Topology& topo, const RadioParams& radio, const SimParams& sim,
                         std::uint64_t seed) {
  switch (scheme) {
  case Scheme::Clustering: return run_clustering_scheme(topo, radio, sim, seed);
  case Scheme::Benchmark: return run_ack_benchmark(topo, radio, sim, seed);
  case Scheme::Rnc: return run_rnc_scheme(topo, radio, sim, seed);
  }
  throw ParameterError("scheme", "unknown scheme");
}

} // namespace clustercast
