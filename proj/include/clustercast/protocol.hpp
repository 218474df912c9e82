#pragma once

// Discrete-event simulation of one packet epoch over one topology for three
// multicast schemes:
//   clustering: one BS broadcast, then lost packets are requested from and
//               replied by cluster peers under slotted CSMA/CA with request
//               and reply suppression;
//   benchmark:  BS broadcast + ACK rounds, rebroadcast until everyone ACKed;
//   rnc:        BS streams coded packets of a generation until every UAV
//               collected G of them.
//
// Randomness: every run takes a single seed. The first BS broadcast of every
// scheme is drawn from split_seed(seed, kBroadcastStream) in UAV order, so the
// three schemes see identical first-broadcast outcomes for the same seed.

#include "clustercast/channel.hpp"
#include "clustercast/geometry.hpp"
#include "clustercast/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace clustercast {

inline constexpr std::uint64_t kBroadcastStream = 1;
inline constexpr std::uint64_t kRecoveryStream = 2;

enum class EventKind { BsBroadcastEnd, RequestTxEnd, ReplyTxEnd, BackoffExpiry, AckRxEnd, Collision };

std::string_view to_string(EventKind k) noexcept;

/// One line of the event log. actor is the global UAV index (cluster-major),
/// or -1 for the BS.
struct EventRecord {
  double time_ms = 0.0;
  int actor = -1;
  EventKind kind = EventKind::BsBroadcastEnd;
  int packet_id = 0;
  int cluster_id = -1;

  bool operator==(const EventRecord&) const = default;
};

inline constexpr const char* kEventLogCsvHeader = "time,actor,event_kind,packet_id,cluster_id";
void write_event_log_csv(std::ostream& out, const std::vector<EventRecord>& events);

struct SimParams {
  double packet_len_ms = 10.0;
  double t_req_ms = 1.0;
  double t_ack_ms = 1.0;
  double slot_ms = 0.009;
  int cw_min = 16;
  int cw_max = 64;
  double max_time_ms = 1000.0;
  int generation_size = 8;
  /// UAVs waiting on a request they did not send take the packet from the reply too.
  bool opportunistic_overhearing = true;
  /// Every UAV-to-UAV payload is received (test hook).
  bool perfect_peer_links = false;
  bool record_events = false;
  int packet_id = 0;
  /// Forces the outcome of the first BS broadcast per UAV (test hook).
  std::optional<std::vector<bool>> broadcast_override;
};

SimParams sim_params_from(const ScenarioConfig& cfg);
void validate(const SimParams& sim);

/// Per-UAV protocol state of the clustering scheme within one packet epoch.
struct UavState {
  enum class Contention { None, Request, Reply };

  bool received = false;
  /// Heard a request for its missing packet (its own or a peer's) and is
  /// waiting for the reply instead of requesting.
  bool awaiting_reply = false;
  Contention contention = Contention::None;
  int backoff_slots = 0;
  int contention_window = 0;
  bool request_suppressed = false;
  bool reply_suppressed = false;
};

enum class FrameKind { Request, Reply };

/// Occupancy of one cluster's UAV channel.
struct MediumState {
  bool busy = false;
  double busy_until_ms = 0.0;
  int transmitter = -1;
  FrameKind frame = FrameKind::Request;
};

enum class PeerAttempt { None, Success, Failure };

struct UavOutcome {
  int cluster_id = -1;
  bool delivered = false;
  double delivery_time_ms = 0.0;
  bool first_broadcast_success = false;
  /// First UAV-to-UAV payload reception this UAV attempted (clustering only).
  PeerAttempt first_peer_attempt = PeerAttempt::None;
  int requests_sent = 0;
  int replies_sent = 0;
};

struct SchemeOutcome {
  Scheme scheme = Scheme::Clustering;
  std::vector<UavOutcome> uavs;
  std::int64_t bs_transmissions = 0;
  std::int64_t uav_transmissions = 0; // requests + replies, collided frames included
  std::int64_t control_messages = 0;  // requests (clustering) or ACKs (benchmark, rnc)
  std::int64_t requests = 0;
  std::int64_t replies = 0;
  std::int64_t collisions = 0;
  /// Successful replies for a request that had already been answered.
  std::int64_t duplicate_replies = 0;
  /// Requests sent by a UAV already holding the packet.
  std::int64_t requests_for_held_packet = 0;
  std::vector<EventRecord> events;

  int delivered_count() const noexcept;
  int undelivered_count() const noexcept;
  /// Mean delivery time over delivered UAVs (0 when none).
  double mean_delay_ms() const noexcept;
  double delivery_ratio() const noexcept;
  /// Fraction of UAVs whose first delivery attempt succeeded: the first BS
  /// broadcast, or for clustering the first peer reply after a broadcast loss.
  double first_attempt_success_ratio() const noexcept;
};

inline constexpr const char* kOutcomeCsvHeader =
    "uav_id,cluster_id,delivered,delivery_time_ms,first_broadcast_success,first_peer_attempt,requests_sent,"
    "replies_sent";
void write_outcome_csv_rows(std::ostream& out, const SchemeOutcome& outcome);

SchemeOutcome run_clustering_scheme(const Topology& topo, const RadioParams& radio, const SimParams& sim,
                                    std::uint64_t seed);

/// Rounds of broadcast (L) + one ACK window (t_ack). A UAV served in round k
/// has delivery time k * (L + t_ack).
SchemeOutcome run_ack_benchmark(const Topology& topo, const RadioParams& radio, const SimParams& sim,
                                std::uint64_t seed);

/// Coded packets of length L until every UAV holds G of them (any G decode).
/// Per-packet delivery time of a UAV is (T_G + t_ack) / G, where T_G is the
/// end of its G-th successful reception and t_ack its single terminal ACK.
/// The generation gets a time budget of G * max_time.
SchemeOutcome run_rnc_scheme(const Topology& topo, const RadioParams& radio, const SimParams& sim,
                             std::uint64_t seed);

SchemeOutcome run_scheme(Scheme scheme, const Topology& topo, const RadioParams& radio, const SimParams& sim,
                         std::uint64_t seed);

} // namespace clustercast
