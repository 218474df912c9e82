#include "clustercast/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return clustercast::run_cli(argc, argv, std::cout, std::cerr);
}
