#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tdpp {

// Exit codes: 0 success, 1 input error, 2 routing/regression failure,
// 3 validation failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Topology used by the demo-fig3 subcommand; data/fig3.topo ships the same
/// document.
const char* fig3_topology_text();

} // namespace tdpp
