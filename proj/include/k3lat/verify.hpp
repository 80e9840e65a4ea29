#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "k3lat/integer.hpp"
#include "k3lat/report.hpp"

namespace k3lat {

// Unset fields select each suite's default parameter sweep.
struct SuiteParams {
  std::optional<int> n;
  std::optional<Int> d;
  std::optional<Int> e;
  std::optional<int> m;
  long bound = 5;
  int depth = 5;
  std::uint64_t budget = kDefaultBudget;
};

const std::vector<std::string>& suite_names();

// Runs one suite ("all" runs every suite in order). Budget exhaustion becomes
// an inconclusive record and any other error a failed one; unknown names throw.
ReportList run_suite(const std::string& name, const SuiteParams& params = {});

// Parameters reachable from d by alternating cover/quotient steps with the
// M(2d,2) = Lp(2d,2) identification, with the number of steps taken.
std::vector<std::pair<Int, int>> tower_chain(const Int& d, const Int& limit);

}  // namespace k3lat
