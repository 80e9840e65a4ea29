#include "k3lat/report.hpp"

#include <algorithm>

namespace k3lat {

std::string status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Discrepancy: return "discrepancy";
    case Status::Inconclusive: return "inconclusive";
  }
  return "fail";
}

Report check(std::string name, bool ok, std::string detail, std::optional<IntMatrix> witness) {
  return {std::move(name), ok ? Status::Pass : Status::Fail, std::move(detail),
          std::move(witness)};
}

IntMatrix row_witness(const IntVector& v) {
  IntMatrix m(1, v.size());
  for (std::size_t j = 0; j < v.size(); ++j) m(0, j) = v[j];
  return m;
}

void append(ReportList& a, ReportList b) {
  for (auto& r : b) a.push_back(std::move(r));
}

bool any_fail(const ReportList& r) {
  return std::any_of(r.begin(), r.end(), [](const Report& x) { return x.status == Status::Fail; });
}

}  // namespace k3lat
