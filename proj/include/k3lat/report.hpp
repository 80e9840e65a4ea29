#pragma once

#include <optional>
#include <string>
#include <vector>

#include "k3lat/matrix.hpp"

namespace k3lat {

enum class Status { Pass, Fail, Discrepancy, Inconclusive };

std::string status_name(Status s);

// One verified assertion. Vectors are stored as single-row witnesses.
struct Report {
  std::string check;
  Status status = Status::Pass;
  std::string detail;
  std::optional<IntMatrix> witness;
};

using ReportList = std::vector<Report>;

Report check(std::string name, bool ok, std::string detail = {},
             std::optional<IntMatrix> witness = std::nullopt);
IntMatrix row_witness(const IntVector& v);

// Appends b to a.
void append(ReportList& a, ReportList b);
bool any_fail(const ReportList& r);

}  // namespace k3lat
