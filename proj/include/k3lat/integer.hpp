#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace k3lat {

using Int = mpz_class;
using Rat = mpq_class;
using IntVector = std::vector<Int>;
using RatVector = std::vector<Rat>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A search ran out of its node budget. This never means "no".
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

Int floor_div(const Int& a, const Int& b);
// Least non-negative residue.
Int mod(const Int& a, const Int& m);
// Representative of r modulo m in [0, m).
Rat mod(const Rat& r, const Int& m);

Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);

bool fits_int64(const Int& a);
std::int64_t to_int64(const Int& a);

std::string to_string(const Int& a);
std::string to_string(const Rat& a);

IntVector to_int_vector(const std::vector<long>& v);
RatVector to_rat_vector(const IntVector& v);

}  // namespace k3lat
