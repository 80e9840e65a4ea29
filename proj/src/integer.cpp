#include "k3lat/integer.hpp"

#include <limits>

namespace k3lat {

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int mod(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (r < 0) r += abs(m);
  return r;
}

Rat mod(const Rat& r, const Int& m) {
  // r - m * floor(r / m)
  Rat q = r / Rat(m);
  Int fl = floor_div(q.get_num(), q.get_den());
  Rat out = r - Rat(m * fl);
  out.canonicalize();
  return out;
}

Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

bool fits_int64(const Int& a) {
  static const Int lo(std::to_string(std::numeric_limits<std::int64_t>::min()));
  static const Int hi(std::to_string(std::numeric_limits<std::int64_t>::max()));
  return a >= lo && a <= hi;
}

std::int64_t to_int64(const Int& a) {
  if (!fits_int64(a)) throw Error("integer does not fit in 64 bits: " + a.get_str());
  return std::stoll(a.get_str());
}

std::string to_string(const Int& a) { return a.get_str(); }

std::string to_string(const Rat& a) { return a.get_str(); }

IntVector to_int_vector(const std::vector<long>& v) {
  IntVector out;
  out.reserve(v.size());
  for (long x : v) out.emplace_back(x);
  return out;
}

RatVector to_rat_vector(const IntVector& v) {
  RatVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

}  // namespace k3lat
