#include "k3lat/finite_form.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "k3lat/linalg.hpp"

namespace k3lat {

namespace {

using i128 = __int128;

std::int64_t pmod(i128 a, std::int64_t m) {
  i128 r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

bool is_integer(const Rat& r) { return r.get_den() == 1; }

}  // namespace

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

FiniteQuadraticForm::FiniteQuadraticForm(std::vector<std::int64_t> orders,
                                         const RatMatrix& q_gram,
                                         bool allow_degenerate)
    : orders_(std::move(orders)) {
  const std::size_t k = orders_.size();
  if (q_gram.rows() != k || q_gram.cols() != k)
    throw Error("q_gram shape does not match generator count");
  if (!q_gram.is_symmetric()) throw Error("q_gram is not symmetric");
  Int size = 1, e = 1;
  for (auto d : orders_) {
    if (d < 1) throw Error("generator orders must be positive");
    size *= Int(static_cast<long>(d));
    e = lcm(e, Int(static_cast<long>(d)));
  }
  if (size > Int(1) << 62 || e > Int(1) << 31)
    throw Error("finite form too large");
  size_ = to_int64(size);
  exponent_ = to_int64(e);

  q_gram_ = RatMatrix(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      q_gram_(i, j) = mod(q_gram(i, j), Int(i == j ? 2 : 1));
  for (std::size_t i = 0; i < k; ++i) {
    const Rat di(static_cast<long>(orders_[i]));
    const Rat& qi = q_gram_(i, i);
    if (!is_integer(di * qi) || !is_integer(di * di * qi / 2))
      throw Error("q value incompatible with generator order");
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      if (!is_integer(di * q_gram_(i, j)))
        throw Error("pairing incompatible with generator order");
    }
  }
  const Rat er(static_cast<long>(exponent_));
  qd_.resize(k);
  bs_.assign(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    Rat s = q_gram_(i, i) * er;
    qd_[i] = to_int64(s.get_num());
    for (std::size_t j = 0; j < k; ++j) {
      Rat t = q_gram_(i, j) * er;
      bs_[i][j] = to_int64(mod(t.get_num(), Int(static_cast<long>(exponent_))));
    }
  }
  if (!allow_degenerate && !is_nondegenerate())
    throw Error("finite quadratic form is degenerate");
}

std::vector<std::int64_t> FiniteQuadraticForm::invariant_factors() const {
  std::int64_t all = 1;
  for (auto d : orders_) all = std::lcm(all, d);
  std::vector<std::vector<std::int64_t>> powers;  // per prime, descending
  std::size_t len = 0;
  for (auto p : prime_divisors(all)) {
    std::vector<std::int64_t> pw;
    for (auto d : orders_) {
      std::int64_t q = 1;
      while (d % p == 0) {
        d /= p;
        q *= p;
      }
      if (q > 1) pw.push_back(q);
    }
    std::sort(pw.rbegin(), pw.rend());
    len = std::max(len, pw.size());
    powers.push_back(std::move(pw));
  }
  std::vector<std::int64_t> out(len, 1);
  for (const auto& pw : powers)
    for (std::size_t j = 0; j < pw.size(); ++j) out[j] *= pw[j];
  std::reverse(out.begin(), out.end());
  return out;
}

Element FiniteQuadraticForm::generator(std::size_t i) const {
  Element e = zero();
  e[i] = orders_[i] == 1 ? 0 : 1;
  return e;
}

Element FiniteQuadraticForm::normalize(Element x) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = pmod(x[i], orders_[i]);
  return x;
}

Element FiniteQuadraticForm::add(const Element& x, const Element& y) const {
  Element z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] + y[i]) % orders_[i];
  return z;
}

Element FiniteQuadraticForm::scale(const Element& x, std::int64_t k) const {
  Element z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    z[i] = pmod(static_cast<i128>(x[i]) * k, orders_[i]);
  return z;
}

std::int64_t FiniteQuadraticForm::order_of(const Element& x) const {
  std::int64_t o = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    o = std::lcm(o, orders_[i] / std::gcd(x[i], orders_[i]));
  }
  return o;
}

bool FiniteQuadraticForm::is_zero(const Element& x) const {
  return std::all_of(x.begin(), x.end(), [](std::int64_t v) { return v == 0; });
}

void FiniteQuadraticForm::require_enumerable() const {
  if (size_ > kMaxEnumerable) throw Error("finite form too large to enumerate");
}

std::int64_t FiniteQuadraticForm::index_of(const Element& x) const {
  std::int64_t idx = 0, stride = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    idx += x[i] * stride;
    stride *= orders_[i];
  }
  return idx;
}

Element FiniteQuadraticForm::element_at(std::int64_t index) const {
  Element x(orders_.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = index % orders_[i];
    index /= orders_[i];
  }
  return x;
}

std::int64_t FiniteQuadraticForm::q_scaled(const Element& x) const {
  const std::int64_t m = 2 * exponent_;
  i128 s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    s += static_cast<i128>(pmod(static_cast<i128>(x[i]) * x[i], m)) * qd_[i];
    s %= m;
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (x[j] == 0) continue;
      s += 2 * static_cast<i128>(pmod(static_cast<i128>(x[i]) * x[j], m)) * bs_[i][j];
      s %= m;
    }
  }
  return pmod(s, m);
}

std::int64_t FiniteQuadraticForm::b_scaled(const Element& x, const Element& y) const {
  const std::int64_t m = exponent_;
  i128 s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] == 0) continue;
      s += static_cast<i128>(pmod(static_cast<i128>(x[i]) * y[j], m)) * bs_[i][j];
      s %= m;
    }
  }
  return pmod(s, m);
}

Rat FiniteQuadraticForm::q(const Element& x) const {
  Rat r(static_cast<long>(q_scaled(x)), static_cast<unsigned long>(exponent_));
  r.canonicalize();
  return r;
}

Rat FiniteQuadraticForm::b(const Element& x, const Element& y) const {
  Rat r(static_cast<long>(b_scaled(x, y)), static_cast<unsigned long>(exponent_));
  r.canonicalize();
  return r;
}

bool FiniteQuadraticForm::is_nondegenerate() const {
  // The radical has preimage {x : B x ≡ 0 mod e}; it is trivial iff that
  // preimage is exactly ⊕ d_i Z.
  const std::size_t k = orders_.size();
  if (k == 0) return true;
  IntMatrix c(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) c(i, j) = static_cast<long>(bs_[j][i]);
  IntMatrix p = congruence_solutions(c, Int(static_cast<long>(exponent_)));
  return abs(determinant(p)) == Int(static_cast<long>(size_));
}

FiniteQuadraticForm u_block(std::int64_t n) {
  if (n < 1) throw Error("u_block needs n >= 1");
  RatMatrix q(2, 2);
  q(0, 1) = q(1, 0) = Rat(-1, n);
  q(0, 1).canonicalize();
  q(1, 0).canonicalize();
  return FiniteQuadraticForm({n, n}, q);
}

FiniteQuadraticForm cyclic_block(std::int64_t order, const Rat& q_value) {
  RatMatrix q(1, 1);
  q(0, 0) = q_value;
  return FiniteQuadraticForm({order}, q);
}

FiniteQuadraticForm sum_forms(const std::vector<FiniteQuadraticForm>& forms) {
  std::vector<std::int64_t> orders;
  std::size_t k = 0;
  for (const auto& f : forms) k += f.generator_count();
  RatMatrix q(k, k);
  std::size_t off = 0;
  for (const auto& f : forms) {
    for (std::size_t i = 0; i < f.generator_count(); ++i) {
      orders.push_back(f.orders()[i]);
      for (std::size_t j = 0; j < f.generator_count(); ++j)
        q(off + i, off + j) = f.q_gram()(i, j);
    }
    off += f.generator_count();
  }
  return FiniteQuadraticForm(orders, q);
}

FiniteQuadraticForm negate(const FiniteQuadraticForm& q) {
  return FiniteQuadraticForm(q.orders(), Rat(-1) * q.q_gram());
}

FiniteQuadraticForm subform(const FiniteQuadraticForm& q,
                            const std::vector<Element>& basis,
                            const std::vector<std::int64_t>& orders,
                            bool allow_degenerate) {
  const std::size_t k = basis.size();
  RatMatrix g(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      g(i, j) = i == j ? q.q(basis[i]) : q.b(basis[i], basis[j]);
  return FiniteQuadraticForm(orders, g, allow_degenerate);
}

std::map<std::int64_t, std::int64_t> value_histogram(const FiniteQuadraticForm& q) {
  if (q.size() > FiniteQuadraticForm::kMaxEnumerable)
    throw Error("finite form too large to enumerate");
  std::map<std::int64_t, std::int64_t> h;
  for (std::int64_t i = 0; i < q.size(); ++i) h[q.q_scaled(q.element_at(i))]++;
  return h;
}

namespace {

using Poly = std::vector<Int>;

Poly divide_exact(const Poly& p0, const Poly& f) {
  Poly p = p0;
  const std::size_t df = f.size() - 1, dp = p.size() - 1;
  Poly quot(dp - df + 1, Int(0));
  for (std::size_t i = dp + 1; i-- > df;) {
    const Int c = p[i];
    if (c == 0) continue;
    const std::size_t shift = i - df;
    quot[shift] = c;
    for (std::size_t j = 0; j <= df; ++j) p[shift + j] -= c * f[j];
  }
  return quot;
}

// Cyclotomic polynomial Φ_n, lowest degree first.
Poly cyclotomic(std::size_t n) {
  Poly p(n + 1, Int(0));
  p[0] = -1;
  p[n] = 1;
  for (std::size_t d = 1; d < n; ++d)
    if (n % d == 0) p = divide_exact(p, cyclotomic(d));
  return p;
}

Poly reduce(Poly a, const Poly& phi) {
  const std::size_t deg = phi.size() - 1;
  for (std::size_t i = a.size(); i-- > deg;) {
    if (a[i] == 0) continue;
    Int c = a[i];
    std::size_t shift = i - deg;
    for (std::size_t j = 0; j <= deg; ++j) a[shift + j] -= c * phi[j];
  }
  a.resize(std::min(a.size(), deg));
  return a;
}

bool is_zero_poly(const Poly& a) {
  return std::all_of(a.begin(), a.end(), [](const Int& x) { return x == 0; });
}

}  // namespace

int milgram_signature(const FiniteQuadraticForm& q) {
  if (q.size() > FiniteQuadraticForm::kMaxEnumerable)
    throw Error("finite form too large to enumerate");
  if (!q.is_nondegenerate()) throw Error("Milgram signature of a degenerate form");
  const std::int64_t e = q.exponent();
  const std::size_t n = std::lcm<std::size_t>(2 * e, 8);
  const std::size_t step = n / (2 * e);
  std::vector<std::int64_t> counts(n, 0);
  for (std::int64_t i = 0; i < q.size(); ++i)
    counts[(q.q_scaled(q.element_at(i)) * step) % n]++;
  const Poly phi = cyclotomic(n);
  const Int size(static_cast<long>(q.size()));
  for (int sigma = 0; sigma < 8; ++sigma) {
    // t = S * ζ8^{-σ} as a vector mod x^n - 1
    Poly t(n, Int(0));
    const std::size_t shift = (n - (n / 8) * sigma) % n;
    for (std::size_t k = 0; k < n; ++k)
      t[(k + shift) % n] += static_cast<long>(counts[k]);
    Poly diff(n, Int(0));
    for (std::size_t k = 0; k < n; ++k) diff[k] = t[k] - t[(n - k) % n];
    if (!is_zero_poly(reduce(diff, phi))) continue;
    Poly sq(2 * n, Int(0));
    for (std::size_t a = 0; a < n; ++a) {
      if (t[a] == 0) continue;
      for (std::size_t b = 0; b < n; ++b)
        if (t[b] != 0) sq[a + b] += t[a] * t[b];
    }
    sq[0] -= size;
    if (!is_zero_poly(reduce(sq, phi))) continue;
    // t is ±sqrt|A|; |t| >= 1 so a float evaluation fixes the sign.
    long double re = 0;
    const long double pi = std::acos(-1.0L);
    for (std::size_t k = 0; k < n; ++k)
      if (t[k] != 0) re += t[k].get_d() * std::cos(2 * pi * k / n);
    if (re > 0) return sigma;
  }
  throw Error("Gauss sum has no valid phase; form is corrupted");
}

}  // namespace k3lat
