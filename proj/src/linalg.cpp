#include "k3lat/linalg.hpp"

#include <algorithm>

namespace k3lat {

Int determinant(const IntMatrix& a) {
  if (!a.is_square()) throw Error("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int x = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

Rat determinant(const RatMatrix& a) {
  if (!a.is_square()) throw Error("determinant of a non-square matrix");
  RatMatrix m = a;
  const std::size_t n = m.rows();
  Rat det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      m.swap_rows(p, k);
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      Rat f = m(i, k) / m(k, k);
      m.add_row(i, k, -f);
    }
  }
  return det;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& m, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    Rat inv = 1 / m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != r && m(i, c) != 0) m.add_row(i, r, Rat(-m(i, c)));
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const RatMatrix& a) {
  RatMatrix m = a;
  return rref(m, m.cols()).size();
}

RatMatrix inverse(const RatMatrix& a) {
  if (!a.is_square()) throw Error("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  if (rref(aug, n).size() != n) throw Error("inverse of a singular matrix");
  return aug.submatrix(0, n, n, n);
}

std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m) throw Error("solve shape mismatch");
  RatMatrix aug(m, n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  auto piv = rref(aug, n);
  if (piv.size() != n) throw Error("solve needs full column rank");
  for (std::size_t i = n; i < m; ++i)
    if (aug(i, n) != 0) return std::nullopt;
  RatVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[piv[i]] = aug(i, n);
  return x;
}

HermiteForm hermite_rows(const IntMatrix& a) {
  HermiteForm out;
  out.h = a;
  out.transform = IntMatrix::identity(a.rows());
  IntMatrix& h = out.h;
  IntMatrix& u = out.transform;
  const std::size_t m = h.rows(), n = h.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    bool found = false;
    for (;;) {
      std::size_t piv = m;
      for (std::size_t i = r; i < m; ++i) {
        if (h(i, c) == 0) continue;
        if (piv == m || abs(h(i, c)) < abs(h(piv, c))) piv = i;
      }
      if (piv == m) break;
      found = true;
      h.swap_rows(r, piv);
      u.swap_rows(r, piv);
      bool done = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (h(i, c) == 0) continue;
        Int q = floor_div(h(i, c), h(r, c));
        h.add_row(i, r, Int(-q));
        u.add_row(i, r, Int(-q));
        if (h(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (!found) continue;
    if (h(r, c) < 0) {
      h.negate_row(r);
      u.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Int q = floor_div(h(i, c), h(r, c));
      if (q == 0) continue;
      h.add_row(i, r, Int(-q));
      u.add_row(i, r, Int(-q));
    }
    ++r;
  }
  out.rank = r;
  return out;
}

IntMatrix column_span_basis(const IntMatrix& a) {
  HermiteForm hf = hermite_rows(a.transpose());
  return hf.h.submatrix(0, 0, hf.rank, a.rows()).transpose();
}

IntVector SmithForm::diagonal() const {
  IntVector out;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i)
    out.push_back(d(i, i));
  return out;
}

SmithForm smith(const IntMatrix& a) {
  SmithForm s;
  s.d = a;
  s.u = IntMatrix::identity(a.rows());
  s.v = IntMatrix::identity(a.cols());
  IntMatrix& d = s.d;
  const std::size_t m = d.rows(), n = d.cols();
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    bool any = true;
    for (;;) {
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (d(i, j) == 0) continue;
          if (pi == m || abs(d(i, j)) < abs(d(pi, pj))) {
            pi = i;
            pj = j;
          }
        }
      if (pi == m) {
        any = false;
        break;
      }
      d.swap_rows(t, pi);
      s.u.swap_rows(t, pi);
      d.swap_cols(t, pj);
      s.v.swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        Int q = d(i, t) / d(t, t);
        d.add_row(i, t, Int(-q));
        s.u.add_row(i, t, Int(-q));
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        Int q = d(t, j) / d(t, t);
        d.add_col(j, t, Int(-q));
        s.v.add_col(j, t, Int(-q));
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == m) break;
      d.add_row(t, bad, Int(1));
      s.u.add_row(t, bad, Int(1));
    }
    if (!any) break;
    if (d(t, t) < 0) {
      d.negate_row(t);
      s.u.negate_row(t);
    }
  }
  return s;
}

IntMatrix integer_kernel(const IntMatrix& a) {
  const std::size_t n = a.cols();
  if (a.rows() == 0) return IntMatrix::identity(n);
  HermiteForm hf = hermite_rows(a.transpose());
  const std::size_t k = n - hf.rank;
  IntMatrix rows(k, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) rows(i, j) = hf.transform(hf.rank + i, j);
  if (k == 0) return IntMatrix(n, 0);
  HermiteForm canon = hermite_rows(rows);
  return canon.h.submatrix(0, 0, canon.rank, n).transpose();
}

IntMatrix congruence_solutions(const IntMatrix& c, const Int& modulus) {
  const std::size_t r = c.rows(), k = c.cols();
  if (r == 0) return IntMatrix::identity(k);
  IntMatrix aug = hstack(c, modulus * IntMatrix::identity(r));
  IntMatrix ker = integer_kernel(aug);
  return column_span_basis(ker.submatrix(0, 0, k, ker.cols()));
}

IntMatrix saturate_columns(const IntMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() == 0) return IntMatrix(n, 0);
  IntMatrix ann = integer_kernel(a.transpose());
  if (ann.cols() == 0) return IntMatrix::identity(n);
  return integer_kernel(ann.transpose());
}

IntMatrix complete_to_unimodular(const IntVector& v) {
  const std::size_t n = v.size();
  IntMatrix col(n, 1);
  for (std::size_t i = 0; i < n; ++i) col(i, 0) = v[i];
  HermiteForm hf = hermite_rows(col);
  if (hf.rank != 1 || hf.h(0, 0) != 1) throw Error("vector is not primitive");
  return to_int(inverse(to_rat(hf.transform)));
}

SymmetricSignature signature(const RatMatrix& s0) {
  if (!s0.is_symmetric()) throw Error("signature of a non-symmetric matrix");
  RatMatrix s = s0;
  const std::size_t n = s.rows();
  std::vector<bool> alive(n, true);
  SymmetricSignature sig;
  std::size_t remaining = n;
  while (remaining > 0) {
    std::size_t piv = n;
    for (std::size_t i = 0; i < n; ++i)
      if (alive[i] && s(i, i) != 0) {
        piv = i;
        break;
      }
    if (piv != n) {
      const Rat p = s(piv, piv);
      (p > 0 ? sig.positive : sig.negative)++;
      alive[piv] = false;
      --remaining;
      for (std::size_t j = 0; j < n; ++j) {
        if (!alive[j] || s(j, piv) == 0) continue;
        Rat f = s(j, piv) / p;
        for (std::size_t k = 0; k < n; ++k)
          if (alive[k]) s(j, k) -= f * s(piv, k);
      }
      continue;
    }
    // Zero diagonal: pivot on a hyperbolic pair.
    std::size_t a = n, b = n;
    for (std::size_t i = 0; i < n && a == n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j)
        if (alive[j] && s(i, j) != 0) {
          a = i;
          b = j;
          break;
        }
    }
    if (a == n) {
      sig.zero += remaining;
      break;
    }
    const Rat x = s(a, b);
    alive[a] = alive[b] = false;
    remaining -= 2;
    sig.positive++;
    sig.negative++;
    RatMatrix t = s;
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k]) continue;
      for (std::size_t l = 0; l < n; ++l) {
        if (!alive[l]) continue;
        t(k, l) = s(k, l) - (s(k, a) * s(b, l) + s(k, b) * s(a, l)) / x;
      }
    }
    s = std::move(t);
  }
  return sig;
}

}  // namespace k3lat
