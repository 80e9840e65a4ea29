#pragma once

#include <random>

#include "k3lat/lattice.hpp"

namespace helpers {

// Random unimodular matrix as a product of elementary operations.
inline k3lat::IntMatrix random_unimodular(std::size_t n, std::mt19937& rng, int steps = 12) {
  k3lat::IntMatrix u = k3lat::IntMatrix::identity(n);
  if (n < 2) return u;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int s = 0; s < steps; ++s) {
    std::size_t a = idx(rng), b = idx(rng);
    if (a == b) continue;
    u.add_col(a, b, k3lat::Int(coef(rng)));
    if (s % 4 == 0) u.swap_cols(a, b);
  }
  return u;
}

inline k3lat::IntegralLattice change_basis(const k3lat::IntegralLattice& l,
                                           const k3lat::IntMatrix& u) {
  return k3lat::IntegralLattice(u.transpose() * l.gram() * u, l.label());
}

}  // namespace helpers
