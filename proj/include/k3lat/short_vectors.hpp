#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "k3lat/lattice.hpp"

namespace k3lat {

struct ShortVectors {
  // norm -> one representative per ± pair (first nonzero coordinate positive),
  // lexicographically sorted; norms run from -2 downwards.
  std::map<Int, std::vector<IntVector>, std::greater<Int>> by_norm;
  // Number of vectors counting both signs.
  std::size_t count() const;
  std::size_t count(const Int& norm) const;
};

// All v with 0 > v² >= norm_bound in a negative-definite lattice.
ShortVectors short_vectors(const IntegralLattice& l, const Int& norm_bound);

// Columns form a basis of l on which no pair b_i, b_j can be shortened by
// b_i -= k b_j. Exact; a cheap substitute for LLL on definite lattices.
IntMatrix pair_reduce(const IntegralLattice& l);

// Returns M with Mᵀ G2 M = G1 (columns: images of L1's basis in L2), or
// nothing after an exhaustive search. Both lattices must be negative definite.
std::optional<IntMatrix> is_isometric_definite(const IntegralLattice& l1,
                                               const IntegralLattice& l2,
                                               std::uint64_t budget = kDefaultBudget);

}  // namespace k3lat
