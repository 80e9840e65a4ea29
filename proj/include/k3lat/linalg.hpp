#pragma once

#include <cstddef>
#include <optional>

#include "k3lat/matrix.hpp"

namespace k3lat {

// Bareiss fraction-free elimination.
Int determinant(const IntMatrix& a);
Rat determinant(const RatMatrix& a);

std::size_t rank(const RatMatrix& a);
inline std::size_t rank(const IntMatrix& a) { return rank(to_rat(a)); }

// Throws on a singular matrix.
RatMatrix inverse(const RatMatrix& a);
inline RatMatrix inverse(const IntMatrix& a) { return inverse(to_rat(a)); }

// Solves a x = b over Q; a must have full column rank.
std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b);

struct HermiteForm {
  IntMatrix h;          // row echelon, positive pivots, reduced above pivots
  IntMatrix transform;  // unimodular, transform * input = h
  std::size_t rank = 0;
};

// Row-style Hermite normal form.
HermiteForm hermite_rows(const IntMatrix& a);

// Basis (as columns) of the lattice spanned by the columns of a, in column
// Hermite form. Canonical for the spanned lattice.
IntMatrix column_span_basis(const IntMatrix& a);

struct SmithForm {
  IntMatrix d;  // diagonal, d_i | d_{i+1}, non-negative
  IntMatrix u;  // unimodular, u * a * v = d
  IntMatrix v;
  IntVector diagonal() const;
};

SmithForm smith(const IntMatrix& a);

// Columns form a basis of {x in Z^n : a x = 0}; always primitive.
IntMatrix integer_kernel(const IntMatrix& a);

// Basis (as columns) of {x in Z^k : c x ≡ 0 mod modulus}.
IntMatrix congruence_solutions(const IntMatrix& c, const Int& modulus);

// Columns of a (full column rank) are linearly independent lattice vectors;
// returns a basis of (Q-span ∩ Z^n).
IntMatrix saturate_columns(const IntMatrix& a);

// Extends the primitive vector v to a unimodular matrix with first column v.
IntMatrix complete_to_unimodular(const IntVector& v);

struct SymmetricSignature {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};

SymmetricSignature signature(const RatMatrix& s);
inline SymmetricSignature signature(const IntMatrix& s) {
  return signature(to_rat(s));
}

}  // namespace k3lat
