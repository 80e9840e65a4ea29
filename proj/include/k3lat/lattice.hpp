#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "k3lat/finite_form.hpp"
#include "k3lat/linalg.hpp"

namespace k3lat {

class IntegralLattice {
 public:
  IntegralLattice() = default;
  // Rejects non-symmetric or odd Grams; a singular Gram needs allow_degenerate.
  explicit IntegralLattice(IntMatrix gram, std::string label = {},
                           bool allow_degenerate = false);

  std::size_t rank() const { return gram_.rows(); }
  const IntMatrix& gram() const { return gram_; }
  const std::string& label() const { return label_; }
  const Int& determinant() const { return det_; }
  bool degenerate() const { return det_ == 0; }

  Int product(const IntVector& a, const IntVector& b) const;
  Rat product(const RatVector& a, const RatVector& b) const;
  Int norm(const IntVector& a) const { return product(a, a); }

  IntegralLattice relabeled(std::string label) const;

 private:
  IntMatrix gram_;
  std::string label_;
  Int det_ = 1;
};

struct GramInvariants {
  std::size_t rank = 0;
  Int determinant;
  std::size_t sig_plus = 0;
  std::size_t sig_minus = 0;
};

GramInvariants gram_invariants(const IntegralLattice& l);
IntegralLattice direct_sum(const IntegralLattice& a, const IntegralLattice& b);
IntegralLattice direct_sum(const std::vector<IntegralLattice>& parts);
IntegralLattice rescale(const IntegralLattice& l, const Int& n);
// Rank-one lattice <n>.
IntegralLattice rank_one(const Int& n);

bool is_negative_definite(const IntegralLattice& l);

class Embedding {
 public:
  // Columns of matrix are the images of the sub basis in host coordinates.
  Embedding(IntegralLattice host, IntMatrix matrix, std::string label = {});

  const IntegralLattice& host() const { return host_; }
  const IntegralLattice& sub() const { return sub_; }
  const IntMatrix& matrix() const { return matrix_; }

 private:
  IntegralLattice host_;
  IntegralLattice sub_;
  IntMatrix matrix_;
};

class IsometryAction {
 public:
  IsometryAction(IntegralLattice lattice, IntMatrix matrix);

  const IntegralLattice& lattice() const { return lattice_; }
  const IntMatrix& matrix() const { return matrix_; }
  IntVector apply(const IntVector& v) const { return matrix_ * v; }

 private:
  IntegralLattice lattice_;
  IntMatrix matrix_;
};

struct DiscriminantGroup {
  std::vector<Int> factors;  // invariant factors > 1
  RatMatrix lifts;           // columns: dual-lattice lifts of the generators
  IntMatrix coord_rows;      // coords(x) = coord_rows * (G x) mod factors

  std::size_t length() const { return factors.size(); }
  Element coordinates(const IntMatrix& gram, const RatVector& dual) const;
  RatVector lift(const Element& coords) const;
};

DiscriminantGroup discriminant_group(const IntegralLattice& l);
FiniteQuadraticForm discriminant_form(const IntegralLattice& l);
FiniteQuadraticForm discriminant_form(const IntegralLattice& l,
                                      const DiscriminantGroup& group);

Embedding orthogonal_complement(const Embedding& e);
Embedding saturation(const Embedding& e);
bool is_primitive(const Embedding& e);
// [saturation : image]
Int saturation_index(const Embedding& e);

struct InvariantSplit {
  Embedding fixed;
  Embedding anti;
};

InvariantSplit invariant_split(const IsometryAction& g);

}  // namespace k3lat
