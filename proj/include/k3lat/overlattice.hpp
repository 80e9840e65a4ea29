#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "k3lat/isotropic.hpp"
#include "k3lat/lattice.hpp"

namespace k3lat {

struct GenusDescriptor {
  std::size_t sig_plus = 0;
  std::size_t sig_minus = 0;
  FiniteQuadraticForm disc;
  std::size_t rank() const { return sig_plus + sig_minus; }
};

GenusDescriptor make_genus(std::size_t sig_plus, std::size_t sig_minus,
                           FiniteQuadraticForm disc);
GenusDescriptor genus_of(const IntegralLattice& l);
bool genus_equal(const GenusDescriptor& a, const GenusDescriptor& b,
                 std::uint64_t budget = kDefaultBudget);
// True certifies uniqueness in the genus; false certifies nothing.
bool unique_in_genus_by_length(const GenusDescriptor& g);

struct Overlattice {
  IntegralLattice lattice;
  IntMatrix embedding;      // columns: basis of the original lattice in new coordinates
  RatMatrix basis;          // columns: new basis in original coordinates
  std::vector<Element> glue;  // generators of the isotropic subgroup used
  Int index;
};

// The lattice generated by l and dual lifts of the glue elements.
Overlattice overlattice_from_glue(const IntegralLattice& l, const DiscriminantGroup& group,
                                  const std::vector<Element>& glue);

std::vector<Overlattice> overlattices(const IntegralLattice& l, std::int64_t index,
                                      bool cyclic_only = false);

struct LemmaResult {
  Overlattice z;
  Embedding w;  // W inside Z
};

// V = <2d> ⊕ W; block_e1/block_e2 are dual vectors of W spanning a u(m)
// block of A_W (q = 0, b = -1/m).
LemmaResult lemma_overlattice(const Int& d, std::int64_t m, const IntegralLattice& w,
                              const RatVector& block_e1, const RatVector& block_e2);

struct LemmaBlock {
  Element h;   // generator of the (1/2d) summand
  Element e1;  // u(m) block
  Element e2;
};

GenusDescriptor genus_lemma_quotient(const GenusDescriptor& gv, const LemmaBlock& block,
                                     const Int& d, std::int64_t m);

}  // namespace k3lat
