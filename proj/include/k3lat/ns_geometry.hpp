#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "k3lat/catalog.hpp"
#include "k3lat/report.hpp"

namespace k3lat {

// A lattice with named classes in basis coordinates.
class LabeledLattice {
 public:
  using Relation = std::tuple<std::string, std::string, long>;

  // Throws naming the first relation a·b = value that fails.
  LabeledLattice(IntegralLattice lattice, std::map<std::string, IntVector> labels,
                 const std::vector<Relation>& relations = {});

  const IntegralLattice& lattice() const { return lattice_; }
  const std::map<std::string, IntVector>& labels() const { return labels_; }
  const IntVector& at(const std::string& name) const;
  Int product(const std::string& a, const std::string& b) const;

 private:
  IntegralLattice lattice_;
  std::map<std::string, IntVector> labels_;
};

// Basis E1, e1..e8.
LabeledLattice build_X2();

struct X2Involutions {
  IsometryAction sigma;
  IsometryAction iota_q;
  IsometryAction iota_dp;
};

X2Involutions involutions_X2();

ReportList verify_sections();

// True when E^⊥ has Gram 2·(even matrix), so E^⊥ has no (-2)-vectors.
bool no_reducible_fibers(const LabeledLattice& l, const std::string& label);

ReportList orbit_and_even_sets();

// Columns: H, N1..N7, (ΣN_i)/2 in the basis E1, e1..e8.
IntMatrix base_change();
ReportList base_change_report();

struct EvenSetSearch {
  std::size_t vectors = 0;           // v² = -2, v·E = 1 inside the box
  std::size_t cliques = 0;           // pairwise orthogonal 8-sets
  std::vector<std::vector<IntVector>> sets;  // 2-divisible ones, canonical order
};

// All 8-sets of pairwise orthogonal (-2)-vectors meeting E once, with
// coordinates in [-bound, bound] and sum divisible by 2.
EvenSetSearch find_even_sets(const LabeledLattice& l, const std::string& label, long bound);

// <2> ⊕ E8(-2) with the isotropic class E = 2h + e1 + e3. Every product with E
// is even, so no class meets E once and the even-set search is empty.
LabeledLattice build_L12_surrogate();

struct VgsModel {
  LabeledLattice ns;  // basis F, F+O, C1..C7, s = (ΣC_j)/2
  IsometryAction sigma_t;
};

VgsModel build_UN_vgs();
ReportList vgs_report();

// v = F - e·(F+O+t); returns the genus of v^⊥.
GenusDescriptor vgs_polarized_complement(const Int& e);
ReportList vgs_polarized_report(const Int& e);
// The literal reading v = F - e(O+t); a discrepancy record when it disagrees.
Report vgs_literal_record(const Int& e);

enum class GlueHost { N, E8 };

// (U(2) ⊕ W)' for W = N or E8(-2), the polarized embeddings for the odd
// parameters given, and (for E8) the rank-10 genus comparisons.
ReportList glue_constructions(GlueHost which, const std::vector<Int>& params = {1, 3, 5});
ReportList glue_constructions(const std::vector<Int>& params = {1, 3, 5});

}  // namespace k3lat
