#pragma once

#include <array>
#include <optional>
#include <vector>

#include "k3lat/catalog.hpp"
#include "k3lat/report.hpp"

namespace k3lat {

// L(e,2) -> Mp(2e,2) and Lp(2e,2) -> M(e,2); cover_step is the inverse.
FamilyDescriptor quotient_step(const FamilyDescriptor& f);
FamilyDescriptor cover_step(const FamilyDescriptor& f);

// M(2d,2) <-> Lp(2d,2); throws for other descriptors.
FamilyDescriptor identify_even(const FamilyDescriptor& f);

struct TowerNode {
  FamilyDescriptor ns;
  IntegralLattice transcendental;
  int depth = 0;
};

// U ⊕ U ⊕ N ⊕ <-2e>.
IntegralLattice transcendental_lattice(const Int& e);

// Nodes M(2^m d, 2), m = 0..depth; throws if a node invariant fails.
std::vector<TowerNode> tower(const Int& d, int depth);
ReportList tower_report(const Int& d, int depth);

struct TowerRelation {
  bool identical = false;  // d = e
  bool related = false;    // d = 2^m e or e = 2^m d with m > 0
  int m = 0;
  Int degree = 1;          // 2^m
};

TowerRelation tower_related(const Int& d, const Int& e);

struct MukaiCheck {
  IntegralLattice pic;       // rank 11
  IntVector v;               // 2^m d f2 - f3
  IntegralLattice quotient;  // v^⊥ / Zv
  bool genus_matches = false;
};

MukaiCheck mukai_twisted_check(int m, const Int& d);
ReportList mukai_report(int m, const Int& d);

struct GaloisInvariants {
  Rat chi_w;
  Rat h20_w;
  Rat h20_v;
  int h10 = 0;
  bool bound_holds = false;  // h20_v >= 3 + 32d >= 35
};

GaloisInvariants galois_cover_invariants(const Int& d, const std::vector<Int>& k);

}  // namespace k3lat
