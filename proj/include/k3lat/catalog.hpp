#pragma once

#include <optional>
#include <string>
#include <vector>

#include "k3lat/overlattice.hpp"

namespace k3lat {

IntegralLattice lattice_U(const Int& n = 1);
IntegralLattice lattice_A(std::size_t m);  // A_m(-1)
IntegralLattice lattice_D4();              // D_4(-1)
IntegralLattice lattice_E8(const Int& scale = 1);  // E8(-scale), basis e1..e8
IntegralLattice lattice_N();               // basis (ΣN_i)/2, N_1..N_7

// Dual vectors (e1+e3)/2 and (e1+e8)/2 of E8(-2): a u(2) block of its
// discriminant form.
std::pair<RatVector, RatVector> e8m2_u2_block();

// U, U(n), A(m), D4, E8(-1), E8(-2), N, <k>.
IntegralLattice named(const std::string& name);

struct MnSeed {
  std::vector<std::size_t> a_types;  // A_m summands
  std::size_t rank;
  std::size_t length;
};

const MnSeed& mn_seed(int n);

struct MnBuild {
  int n = 0;
  IntegralLattice lattice;
  bool cyclic = true;        // glue found among cyclic subgroups
  std::size_t tried = 0;     // isotropic subgroups examined
  std::size_t accepted = 0;  // candidates passing all four tests
  std::size_t certified = 0; // accepted candidates shown isometric to the first
  std::size_t roots = 0;
};

// Cached; throws if the seed yields no candidate.
const MnBuild& build_Mn_report(int n);
inline const IntegralLattice& build_Mn(int n) { return build_Mn_report(n).lattice; }

GenusDescriptor omega_genus(int n);

enum class FamilyKind { L, Lp, M, Mp, UN, UE8 };

struct FamilyDescriptor {
  FamilyKind kind = FamilyKind::M;
  Int d = 1;
  int n = 2;
  friend bool operator==(const FamilyDescriptor& a, const FamilyDescriptor& b) {
    return a.kind == b.kind && a.d == b.d && a.n == b.n;
  }
};

std::string kind_name(FamilyKind k);
std::string to_string(const FamilyDescriptor& f);
void validate(const FamilyDescriptor& f);

struct FamilyLattice {
  std::optional<IntegralLattice> lattice;  // absent for L/Lp with n >= 3
  GenusDescriptor genus;
};

// Cached per descriptor.
FamilyLattice family_lattice(const FamilyDescriptor& f);

// For Lp/Mp at n = 2: number of glue candidates found and whether all of them
// are genus-equal to the returned lattice.
struct GlueCertificate {
  std::size_t candidates = 0;
  bool all_genus_equal = false;
};
GlueCertificate glue_certificate(const FamilyDescriptor& f);

// The genus alone. For Lp/Mp at n = 2 this is the quotient form of a single
// admissible glue, without building or certifying the lattice.
GenusDescriptor family_genus(const FamilyDescriptor& f);

struct Membership {
  bool covers_k3 = false;      // admits a symplectic involution
  bool covered_by_k3 = false;  // Nikulin-type quotient
  std::vector<FamilyDescriptor> matches;
};

Membership membership_classification(const IntegralLattice& ns);

// Names accepted by the CLI: the named() set, M(n), L(d,n), Lp(d,n), M(e,n),
// Mp(e,2), UN, UE8, and "+"-separated direct sums of these.
IntegralLattice catalog_lattice(const std::string& name);
GenusDescriptor catalog_genus(const std::string& name);

}  // namespace k3lat
