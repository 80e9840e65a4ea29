#include <gtest/gtest.h>

#include <random>

#include "k3lat/catalog.hpp"
#include "k3lat/form_iso.hpp"
#include "k3lat/short_vectors.hpp"
#include "lattice_helpers.hpp"

using namespace k3lat;

TEST(Catalog, NamedLattices) {
  auto n = named("N");
  EXPECT_EQ(n.rank(), 8u);
  EXPECT_EQ(n.determinant(), 64);
  EXPECT_EQ(short_vectors(n, -2).count(), 16u);
  EXPECT_EQ(discriminant_group(named("E8(-2)")).factors, std::vector<Int>(8, Int(2)));
  EXPECT_EQ(named("U(3)").gram(), (IntMatrix{{0, 3}, {3, 0}}));
  EXPECT_EQ(named("E8(-1)").determinant(), 1);
  EXPECT_EQ(named("D4").determinant(), 4);
  EXPECT_THROW(named("E7"), Error);
  EXPECT_THROW(named("<3>"), Error);
}

TEST(Catalog, NikulinBasisRelations) {
  // N_8 = 2ê - ΣN_{1..7} has square -2 and is orthogonal to N_1..N_7.
  IntegralLattice n = lattice_N();
  IntVector n8 = to_int_vector({2, -1, -1, -1, -1, -1, -1, -1});
  EXPECT_EQ(n.norm(n8), -2);
  for (std::size_t j = 1; j < 8; ++j) {
    IntVector e(8, Int(0));
    e[j] = 1;
    EXPECT_EQ(n.product(n8, e), 0);
  }
}

TEST(Catalog, MnTable) {
  const std::vector<std::pair<std::size_t, std::size_t>> table = {
      {8, 6}, {12, 4}, {14, 4}, {16, 2}, {16, 2}, {18, 1}, {18, 2}};
  for (int n = 2; n <= 8; ++n) {
    const MnBuild& b = build_Mn_report(n);
    EXPECT_EQ(b.lattice.rank(), table[n - 2].first) << n;
    EXPECT_EQ(discriminant_group(b.lattice).length(), table[n - 2].second) << n;
    EXPECT_TRUE(is_negative_definite(b.lattice));
    EXPECT_EQ(short_vectors(b.lattice, -2).count(), b.roots) << n;
    EXPECT_EQ(b.accepted, b.certified);
    EXPECT_TRUE(b.cyclic);
  }
  const std::vector<long> dets = {64, 81, 64, 25, 36, 7, 8};
  for (int n = 2; n <= 8; ++n) EXPECT_EQ(build_Mn(n).determinant(), dets[n - 2]);
  EXPECT_THROW(build_Mn(9), Error);
}

TEST(Catalog, M2IsNikulinLattice) {
  auto iso = is_isometric_definite(build_Mn(2), lattice_N());
  ASSERT_TRUE(iso.has_value());
  EXPECT_EQ(iso->transpose() * lattice_N().gram() * *iso, build_Mn(2).gram());
}

TEST(Catalog, OmegaGenus) {
  EXPECT_TRUE(genus_equal(omega_genus(2), genus_of(lattice_E8(2))));
  for (int n = 2; n <= 8; ++n) {
    GenusDescriptor g = omega_genus(n);
    EXPECT_EQ(g.disc.length(), 2 + discriminant_group(build_Mn(n)).length()) << n;
    EXPECT_EQ(g.rank(), build_Mn(n).rank());
  }
  EXPECT_EQ(omega_genus(3).disc.size(), 9 * 81);
  EXPECT_EQ(omega_genus(7).disc.invariant_factors(), (std::vector<std::int64_t>{7, 7, 7}));
}

TEST(Catalog, FamilyLattices) {
  auto lp = family_lattice({FamilyKind::Lp, 2, 2});
  ASSERT_TRUE(lp.lattice.has_value());
  EXPECT_EQ(lp.lattice->rank(), 9u);
  EXPECT_EQ(lp.genus.disc.length(), 7u);
  EXPECT_TRUE(genus_equal(family_lattice({FamilyKind::M, 2, 2}).genus, lp.genus));
  EXPECT_THROW(family_lattice({FamilyKind::Mp, 3, 2}), Error);
  EXPECT_THROW(family_lattice({FamilyKind::Lp, 3, 2}), Error);
  EXPECT_THROW(family_lattice({FamilyKind::Lp, 8, 3}), Error);
  EXPECT_EQ(family_lattice({FamilyKind::L, 3, 2}).genus.disc.length(), 9u);
  EXPECT_EQ(family_lattice({FamilyKind::Mp, 4, 2}).genus.disc.length(), 5u);
  EXPECT_EQ(abs(family_lattice({FamilyKind::Mp, 4, 2}).lattice->determinant()), 128);
  EXPECT_FALSE(family_lattice({FamilyKind::L, 6, 3}).lattice.has_value());
  EXPECT_EQ(family_lattice({FamilyKind::L, 6, 3}).genus.rank(), 13u);
}

TEST(Catalog, LpGlueCandidatesCounted) {
  // d ≡ 0 mod 4 uses an isotropic E8(-2) glue vector, d ≡ 2 mod 4 a q=1 vector.
  auto c4 = glue_certificate({FamilyKind::Lp, 4, 2});
  auto c2 = glue_certificate({FamilyKind::Lp, 2, 2});
  EXPECT_EQ(c4.candidates, 135u);
  EXPECT_EQ(c2.candidates, 120u);
  EXPECT_TRUE(c4.all_genus_equal);
  EXPECT_TRUE(c2.all_genus_equal);
}

TEST(Catalog, LpEqualsMForEvenParameters) {
  for (int d = 1; d <= 12; ++d) {
    auto lp = family_lattice({FamilyKind::Lp, 2 * d, 2}).genus;
    auto m = family_lattice({FamilyKind::M, 2 * d, 2}).genus;
    EXPECT_TRUE(genus_equal(lp, m)) << d;
    EXPECT_TRUE(unique_in_genus_by_length(m)) << d;
  }
}

TEST(Catalog, MembershipClassification) {
  auto both = membership_classification(*family_lattice({FamilyKind::M, 4, 2}).lattice);
  EXPECT_TRUE(both.covers_k3);
  EXPECT_TRUE(both.covered_by_k3);
  auto cov = membership_classification(*family_lattice({FamilyKind::L, 1, 2}).lattice);
  EXPECT_TRUE(cov.covers_k3);
  EXPECT_FALSE(cov.covered_by_k3);
  auto nik = membership_classification(*family_lattice({FamilyKind::M, 1, 2}).lattice);
  EXPECT_FALSE(nik.covers_k3);
  EXPECT_TRUE(nik.covered_by_k3);
  EXPECT_THROW(membership_classification(catalog_lattice("<6>+E8(-1)")), Error);
}

TEST(Catalog, MembershipStableUnderBasisChange) {
  std::mt19937 rng(123);
  for (const auto& name : {"M(4,2)", "L(1,2)", "M(3,2)", "Mp(2,2)"}) {
    IntegralLattice l = catalog_lattice(name);
    IntegralLattice l2 = helpers::change_basis(l, helpers::random_unimodular(9, rng));
    auto a = membership_classification(l);
    auto b = membership_classification(l2);
    EXPECT_EQ(a.covers_k3, b.covers_k3) << name;
    EXPECT_EQ(a.covered_by_k3, b.covered_by_k3) << name;
    EXPECT_EQ(a.matches.size(), b.matches.size()) << name;
  }
}

TEST(Catalog, NameParsing) {
  EXPECT_EQ(catalog_lattice("U(2)").gram(), (IntMatrix{{0, 2}, {2, 0}}));
  EXPECT_EQ(catalog_lattice("U + N").rank(), 10u);
  EXPECT_EQ(catalog_lattice("M(3)").rank(), 12u);
  EXPECT_EQ(catalog_lattice("M(3,3)").rank(), 13u);
  EXPECT_EQ(catalog_lattice("UE8").rank(), 10u);
  EXPECT_THROW(catalog_lattice("Lp(12,3)"), Error);
  EXPECT_EQ(catalog_genus("Lp(12,3)").rank(), 13u);
  EXPECT_THROW(catalog_lattice("Q(1)"), Error);
}

TEST(Catalog, FormLevelGenusMatchesLattice) {
  for (long p : {2L, 4L, 6L, 8L})
    for (FamilyKind k : {FamilyKind::Lp, FamilyKind::Mp}) {
      FamilyDescriptor f{k, p, 2};
      GenusDescriptor a = family_genus(f);
      GenusDescriptor b = family_lattice(f).genus;
      EXPECT_EQ(a.sig_plus, b.sig_plus);
      EXPECT_EQ(a.sig_minus, b.sig_minus);
      EXPECT_TRUE(genus_equal(a, b)) << to_string(f);
    }
  EXPECT_THROW(family_genus({FamilyKind::Mp, 3, 2}), Error);
  EXPECT_TRUE(genus_equal(family_genus({FamilyKind::M, 5, 2}),
                          family_lattice({FamilyKind::M, 5, 2}).genus));
}
