#include <gtest/gtest.h>

#include <random>

#include "k3lat/catalog.hpp"
#include "k3lat/form_iso.hpp"
#include "lattice_helpers.hpp"

using namespace k3lat;

namespace {

// Small-coefficient search for T with Tᵀ A T = B (oracle for rank 2).
bool brute_equivalent_rank2(const IntMatrix& a, const IntMatrix& b, int box) {
  for (int p = -box; p <= box; ++p)
    for (int q = -box; q <= box; ++q)
      for (int r = -box; r <= box; ++r)
        for (int s = -box; s <= box; ++s) {
          if (p * s - q * r != 1 && p * s - q * r != -1) continue;
          IntMatrix t{{p, q}, {r, s}};
          if (t.transpose() * a * t == b) return true;
        }
  return false;
}

}  // namespace

TEST(Overlattice, SmallGlueByBruteForce) {
  IntegralLattice v = direct_sum(rank_one(4), rank_one(-4));
  auto zs = overlattices(v, 2);
  ASSERT_EQ(zs.size(), 1u);
  EXPECT_EQ(zs[0].lattice.determinant() * 4, v.determinant());
  EXPECT_TRUE(brute_equivalent_rank2(zs[0].lattice.gram(), IntMatrix{{4, 2}, {2, 0}}, 3));
  EXPECT_TRUE(overlattices(lattice_U(), 2).empty());
  EXPECT_TRUE(overlattices(lattice_E8(1), 2).empty());
}

TEST(Overlattice, IndexAndQuotientProperty) {
  for (const auto& name : {"U(2)+N", "E8(-2)", "<4>+<-4>", "A(1)+A(1)+A(1)+A(1)", "U(4)"}) {
    IntegralLattice l = catalog_lattice(name);
    DiscriminantGroup g = discriminant_group(l);
    FiniteQuadraticForm q = discriminant_form(l, g);
    for (std::int64_t m : {2, 4}) {
      if (q.size() % (m * m)) continue;
      auto subs = isotropic_subgroups(q, m);
      for (std::size_t i = 0; i < subs.size() && i < 8; ++i) {
        Overlattice z = overlattice_from_glue(l, g, subs[i].generators);
        EXPECT_EQ(z.index, m);
        EXPECT_EQ(z.lattice.determinant() * m * m, l.determinant()) << name;
        auto quo = quotient_form(q, subs[i].generators);
        EXPECT_TRUE(forms_isomorphic(discriminant_form(z.lattice), quo.form).has_value()) << name;
      }
    }
  }
}

TEST(Overlattice, HnfBasisIsCanonical) {
  IntegralLattice l = catalog_lattice("U(2)+N");
  DiscriminantGroup g = discriminant_group(l);
  FiniteQuadraticForm q = discriminant_form(l, g);
  auto subs = isotropic_subgroups(q, 2);
  ASSERT_FALSE(subs.empty());
  const auto& h = subs.back();
  Overlattice a = overlattice_from_glue(l, g, h.generators);
  // same subgroup, different generator representative
  Element other = q.zero();
  for (auto idx : h.elements)
    if (idx != 0) other = q.element_at(idx);
  Overlattice b = overlattice_from_glue(l, g, {other});
  EXPECT_EQ(a.basis, b.basis);
  EXPECT_EQ(a.lattice.gram(), b.lattice.gram());
}

TEST(Overlattice, LemmaAtDegreeEight) {
  auto [e1, e2] = e8m2_u2_block();
  LemmaResult r = lemma_overlattice(4, 2, lattice_E8(2), e1, e2);
  EXPECT_EQ(r.z.index, 2);
  EXPECT_TRUE(is_primitive(r.w));
  EXPECT_EQ(r.z.lattice.rank(), 9u);
  auto u2 = u_block(2);
  auto target = sum_forms({cyclic_block(8, Rat(1, 8)), u2, u2, u2});
  EXPECT_TRUE(forms_isomorphic(discriminant_form(r.z.lattice), target).has_value());
  // the whole of <2d> ⊕ W is an index-2 sublattice
  IntMatrix all = r.z.embedding;
  EXPECT_EQ(saturation_index(Embedding(r.z.lattice, all)), 2);
  EXPECT_THROW(lemma_overlattice(2, 2, lattice_E8(2), e1, e2), Error);
  RatVector bad(8, Rat(0));
  bad[0] = Rat(1, 2);
  EXPECT_THROW(lemma_overlattice(4, 2, lattice_E8(2), bad, e2), Error);
}

TEST(Overlattice, GenusExamples) {
  EXPECT_TRUE(genus_equal(catalog_genus("U+E8(-2)"), catalog_genus("U(2)+N")));
  EXPECT_FALSE(genus_equal(catalog_genus("U+D4+D4"), catalog_genus("U+E8(-2)")));
  EXPECT_TRUE(genus_equal(catalog_genus("U+N"), catalog_genus("U+N")));
}

TEST(Overlattice, GenusInvariantUnderBasisChange) {
  std::mt19937 rng(77);
  for (const auto& name : {"U(2)+N", "<8>+E8(-2)", "U+D4+D4", "M(3,3)"}) {
    IntegralLattice l = catalog_lattice(name);
    IntegralLattice l2 = helpers::change_basis(l, helpers::random_unimodular(l.rank(), rng));
    EXPECT_TRUE(genus_equal(genus_of(l), genus_of(l2))) << name;
  }
}

TEST(Overlattice, LengthCriterion) {
  EXPECT_TRUE(unique_in_genus_by_length(genus_of(catalog_lattice("M(4,2)"))));
  EXPECT_FALSE(unique_in_genus_by_length(genus_of(rank_one(2))));
  EXPECT_FALSE(unique_in_genus_by_length(genus_of(lattice_N())));
  EXPECT_TRUE(unique_in_genus_by_length(genus_of(catalog_lattice("M(3,7)"))));
}

TEST(Overlattice, GenusLemmaQuotient) {
  // n=5, d=10
  GenusDescriptor lg = family_lattice({FamilyKind::L, 10, 5}).genus;
  LemmaBlock block{lg.disc.generator(0), lg.disc.generator(1), lg.disc.generator(2)};
  GenusDescriptor q = genus_lemma_quotient(lg, block, 10, 5);
  auto target = sum_forms({cyclic_block(20, Rat(1, 20)), discriminant_form(build_Mn(5))});
  EXPECT_TRUE(forms_isomorphic(q.disc, target).has_value());
  EXPECT_EQ(q.sig_plus, 1u);
  EXPECT_EQ(q.sig_minus, 16u);
  // the lattice-level and form-level constructions agree at n=2, d=4
  auto [e1, e2] = e8m2_u2_block();
  LemmaResult r = lemma_overlattice(4, 2, lattice_E8(2), e1, e2);
  // locate the u(2) block inside the disc of L(4,2) through the lattice lifts
  IntegralLattice v = direct_sum(rank_one(8), lattice_E8(2));
  DiscriminantGroup gv = discriminant_group(v);
  FiniteQuadraticForm qv = discriminant_form(v, gv);
  RatVector h(9, Rat(0)), a(9, Rat(0)), b(9, Rat(0));
  h[0] = Rat(1, 8);
  for (int i = 0; i < 8; ++i) {
    a[i + 1] = e1[i];
    b[i + 1] = e2[i];
  }
  LemmaBlock lb{gv.coordinates(v.gram(), h), gv.coordinates(v.gram(), a),
                gv.coordinates(v.gram(), b)};
  GenusDescriptor gq = genus_lemma_quotient(make_genus(1, 8, qv), lb, 4, 2);
  EXPECT_TRUE(genus_equal(gq, genus_of(r.z.lattice)));
  EXPECT_TRUE(genus_equal(gq, family_lattice({FamilyKind::Lp, 4, 2}).genus));
  // m = 1 is the identity
  GenusDescriptor same = genus_lemma_quotient(lg, block, 10, 1);
  EXPECT_TRUE(genus_equal(same, lg));
  EXPECT_THROW(genus_lemma_quotient(lg, block, 6, 5), Error);
}
