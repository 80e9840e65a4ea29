#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "k3lat/form_iso.hpp"
#include "k3lat/towers.hpp"
#include "k3lat/verify.hpp"

using namespace k3lat;

namespace {

// m > 0 with a = 2^m b, or -1.
int power_of_two_ratio(long a, long b) {
  if (a <= b || a % b != 0) return -1;
  long q = a / b;
  int m = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++m;
  }
  return q == 1 ? m : -1;
}

}  // namespace

TEST(Towers, Steps) {
  EXPECT_EQ(quotient_step({FamilyKind::Lp, 4, 2}), (FamilyDescriptor{FamilyKind::M, 2, 2}));
  EXPECT_EQ(quotient_step({FamilyKind::L, 3, 2}), (FamilyDescriptor{FamilyKind::Mp, 6, 2}));
  EXPECT_EQ(cover_step({FamilyKind::M, 2, 2}), (FamilyDescriptor{FamilyKind::Lp, 4, 2}));
  EXPECT_EQ(identify_even(cover_step({FamilyKind::M, 2, 2})),
            (FamilyDescriptor{FamilyKind::M, 4, 2}));
  EXPECT_THROW(quotient_step({FamilyKind::M, 1, 2}), Error);
  EXPECT_THROW(cover_step({FamilyKind::L, 1, 2}), Error);
  EXPECT_THROW(identify_even({FamilyKind::M, 3, 2}), Error);
  for (long e = 1; e <= 20; ++e) {
    for (FamilyDescriptor f : {FamilyDescriptor{FamilyKind::L, e, 2},
                               FamilyDescriptor{FamilyKind::Lp, 2 * e, 2}})
      EXPECT_EQ(cover_step(quotient_step(f)), f);
    for (FamilyDescriptor f : {FamilyDescriptor{FamilyKind::M, e, 2},
                               FamilyDescriptor{FamilyKind::Mp, 2 * e, 2}}) {
      FamilyDescriptor c = cover_step(f);
      EXPECT_EQ(quotient_step(c), f);
      // the parameter doubles going up when the source is M
      if (f.kind == FamilyKind::M) EXPECT_EQ(c.d, 2 * f.d);
    }
  }
}

TEST(Towers, QuotientMatchesLatticeIdentification) {
  // cover of M(2,2) is Lp(4,2), which is isometric to M(4,2)
  auto lp = family_lattice({FamilyKind::Lp, 4, 2});
  auto m = family_lattice({FamilyKind::M, 4, 2});
  EXPECT_TRUE(genus_equal(lp.genus, m.genus));
  EXPECT_TRUE(unique_in_genus_by_length(m.genus));
}

TEST(Towers, NodesAndTranscendentalLattices) {
  auto nodes = tower(1, 3);
  ASSERT_EQ(nodes.size(), 4u);
  const long want[] = {1, 2, 4, 8};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& n = nodes[i];
    EXPECT_EQ(n.depth, static_cast<int>(i));
    EXPECT_EQ(n.ns, (FamilyDescriptor{FamilyKind::M, want[i], 2}));
    auto inv = gram_invariants(n.transcendental);
    EXPECT_EQ(inv.rank, 13u);
    EXPECT_EQ(inv.sig_plus, 2u);
    EXPECT_EQ(inv.sig_minus, 11u);
    // |det T| = |det NS| = 2·2d·64
    EXPECT_EQ(abs(inv.determinant), 2 * want[i] * 64);
    auto ns = family_lattice(n.ns);
    EXPECT_TRUE(forms_isomorphic(discriminant_form(n.transcendental), negate(ns.genus.disc))
                    .has_value());
  }
  auto single = tower(1, 0);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].transcendental.gram(), transcendental_lattice(1).gram());
  EXPECT_EQ(tower(5, 2).back().ns.d, 20);
}

TEST(Towers, TowerReportsPass) {
  for (long d = 1; d <= 8; ++d) {
    ReportList r = tower_report(d, 5);
    EXPECT_FALSE(any_fail(r)) << d;
  }
}

TEST(Towers, RelatedAgreesWithDivisibilityOracle) {
  for (long d = 1; d <= 64; ++d)
    for (long e = 1; e <= 64; ++e) {
      TowerRelation r = tower_related(d, e);
      int m = std::max(power_of_two_ratio(d, e), power_of_two_ratio(e, d));
      EXPECT_EQ(r.identical, d == e);
      EXPECT_EQ(r.related, m > 0) << d << "," << e;
      if (m > 0) {
        EXPECT_EQ(r.m, m);
        EXPECT_EQ(r.degree, Int(1) << m);
      }
      TowerRelation s = tower_related(e, d);
      EXPECT_EQ(s.related, r.related);
      EXPECT_EQ(s.m, r.m);
    }
  TowerRelation r = tower_related(3, 24);
  EXPECT_TRUE(r.related);
  EXPECT_EQ(r.m, 3);
  EXPECT_EQ(r.degree, 8);
  EXPECT_FALSE(tower_related(5, 7).related);
  EXPECT_TRUE(tower_related(4, 4).identical);
  EXPECT_FALSE(tower_related(4, 4).related);
}

TEST(Towers, StepChainMatchesOracle) {
  for (long d = 1; d <= 64; ++d) {
    std::set<long> reach;
    for (const auto& [x, steps] : tower_chain(d, 64)) {
      reach.insert(x.get_si());
      if (x != d) EXPECT_EQ(power_of_two_ratio(std::max<long>(x.get_si(), d),
                                               std::min<long>(x.get_si(), d)),
                            steps);
    }
    for (long e = 1; e <= 64; ++e) {
      bool want = e == d || power_of_two_ratio(d, e) > 0 || power_of_two_ratio(e, d) > 0;
      EXPECT_EQ(reach.count(e) == 1, want) << d << "," << e;
    }
  }
}

TEST(Towers, MukaiTwistedCheck) {
  for (int m : {0, 1})
    for (long d : {1L, 2L}) {
      MukaiCheck c = mukai_twisted_check(m, d);
      EXPECT_EQ(c.pic.rank(), 11u);
      EXPECT_EQ(c.pic.norm(c.v), 0);
      EXPECT_EQ(c.quotient.rank(), 9u);
      EXPECT_TRUE(c.genus_matches);
      // the partner of node m is node m+2
      auto nodes = tower(d, m + 2);
      EXPECT_TRUE(genus_equal(genus_of(c.quotient), family_lattice(nodes.back().ns).genus));
      EXPECT_FALSE(any_fail(mukai_report(m, d)));
    }
  for (int m = 0; m <= 3; ++m)
    for (long d = 1; d <= 5; ++d) {
      MukaiCheck c = mukai_twisted_check(m, d);
      EXPECT_EQ(c.pic.norm(c.v), 0) << m << "," << d;
    }
}

TEST(Towers, GaloisCoverInvariants) {
  std::vector<Int> ones(8, Int(1));
  auto g1 = galois_cover_invariants(1, ones);
  EXPECT_EQ(g1.h20_v, 35);
  EXPECT_EQ(g1.chi_w, 36);
  EXPECT_EQ(g1.h10, 0);
  EXPECT_TRUE(g1.bound_holds);
  // direct substitution: 4 + (2/2)·8²
  EXPECT_EQ(galois_cover_invariants(2, ones).chi_w, 68);
  std::vector<Int> k = {1, 2, 3, 1, 1, 1, 1, 3};  // sum 13
  auto g = galois_cover_invariants(3, k);
  EXPECT_EQ(g.chi_w, Rat(8 + 3 * 169, 2));
  EXPECT_EQ(g.h20_w, Rat(6 + 3 * 169, 2));
  EXPECT_EQ(g.h20_v, g.h20_w);
  EXPECT_EQ(g.chi_w.get_den(), 2);
  k[5] = 0;
  EXPECT_THROW(galois_cover_invariants(1, k), Error);
  EXPECT_THROW(galois_cover_invariants(1, std::vector<Int>(7, Int(1))), Error);
}

TEST(Verify, SuitesAndErrors) {
  EXPECT_THROW(run_suite("nope"), Error);
  ReportList t = run_suite("towers");
  EXPECT_FALSE(any_fail(t));
  ReportList m = run_suite("mukai");
  EXPECT_EQ(m.size(), 12u);
  EXPECT_FALSE(any_fail(m));
  // an exhausted budget is inconclusive, not a failure
  SuiteParams p;
  p.n = 2;
  p.d = 4;
  p.budget = 1;
  ReportList r = run_suite("theorem", p);
  EXPECT_FALSE(any_fail(r));
  EXPECT_TRUE(std::any_of(r.begin(), r.end(),
                          [](const Report& x) { return x.status == Status::Inconclusive; }));
  SuiteParams bad;
  bad.n = 9;
  EXPECT_THROW(run_suite("table", bad), Error);
}
