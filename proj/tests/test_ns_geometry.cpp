#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "k3lat/form_iso.hpp"
#include "k3lat/linalg.hpp"
#include "k3lat/ns_geometry.hpp"
#include "k3lat/short_vectors.hpp"

using namespace k3lat;

namespace {

std::size_t failures(const ReportList& r) {
  return std::count_if(r.begin(), r.end(), [](const Report& x) { return x.status == Status::Fail; });
}

std::string failed_names(const ReportList& r) {
  std::string s;
  for (const auto& x : r)
    if (x.status == Status::Fail) s += x.check + "; ";
  return s;
}

// Small-integer view of a lattice for box searches.
struct SmallLattice {
  std::size_t n;
  std::vector<long> g;
  explicit SmallLattice(const IntegralLattice& l) : n(l.rank()), g(n * n) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g[i * n + j] = l.gram()(i, j).get_si();
  }
  std::vector<long> apply(const std::vector<long>& a) const {
    std::vector<long> out(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i] += g[i * n + j] * a[j];
    return out;
  }
  long product(const std::vector<long>& a, const std::vector<long>& b) const {
    long s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += a[i] * g[i * n + j] * b[j];
    return s;
  }
};

std::vector<long> small(const IntVector& v) {
  std::vector<long> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

IntVector big(const std::vector<long>& v) { return IntVector(v.begin(), v.end()); }

// Calls fn on every integer vector with entries in [-b, b].
void for_box(std::size_t n, long b, const std::function<void(const std::vector<long>&)>& fn) {
  std::vector<long> v(n, -b);
  for (;;) {
    fn(v);
    std::size_t i = 0;
    while (i < n && ++v[i] > b) v[i++] = -b;
    if (i == n) break;
  }
}

bool preserves_gram(const IsometryAction& g) {
  const IntMatrix& a = g.matrix();
  return a.transpose() * g.lattice().gram() * a == g.lattice().gram();
}

}  // namespace

TEST(NsGeometry, LabeledLatticeRelations) {
  IntegralLattice u = lattice_U();
  std::map<std::string, IntVector> labels = {{"f", IntVector{1, 0}}, {"g", IntVector{0, 1}}};
  EXPECT_NO_THROW(LabeledLattice(u, labels, {{"f", "g", 1}, {"f", "f", 0}}));
  try {
    LabeledLattice(u, labels, {{"f", "g", 2}});
    FAIL() << "relation f·g = 2 accepted";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("f"), std::string::npos);
  }
  LabeledLattice l(u, labels);
  EXPECT_EQ(l.product("f", "g"), 1);
  EXPECT_THROW(l.at("h"), Error);
}

TEST(NsGeometry, X2Lattice) {
  LabeledLattice x = build_X2();
  auto inv = gram_invariants(x.lattice());
  EXPECT_EQ(inv.rank, 9u);
  EXPECT_EQ(inv.sig_plus, 1u);
  // <4> ⊕ N
  EXPECT_EQ(inv.determinant, 4 * 64);
  EXPECT_EQ(x.product("H", "H"), 4);
  EXPECT_EQ(x.product("E1", "E1"), 0);
  EXPECT_EQ(x.product("E1", "E2"), 2);
  EXPECT_EQ(x.product("N8''", "E1"), 5);
}

TEST(NsGeometry, InvolutionsAreIsometries) {
  X2Involutions inv = involutions_X2();
  const IntMatrix id = IntMatrix::identity(9);
  for (const auto* g : {&inv.sigma, &inv.iota_q, &inv.iota_dp}) {
    EXPECT_TRUE(preserves_gram(*g));
    EXPECT_EQ(g->matrix() * g->matrix(), id);
    EXPECT_NE(g->matrix(), id);
  }
  EXPECT_EQ(inv.iota_q.matrix() * inv.iota_dp.matrix(), inv.sigma.matrix());
}

TEST(NsGeometry, SectionsOrbitsAndBaseChange) {
  ReportList s = verify_sections();
  EXPECT_EQ(failures(s), 0u) << failed_names(s);
  EXPECT_GE(s.size(), 80u);
  ReportList o = orbit_and_even_sets();
  EXPECT_EQ(failures(o), 0u) << failed_names(o);
  EXPECT_EQ(std::count_if(o.begin(), o.end(),
                          [](const Report& r) { return r.status == Status::Discrepancy; }),
            1);
  ReportList b = base_change_report();
  EXPECT_EQ(failures(b), 0u) << failed_names(b);
  Int det = determinant(base_change());
  EXPECT_TRUE(det == 1 || det == -1);
}

TEST(NsGeometry, ReducibleFibersAgainstBoxSearch) {
  // a (-2)-class orthogonal to the fibre is a fibre component
  auto components = [](const LabeledLattice& l, const std::string& e, long b) {
    SmallLattice sl(l.lattice());
    const std::vector<long> f = small(l.at(e));
    std::size_t found = 0;
    for_box(sl.n, b, [&](const std::vector<long>& v) {
      if (sl.product(v, v) == -2 && sl.product(v, f) == 0) ++found;
    });
    return found;
  };
  LabeledLattice x = build_X2();
  EXPECT_TRUE(no_reducible_fibers(x, "E1"));
  EXPECT_TRUE(no_reducible_fibers(x, "E2"));
  EXPECT_EQ(components(x, "E1", 2), 0u);
  EXPECT_EQ(components(x, "E2", 2), 0u);
  VgsModel m = build_UN_vgs();
  EXPECT_FALSE(no_reducible_fibers(m.ns, "F"));
  EXPECT_GT(components(m.ns, "F", 1), 0u);
}

TEST(NsGeometry, EvenSetsMatchBruteForceAtSmallBound) {
  LabeledLattice x = build_X2();
  const IntegralLattice& lat = x.lattice();
  for (const std::string fibre : {"E1", "E2"}) {
    const long bound = 3;
    SmallLattice sl(lat);
    const std::vector<long> gf = sl.apply(small(x.at(fibre)));
    std::vector<IntVector> vs;
    for_box(9, bound, [&](const std::vector<long>& v) {
      long vf = 0;
      for (std::size_t k = 0; k < 9; ++k) vf += v[k] * gf[k];
      if (vf == 1 && sl.product(v, v) == -2) vs.push_back(big(v));
    });
    std::sort(vs.begin(), vs.end());
    std::vector<std::vector<char>> orth(vs.size(), std::vector<char>(vs.size(), 0));
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = 0; j < vs.size(); ++j)
        orth[i][j] = sl.product(small(vs[i]), small(vs[j])) == 0;
    std::vector<std::vector<IntVector>> sets;
    std::size_t cliques = 0;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> grow = [&](std::size_t start) {
      if (cur.size() == 8) {
        ++cliques;
        IntVector sum(9, Int(0));
        std::vector<IntVector> set;
        for (auto i : cur) {
          set.push_back(vs[i]);
          for (std::size_t k = 0; k < 9; ++k) sum[k] += vs[i][k];
        }
        if (std::all_of(sum.begin(), sum.end(), [](const Int& c) { return c % 2 == 0; }))
          sets.push_back(set);
        return;
      }
      for (std::size_t j = start; j < vs.size(); ++j) {
        bool ok = std::all_of(cur.begin(), cur.end(),
                              [&](std::size_t i) { return orth[i][j] != 0; });
        if (!ok) continue;
        cur.push_back(j);
        grow(j + 1);
        cur.pop_back();
      }
    };
    grow(0);
    std::sort(sets.begin(), sets.end());
    EvenSetSearch r = find_even_sets(x, fibre, bound);
    EXPECT_EQ(r.vectors, vs.size()) << fibre;
    EXPECT_EQ(r.cliques, cliques) << fibre;
    EXPECT_EQ(r.sets, sets) << fibre;
    EXPECT_GT(cliques, 0u) << fibre;
  }
}

TEST(NsGeometry, EvenSetSearchIsDeterministic) {
  LabeledLattice x = build_X2();
  EvenSetSearch a = find_even_sets(x, "E1", 3);
  EvenSetSearch b = find_even_sets(x, "E1", 3);
  EXPECT_EQ(a.sets, b.sets);
  EXPECT_TRUE(std::is_sorted(a.sets.begin(), a.sets.end()));
  EXPECT_THROW(find_even_sets(x, "H", 2), Error);  // not isotropic
  EXPECT_THROW(find_even_sets(x, "E1", -1), Error);
}

TEST(NsGeometry, SurrogateHasNoSections) {
  LabeledLattice l = build_L12_surrogate();
  EXPECT_EQ(l.lattice().norm(l.at("E")), 0);
  EvenSetSearch r = find_even_sets(l, "E", 3);
  EXPECT_EQ(r.vectors, 0u);
  EXPECT_TRUE(r.sets.empty());
}

TEST(NsGeometry, VgsModel) {
  VgsModel m = build_UN_vgs();
  EXPECT_TRUE(preserves_gram(m.sigma_t));
  EXPECT_EQ(m.sigma_t.matrix() * m.sigma_t.matrix(), IntMatrix::identity(10));
  EXPECT_TRUE(genus_equal(genus_of(m.ns.lattice()), genus_of(direct_sum(lattice_U(), lattice_N()))));
  InvariantSplit s = invariant_split(m.sigma_t);
  EXPECT_EQ(s.fixed.sub().rank(), 2u);
  EXPECT_EQ(s.anti.sub().rank(), 8u);
  auto iso = is_isometric_definite(s.anti.sub(), lattice_E8(2));
  ASSERT_TRUE(iso.has_value());
  EXPECT_EQ(iso->transpose() * lattice_E8(2).gram() * *iso, s.anti.sub().gram());
  ReportList r = vgs_report();
  EXPECT_EQ(failures(r), 0u) << failed_names(r);
}

TEST(NsGeometry, PolarizedComplements) {
  for (long e = 1; e <= 4; ++e) {
    GenusDescriptor g = vgs_polarized_complement(e);
    EXPECT_EQ(g.rank(), 9u);
    EXPECT_TRUE(genus_equal(g, family_lattice({FamilyKind::Lp, 2 * e, 2}).genus)) << e;
    ReportList r = vgs_polarized_report(e);
    EXPECT_EQ(failures(r), 0u) << failed_names(r);
  }
  // the literal reading: v = F - e(O+t) has v² = -4e - 4e²
  for (long e = 1; e <= 3; ++e) {
    Report lit = vgs_literal_record(e);
    EXPECT_EQ(lit.status, Status::Discrepancy);
    EXPECT_NE(lit.detail.find(std::to_string(-4 * e - 4 * e * e)), std::string::npos) << lit.detail;
  }
}

TEST(NsGeometry, GlueConstructions) {
  ReportList n = glue_constructions(GlueHost::N, {1, 3});
  ReportList e = glue_constructions(GlueHost::E8, {1, 3});
  EXPECT_EQ(failures(n), 0u) << failed_names(n);
  EXPECT_EQ(failures(e), 0u) << failed_names(e);
  EXPECT_GT(n.size(), 0u);
  EXPECT_GT(e.size(), n.size());  // the rank-10 comparisons
  EXPECT_THROW(glue_constructions(GlueHost::N, {2}), Error);
}
