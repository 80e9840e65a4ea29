// Acceptance criteria, one line each. Exact arithmetic throughout; a criterion
// passes when every check holds and it finishes inside its time limit.
//
// usage: acceptance PATH_TO_K3LAT_CLI

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "form_fixtures.hpp"
#include "form_oracles.hpp"
#include "k3lat/catalog.hpp"
#include "k3lat/form_iso.hpp"
#include "k3lat/ns_geometry.hpp"
#include "k3lat/short_vectors.hpp"
#include "k3lat/towers.hpp"
#include "k3lat/verify.hpp"

using namespace k3lat;

namespace {

// Collects failed checks with a short reason.
struct Ledger {
  std::vector<std::string> failed;
  void expect(bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  }
  void expect_reports(const ReportList& r) {
    for (const auto& x : r)
      if (x.status == Status::Fail || x.status == Status::Inconclusive)
        failed.push_back(x.check + " (" + status_name(x.status) + ")");
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit;  // seconds
  std::function<void(Ledger&)> run;
};

bool run_criterion(const Criterion& c) {
  Ledger l;
  auto t0 = std::chrono::steady_clock::now();
  try {
    c.run(l);
  } catch (const std::exception& e) {
    l.failed.push_back(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > c.limit) l.failed.push_back("over time limit");
  bool ok = l.failed.empty();
  std::ostringstream line;
  line << "criterion " << std::setw(2) << c.id << "  " << (ok ? "PASS" : "FAIL") << "  "
       << c.title << "  (" << std::fixed << std::setprecision(2) << secs << " s, limit "
       << std::setprecision(0) << c.limit << " s)";
  std::cout << line.str() << '\n';
  for (std::size_t i = 0; i < l.failed.size() && i < 10; ++i)
    std::cout << "    - " << l.failed[i] << '\n';
  std::cout.flush();
  return ok;
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw Error("cannot run " + cmd);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  status = pclose(p);
  return out;
}

std::vector<IntVector> sorted_set(const LabeledLattice& x, const std::vector<std::string>& names) {
  std::vector<IntVector> s;
  for (const auto& n : names) s.push_back(x.at(n));
  std::sort(s.begin(), s.end());
  return s;
}

// m > 0 with a = 2^m b, or -1.
int power_of_two_ratio(long a, long b) {
  if (a <= b || a % b != 0) return -1;
  long q = a / b;
  int m = 0;
  for (; q % 2 == 0; q /= 2) ++m;
  return q == 1 ? m : -1;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  std::vector<Criterion> criteria = {
      {1, "discriminant forms of N and E8(-2)", 1,
       [](Ledger& l) {
         auto u2 = u_block(2);
         l.expect(forms_isomorphic(discriminant_form(lattice_N()), sum_forms({u2, u2, u2}))
                      .has_value(),
                  "q_N = u(2)^3");
         l.expect(forms_isomorphic(discriminant_form(lattice_E8(2)), sum_forms({u2, u2, u2, u2}))
                      .has_value(),
                  "q_E8(-2) = u(2)^4");
       }},
      {2, "M_n rank/length table for n = 2..8", 60,
       [](Ledger& l) {
         const std::vector<std::pair<std::size_t, std::size_t>> table = {
             {8, 6}, {12, 4}, {14, 4}, {16, 2}, {16, 2}, {18, 1}, {18, 2}};
         for (int n = 2; n <= 8; ++n) {
           const IntegralLattice& m = build_Mn(n);
           std::size_t len = discriminant_group(m).length();
           l.expect(m.rank() == table[n - 2].first && len == table[n - 2].second,
                    "M" + std::to_string(n) + ": rank " + std::to_string(m.rank()) +
                        ", length " + std::to_string(len));
         }
       }},
      {3, "Lemma construction genus = M(d,n) genus, unique by length", 120,
       [](Ledger& l) {
         for (int n = 2; n <= 8; ++n)
           for (long d : {2L * n, 4L * n}) {
             const std::string tag = "n=" + std::to_string(n) + " d=" + std::to_string(d);
             GenusDescriptor built;
             if (n == 2) {
               auto [e1, e2] = e8m2_u2_block();
               built = genus_of(lemma_overlattice(d, 2, lattice_E8(2), e1, e2).z.lattice);
             } else {
               built = family_lattice({FamilyKind::Lp, d, n}).genus;
             }
             GenusDescriptor target = family_lattice({FamilyKind::M, d, n}).genus;
             l.expect(genus_equal(built, target), tag + ": genus differs");
             l.expect(unique_in_genus_by_length(target), tag + ": length criterion fails");
           }
       }},
      {4, "L(d,2) and M(e,2) do not meet; membership flags", 1,
       [](Ledger& l) {
         for (long d = 1; d <= 8; ++d) {
           auto gl = family_lattice({FamilyKind::L, d, 2});
           auto gm = family_lattice({FamilyKind::M, d, 2});
           l.expect(gl.genus.disc.length() == 9, "length L(" + std::to_string(d) + ",2)");
           l.expect(gm.genus.disc.length() == 7, "length M(" + std::to_string(d) + ",2)");
           Membership ml = membership_classification(*gl.lattice);
           Membership mm = membership_classification(*gm.lattice);
           l.expect(ml.covers_k3 && !ml.covered_by_k3, "flags L(" + std::to_string(d) + ",2)");
           l.expect(mm.covered_by_k3 && mm.covers_k3 == (d % 2 == 0),
                    "flags M(" + std::to_string(d) + ",2)");
         }
       }},
      {5, "double plane model: sections, fibres, orbits, base change, even sets", 60,
       [](Ledger& l) {
         l.expect_reports(verify_sections());
         LabeledLattice x = build_X2();
         l.expect(no_reducible_fibers(x, "E1"), "E1 fibres");
         l.expect(no_reducible_fibers(x, "E2"), "E2 fibres");
         l.expect_reports(orbit_and_even_sets());
         l.expect_reports(base_change_report());
         auto first = sorted_set(x, {"N1", "N2", "N3", "N4", "N5", "N6", "N7", "N8"});
         auto second = sorted_set(x, {"N1", "N2", "N3", "N4", "N5", "N6", "N7", "N8''"});
         EvenSetSearch r1 = find_even_sets(x, "E1", 5);
         EvenSetSearch r2 = find_even_sets(x, "E2", 5);
         l.expect(std::binary_search(r1.sets.begin(), r1.sets.end(), first),
                  "{N1..N8} not found for E1");
         l.expect(std::binary_search(r2.sets.begin(), r2.sets.end(), second),
                  "{N1..N7,N8''} not found for E2");
       }},
      {6, "U+N model and the rank-10 glue constructions", 120,
       [](Ledger& l) {
         VgsModel m = build_UN_vgs();
         InvariantSplit s = invariant_split(m.sigma_t);
         auto iso = is_isometric_definite(s.anti.sub(), lattice_E8(2));
         l.expect(iso && iso->transpose() * lattice_E8(2).gram() * *iso == s.anti.sub().gram(),
                  "anti-invariant lattice is not E8(-2)");
         l.expect_reports(vgs_report());
         ReportList glue = glue_constructions();
         l.expect_reports(glue);
         for (const std::string want :
              {"(U(2)+N)' genus = U+N", "(U(2)+E8(-2))' genus = U+E8(-2)",
               "U+E8(-2) genus = U(2)+N", "U+D4+D4 genus != U+E8(-2)"}) {
           bool seen = std::any_of(glue.begin(), glue.end(), [&](const Report& r) {
             return r.check.find(want) != std::string::npos && r.status == Status::Pass;
           });
           l.expect(seen, "missing passing check: " + want);
         }
         for (long e = 1; e <= 4; ++e)
           l.expect(genus_equal(vgs_polarized_complement(e),
                                family_lattice({FamilyKind::Lp, 2 * e, 2}).genus),
                    "polarized complement e=" + std::to_string(e));
         l.expect(vgs_literal_record(1).status == Status::Discrepancy,
                  "literal v² reading not flagged");
       }},
      {7, "towers, relatedness against the chain oracle, twisted Mukai check", 60,
       [](Ledger& l) {
         for (long d = 1; d <= 8; ++d) l.expect_reports(tower_report(d, 5));
         for (long d = 1; d <= 64; ++d) {
           std::set<Int> reach;
           for (const auto& [x, steps] : tower_chain(d, 64)) reach.insert(x);
           for (long e = 1; e <= 64; ++e) {
             TowerRelation r = tower_related(d, e);
             int m = std::max(power_of_two_ratio(d, e), power_of_two_ratio(e, d));
             bool chain = reach.count(Int(e)) && d != e;
             bool ok = r.related == chain && r.related == (m > 0) && r.identical == (d == e) &&
                       (!r.related || r.m == m);
             l.expect(ok, "related(" + std::to_string(d) + "," + std::to_string(e) + ")");
           }
         }
         for (int m : {0, 1})
           for (long d : {1L, 2L}) l.expect_reports(mukai_report(m, d));
       }},
      {8, "Milgram signature matches sig+ - sig- on the catalog", 10,
       [](Ledger& l) {
         std::vector<std::string> names = {"U", "U(2)", "U(3)", "A(1)", "A(2)", "A(5)", "D4",
                                           "E8(-1)", "E8(-2)", "N", "<4>", "<-6>", "U+N",
                                           "U(2)+N", "U+E8(-2)", "U(2)+E8(-2)", "U+D4+D4",
                                           "UN", "UE8", "L(1,2)", "L(3,2)", "Lp(4,2)",
                                           "Mp(2,2)", "Mp(6,2)"};
         for (int n = 2; n <= 8; ++n) {
           names.push_back("M(" + std::to_string(n) + ")");
           names.push_back("M(1," + std::to_string(n) + ")");
           names.push_back("M(" + std::to_string(2 * n) + "," + std::to_string(n) + ")");
         }
         for (const auto& name : names) {
           auto inv = gram_invariants(catalog_lattice(name));
           int diff = static_cast<int>(inv.sig_plus) - static_cast<int>(inv.sig_minus);
           l.expect(milgram_signature(discriminant_form(catalog_lattice(name))) ==
                        ((diff % 8) + 8) % 8,
                    name);
         }
         for (int n = 3; n <= 8; ++n) {
           GenusDescriptor g = catalog_genus("Lp(" + std::to_string(2 * n) + "," +
                                             std::to_string(n) + ")");
           int diff = static_cast<int>(g.sig_plus) - static_cast<int>(g.sig_minus);
           l.expect(milgram_signature(g.disc) == ((diff % 8) + 8) % 8,
                    "Lp(" + std::to_string(2 * n) + "," + std::to_string(n) + ")");
         }
       }},
      {9, "isotropic subgroups and quotient forms against brute force", 30,
       [](Ledger& l) {
         for (const auto& [name, q] : fixtures::small_forms()) {
           for (std::int64_t order = 1; order * order <= q.size(); ++order) {
             if (q.size() % (order * order) != 0) continue;
             auto fast = isotropic_subgroups(q, order);
             std::set<std::set<Element>> got;
             for (const auto& h : fast) {
               std::set<Element> s;
               for (auto idx : h.elements) s.insert(q.element_at(idx));
               got.insert(s);
               if (order > 1) {
                 auto quo = quotient_form(q, h.generators);
                 l.expect(oracle::profile(quo.form) == oracle::quotient_profile(q, s),
                          name + ": quotient by a subgroup of order " + std::to_string(order));
               }
             }
             l.expect(got.size() == fast.size() && got == oracle::isotropic_subgroups(q, order),
                      name + ": isotropic subgroups of order " + std::to_string(order));
           }
         }
       }},
      {10, "two `verify all --json` runs are byte-identical", 600,
       [&cli](Ledger& l) {
         if (cli.empty()) throw Error("no CLI path given");
         const std::string cmd = "'" + cli + "' verify all --json";
         int s1 = 0, s2 = 0;
         std::string a = capture(cmd, s1);
         std::string b = capture(cmd, s2);
         l.expect(s1 == 0 && s2 == 0, "verify all exited nonzero");
         l.expect(!a.empty() && a == b, "outputs differ");
         l.expect(a.find("\"status\":\"fail\"") == std::string::npos, "fail records present");
       }},
  };

  bool all = true;
  for (const auto& c : criteria) all = run_criterion(c) && all;
  std::cout << (all ? "all criteria pass" : "some criteria fail") << '\n';
  return all ? 0 : 1;
}
