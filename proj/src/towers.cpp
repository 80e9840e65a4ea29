#include "k3lat/towers.hpp"

#include "k3lat/form_iso.hpp"

namespace k3lat {

namespace {

void require_n2(const FamilyDescriptor& f) {
  if (f.n != 2) throw Error("tower steps are defined for n = 2 only: " + to_string(f));
  validate(f);
}

Int pow2(int m) {
  Int r = 1;
  mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(m));
  return r;
}

}  // namespace

FamilyDescriptor quotient_step(const FamilyDescriptor& f) {
  require_n2(f);
  switch (f.kind) {
    case FamilyKind::L: return {FamilyKind::Mp, 2 * f.d, 2};
    case FamilyKind::Lp: return {FamilyKind::M, f.d / 2, 2};
    default:
      throw Error("quotient step needs L(e,2) or Lp(2e,2), got " + to_string(f));
  }
}

FamilyDescriptor cover_step(const FamilyDescriptor& f) {
  require_n2(f);
  switch (f.kind) {
    case FamilyKind::M: return {FamilyKind::Lp, 2 * f.d, 2};
    case FamilyKind::Mp: return {FamilyKind::L, f.d / 2, 2};
    default:
      throw Error("cover step needs M(e,2) or Mp(2e,2), got " + to_string(f));
  }
}

FamilyDescriptor identify_even(const FamilyDescriptor& f) {
  require_n2(f);
  if (f.d % 2 != 0) throw Error("identification needs an even parameter: " + to_string(f));
  if (f.kind == FamilyKind::M) return {FamilyKind::Lp, f.d, 2};
  if (f.kind == FamilyKind::Lp) return {FamilyKind::M, f.d, 2};
  throw Error("identification applies to M(2d,2) and Lp(2d,2) only: " + to_string(f));
}

IntegralLattice transcendental_lattice(const Int& e) {
  return direct_sum({lattice_U(), lattice_U(), lattice_N(), rank_one(-2 * e)})
      .relabeled("U+U+N+<" + Int(-2 * e).get_str() + ">");
}

namespace {

std::string node_problem(const TowerNode& node) {
  const IntegralLattice& t = node.transcendental;
  auto inv = gram_invariants(t);
  if (t.rank() != 13) return "transcendental rank " + std::to_string(t.rank());
  if (inv.sig_plus != 2 || inv.sig_minus != 11) return "transcendental signature";
  GenusDescriptor ns = family_lattice(node.ns).genus;
  if (ns.sig_plus != 1 || ns.sig_minus != 8) return "NS signature";
  if (!forms_isomorphic(discriminant_form(t), negate(ns.disc)))
    return "disc(T) is not -disc(NS)";
  return {};
}

}  // namespace

std::vector<TowerNode> tower(const Int& d, int depth) {
  if (d < 1) throw Error("tower needs d >= 1");
  if (depth < 0) throw Error("tower depth must be non-negative");
  std::vector<TowerNode> out;
  for (int m = 0; m <= depth; ++m) {
    const Int e = pow2(m) * d;
    TowerNode node{{FamilyKind::M, e, 2}, transcendental_lattice(e), m};
    const std::string bad = node_problem(node);
    if (!bad.empty()) throw Error("tower node " + to_string(node.ns) + ": " + bad);
    out.push_back(std::move(node));
  }
  return out;
}

ReportList tower_report(const Int& d, int depth) {
  ReportList out;
  for (int m = 0; m <= depth; ++m) {
    const Int e = pow2(m) * d;
    TowerNode node{{FamilyKind::M, e, 2}, transcendental_lattice(e), m};
    const std::string bad = node_problem(node);
    out.push_back(check("towers.d=" + d.get_str() + ".m=" + std::to_string(m) + " " +
                            to_string(node.ns),
                        bad.empty(), bad.empty() ? "T = " + node.transcendental.label() : bad));
  }
  return out;
}

TowerRelation tower_related(const Int& d, const Int& e) {
  if (d < 1 || e < 1) throw Error("tower_related needs positive parameters");
  TowerRelation r;
  if (d == e) {
    r.identical = true;
    return r;
  }
  Int big = d > e ? d : e, small = d > e ? e : d;
  if (big % small != 0) return r;
  Int q = big / small;
  if (mpz_popcount(q.get_mpz_t()) != 1) return r;
  r.related = true;
  r.m = static_cast<int>(mpz_sizeinbase(q.get_mpz_t(), 2) - 1);
  r.degree = q;
  return r;
}

MukaiCheck mukai_twisted_check(int m, const Int& d) {
  if (m < 0 || d < 1) throw Error("mukai check needs m >= 0 and d >= 1");
  const Int c = pow2(m + 1) * d;
  IntMatrix block(3, 3);
  block(0, 1) = block(1, 0) = 2;
  block(1, 2) = block(2, 1) = 1;
  block(2, 2) = c;
  MukaiCheck out;
  out.pic = direct_sum(IntegralLattice(block), lattice_N()).relabeled("Pic(S,B)");
  out.v.assign(out.pic.rank(), Int(0));
  out.v[1] = pow2(m) * d;
  out.v[2] = -1;
  if (out.pic.norm(out.v) != 0) throw Error("mukai check: v is not isotropic");

  IntMatrix vcol(out.pic.rank(), 1);
  for (std::size_t i = 0; i < out.v.size(); ++i) vcol(i, 0) = out.v[i];
  Embedding perp = orthogonal_complement(Embedding(out.pic, vcol));
  // coordinates of v in the basis of v^⊥, then a basis starting with v
  auto coords = solve(to_rat(perp.matrix()), to_rat_vector(out.v));
  if (!coords) throw Error("mukai check: v is not in v^⊥");
  IntVector cv;
  for (const auto& x : *coords) {
    if (x.get_den() != 1) throw Error("mukai check: v is not integral in v^⊥");
    cv.push_back(x.get_num());
  }
  IntMatrix basis = complete_to_unimodular(cv);
  IntMatrix rest = basis.submatrix(0, 1, basis.rows(), basis.cols() - 1);
  IntMatrix g = rest.transpose() * perp.sub().gram() * rest;
  out.quotient = IntegralLattice(g, "v^perp/Zv");
  out.genus_matches = genus_equal(genus_of(out.quotient),
                                  family_lattice({FamilyKind::M, pow2(m + 2) * d, 2}).genus);
  return out;
}

ReportList mukai_report(int m, const Int& d) {
  const std::string p = "mukai.m=" + std::to_string(m) + ".d=" + d.get_str() + ".";
  MukaiCheck mc = mukai_twisted_check(m, d);
  ReportList out;
  out.push_back(check(p + "v isotropic", mc.pic.norm(mc.v) == 0, {}, row_witness(mc.v)));
  out.push_back(check(p + "quotient rank 9", mc.quotient.rank() == 9));
  const FamilyDescriptor target{FamilyKind::M, pow2(m + 2) * d, 2};
  out.push_back(check(p + "v^⊥/Zv genus = " + to_string(target), mc.genus_matches));
  return out;
}

GaloisInvariants galois_cover_invariants(const Int& d, const std::vector<Int>& k) {
  if (k.size() != 8) throw Error("galois cover invariants need exactly 8 multiplicities");
  if (d < 1) throw Error("d must be positive");
  Int sum = 0;
  for (const auto& x : k) {
    if (x < 1) throw Error("each k_i must be a positive integer");
    sum += x;
  }
  GaloisInvariants g;
  const Rat t = Rat(d * sum * sum) / 2;
  g.chi_w = 4 + t;
  g.h20_w = 3 + t;
  g.h20_v = g.h20_w;
  g.h10 = 0;
  g.bound_holds = g.h20_v >= Rat(3 + 32 * d) && 3 + 32 * d >= 35;
  return g;
}

}  // namespace k3lat
