#include "k3lat/catalog.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <regex>

#include "k3lat/form_iso.hpp"
#include "k3lat/short_vectors.hpp"

namespace k3lat {

IntegralLattice lattice_U(const Int& n) {
  IntMatrix g{{0, 1}, {1, 0}};
  std::string label = n == 1 ? "U" : "U(" + n.get_str() + ")";
  return IntegralLattice(n * g, label);
}

IntegralLattice lattice_A(std::size_t m) {
  if (m < 1) throw Error("A(m) needs m >= 1");
  IntMatrix g(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    g(i, i) = -2;
    if (i + 1 < m) g(i, i + 1) = g(i + 1, i) = 1;
  }
  return IntegralLattice(g, "A(" + std::to_string(m) + ")");
}

IntegralLattice lattice_D4() {
  // node 1 is the centre
  IntMatrix g{{-2, 1, 0, 0}, {1, -2, 1, 1}, {0, 1, -2, 0}, {0, 1, 0, -2}};
  return IntegralLattice(g, "D4");
}

IntegralLattice lattice_E8(const Int& scale) {
  IntMatrix g(8, 8);
  for (std::size_t i = 0; i < 8; ++i) g(i, i) = -2;
  for (std::size_t i = 0; i < 6; ++i) g(i, i + 1) = g(i + 1, i) = 1;
  g(2, 7) = g(7, 2) = 1;
  return IntegralLattice(scale * g, "E8(-" + scale.get_str() + ")");
}

IntegralLattice lattice_N() {
  IntMatrix g(8, 8);
  g(0, 0) = -4;
  for (std::size_t j = 1; j < 8; ++j) {
    g(0, j) = g(j, 0) = -1;
    g(j, j) = -2;
  }
  return IntegralLattice(g, "N");
}

std::pair<RatVector, RatVector> e8m2_u2_block() {
  RatVector a(8, Rat(0)), b(8, Rat(0));
  a[0] = a[2] = Rat(1, 2);
  b[0] = b[7] = Rat(1, 2);
  return {a, b};
}

IntegralLattice named(const std::string& raw) {
  std::string name;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) name += c;
  std::smatch m;
  if (name == "U") return lattice_U();
  if (std::regex_match(name, m, std::regex(R"(U\((-?\d+)\))"))) {
    Int n(m[1].str());
    if (n == 0) throw Error("U(0) is degenerate");
    return lattice_U(n);
  }
  if (std::regex_match(name, m, std::regex(R"(A\((\d+)\))")))
    return lattice_A(std::stoul(m[1].str()));
  if (name == "D4" || name == "D4(-1)") return lattice_D4();
  if (name == "E8(-1)") return lattice_E8(1);
  if (name == "E8(-2)") return lattice_E8(2);
  if (name == "N") return lattice_N();
  if (std::regex_match(name, m, std::regex(R"(<(-?\d+)>)"))) {
    Int k(m[1].str());
    if (k == 0 || k % 2 != 0) throw Error("<k> needs a nonzero even k");
    return rank_one(k);
  }
  throw Error("unknown lattice name: " + raw);
}

const MnSeed& mn_seed(int n) {
  static const std::map<int, MnSeed> seeds = {
      {2, {{1, 1, 1, 1, 1, 1, 1, 1}, 8, 6}},
      {3, {{2, 2, 2, 2, 2, 2}, 12, 4}},
      {4, {{1, 1, 3, 3, 3, 3}, 14, 4}},
      {5, {{4, 4, 4, 4}, 16, 2}},
      {6, {{1, 1, 2, 2, 5, 5}, 16, 2}},
      {7, {{6, 6, 6}, 18, 1}},
      {8, {{1, 3, 7, 7}, 18, 2}},
  };
  auto it = seeds.find(n);
  if (it == seeds.end()) throw Error("M_n needs 2 <= n <= 8");
  return it->second;
}

namespace {

// Discriminant group of an orthogonal sum, one coordinate block per summand.
DiscriminantGroup sum_groups(const std::vector<IntegralLattice>& parts) {
  std::size_t n = 0, k = 0;
  std::vector<DiscriminantGroup> gs;
  for (const auto& p : parts) {
    gs.push_back(discriminant_group(p));
    n += p.rank();
    k += gs.back().factors.size();
  }
  DiscriminantGroup out;
  out.lifts = RatMatrix(n, k);
  out.coord_rows = IntMatrix(k, n);
  std::size_t r0 = 0, c0 = 0;
  for (std::size_t t = 0; t < parts.size(); ++t) {
    const auto& g = gs[t];
    for (std::size_t j = 0; j < g.factors.size(); ++j) {
      out.factors.push_back(g.factors[j]);
      for (std::size_t i = 0; i < parts[t].rank(); ++i) {
        out.lifts(r0 + i, c0 + j) = g.lifts(i, j);
        out.coord_rows(c0 + j, r0 + i) = g.coord_rows(j, i);
      }
    }
    r0 += parts[t].rank();
    c0 += g.factors.size();
  }
  return out;
}

// Signed permutation of A_m components carrying glue subgroup h1 onto h2.
class ComponentSymmetry {
 public:
  ComponentSymmetry(const std::vector<std::size_t>& types, const FiniteQuadraticForm& q)
      : types_(types), q_(q) {}

  // perm[i] = target component, sign[i] = ±1; found iff γ(g1) = t.
  bool find(const Element& g1, const Element& t, std::vector<std::size_t>& perm,
            std::vector<int>& sign) {
    const std::size_t c = types_.size();
    perm.assign(c, 0);
    sign.assign(c, 1);
    std::vector<bool> used(c, false);
    return assign(0, g1, t, perm, sign, used);
  }

 private:
  bool assign(std::size_t i, const Element& g1, const Element& t, std::vector<std::size_t>& perm,
              std::vector<int>& sign, std::vector<bool>& used) {
    if (i == types_.size()) return true;
    const std::int64_t ord = q_.orders()[i];
    for (std::size_t j = 0; j < types_.size(); ++j) {
      if (used[j] || types_[j] != types_[i]) continue;
      for (int s : {1, -1}) {
        if (s == -1 && types_[i] == 1) continue;
        if (((s * g1[i]) % ord + ord) % ord != t[j]) continue;
        used[j] = true;
        perm[i] = j;
        sign[i] = s;
        if (assign(i + 1, g1, t, perm, sign, used)) return true;
        used[j] = false;
      }
    }
    return false;
  }

  std::vector<std::size_t> types_;
  const FiniteQuadraticForm& q_;
};

IntMatrix component_matrix(const std::vector<std::size_t>& types,
                           const std::vector<std::size_t>& perm, const std::vector<int>& sign) {
  std::vector<std::size_t> offset(types.size() + 1, 0);
  for (std::size_t i = 0; i < types.size(); ++i) offset[i + 1] = offset[i] + types[i];
  IntMatrix g(offset.back(), offset.back());
  for (std::size_t i = 0; i < types.size(); ++i)
    for (std::size_t r = 0; r < types[i]; ++r) g(offset[perm[i]] + r, offset[i] + r) = sign[i];
  return g;
}

MnBuild do_build_Mn(int n) {
  const MnSeed& seed = mn_seed(n);
  std::vector<IntegralLattice> parts;
  std::size_t root_count = 0;
  for (auto m : seed.a_types) {
    parts.push_back(lattice_A(m));
    root_count += m * (m + 1);
  }
  IntegralLattice r = direct_sum(parts);
  DiscriminantGroup group = sum_groups(parts);
  FiniteQuadraticForm q = discriminant_form(r, group);

  MnBuild out;
  out.n = n;
  out.roots = root_count;
  std::vector<Overlattice> accepted;
  std::vector<Subgroup> accepted_h;
  for (bool cyclic : {true, false}) {
    auto subgroups = isotropic_subgroups(q, n, cyclic);
    for (const auto& h : subgroups) {
      ++out.tried;
      Overlattice z = overlattice_from_glue(r, group, h.generators);
      if (z.lattice.rank() != seed.rank) continue;
      if (discriminant_group(z.lattice).length() != seed.length) continue;
      if (short_vectors(z.lattice, -2).count(Int(-2)) != root_count) continue;
      accepted.push_back(std::move(z));
      accepted_h.push_back(h);
    }
    if (!accepted.empty()) {
      out.cyclic = cyclic;
      break;
    }
  }
  if (accepted.empty())
    throw Error("no M_" + std::to_string(n) + " candidate from the seeded root configuration");
  out.accepted = accepted.size();

  // Certify every candidate against the first through an explicit isometry
  // induced by a signed permutation of the root components.
  ComponentSymmetry sym(seed.a_types, q);
  const Subgroup& h1 = accepted_h[0];
  out.certified = 1;
  for (std::size_t j = 1; j < accepted.size(); ++j) {
    bool ok = false;
    std::vector<std::size_t> perm;
    std::vector<int> sign;
    for (const auto& gidx : accepted_h[j].elements) {
      Element t = q.element_at(gidx);
      if (q.order_of(t) != q.order_of(h1.generators[0]) && h1.generators.size() == 1) continue;
      if (h1.generators.size() == 1) {
        if (!sym.find(h1.generators[0], t, perm, sign)) continue;
      } else {
        break;
      }
      IntMatrix gamma = component_matrix(seed.a_types, perm, sign);
      RatMatrix m = inverse(accepted[j].basis) * to_rat(gamma) * accepted[0].basis;
      if (!is_integral(m)) continue;
      IntMatrix mi = to_int(m);
      if (mi.transpose() * accepted[j].lattice.gram() * mi != accepted[0].lattice.gram()) continue;
      ok = true;
      break;
    }
    if (!ok && h1.generators.size() > 1) {
      ok = is_isometric_definite(accepted[0].lattice, accepted[j].lattice).has_value();
    }
    if (!ok)
      throw Error("M_" + std::to_string(n) + " candidates are not all isometric");
    ++out.certified;
  }
  out.lattice = accepted[0].lattice.relabeled("M" + std::to_string(n));
  return out;
}

}  // namespace

const MnBuild& build_Mn_report(int n) {
  static std::mutex mu;
  static std::map<int, MnBuild> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, do_build_Mn(n)).first;
  return it->second;
}

GenusDescriptor omega_genus(int n) {
  const IntegralLattice& m = build_Mn(n);
  return make_genus(0, m.rank(), sum_forms({u_block(n), discriminant_form(m)}));
}

std::string kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::L: return "L";
    case FamilyKind::Lp: return "Lp";
    case FamilyKind::M: return "M";
    case FamilyKind::Mp: return "Mp";
    case FamilyKind::UN: return "UN";
    case FamilyKind::UE8: return "UE8";
  }
  return "?";
}

std::string to_string(const FamilyDescriptor& f) {
  return kind_name(f.kind) + "(" + f.d.get_str() + "," + std::to_string(f.n) + ")";
}

void validate(const FamilyDescriptor& f) {
  if (f.d < 1) throw Error("family parameter must be positive: " + to_string(f));
  if (f.n < 2 || f.n > 8) throw Error("family order must lie in 2..8: " + to_string(f));
  switch (f.kind) {
    case FamilyKind::Lp:
      if (f.n == 2 && f.d % 2 != 0) throw Error("Lp(d,2) needs d even: " + to_string(f));
      if (f.n > 2 && f.d % (2 * f.n) != 0)
        throw Error("Lp(d,n) needs d ≡ 0 mod 2n: " + to_string(f));
      break;
    case FamilyKind::Mp:
      if (f.n != 2) throw Error("Mp is only defined for n = 2: " + to_string(f));
      if (f.d % 2 != 0) throw Error("Mp(e,2) needs e even: " + to_string(f));
      break;
    case FamilyKind::UN:
    case FamilyKind::UE8:
      if (f.n != 2) throw Error("UN/UE8 families have n = 2: " + to_string(f));
      break;
    default:
      break;
  }
}

namespace {

struct GlueBuild {
  IntegralLattice lattice;
  GlueCertificate cert;
};

// Index-2 overlattices of <2d> ⊕ W with both summands primitive.
GlueBuild index_two_glue(const Int& d, const IntegralLattice& w, const std::string& label) {
  IntegralLattice v = direct_sum(rank_one(2 * d), w);
  DiscriminantGroup group = discriminant_group(v);
  FiniteQuadraticForm q = discriminant_form(v, group);
  std::vector<Overlattice> good;
  for (const auto& h : isotropic_subgroups(q, 2, true)) {
    Overlattice z = overlattice_from_glue(v, group, h.generators);
    Embedding pol(z.lattice, z.embedding.submatrix(0, 0, v.rank(), 1));
    Embedding rest(z.lattice, z.embedding.submatrix(0, 1, v.rank(), w.rank()));
    if (is_primitive(pol) && is_primitive(rest)) good.push_back(std::move(z));
  }
  if (good.empty()) throw Error("no index-2 glue for " + label);
  GlueBuild out{good[0].lattice.relabeled(label), {good.size(), true}};
  GenusDescriptor g0 = genus_of(out.lattice);
  for (std::size_t i = 1; i < good.size() && out.cert.all_genus_equal; ++i)
    out.cert.all_genus_equal = genus_equal(g0, genus_of(good[i].lattice));
  if (!out.cert.all_genus_equal)
    throw Error("index-2 glue candidates for " + label + " are not genus-equal");
  return out;
}

struct FamilyCacheEntry {
  FamilyLattice value;
  GlueCertificate cert;
};

FamilyCacheEntry build_family(const FamilyDescriptor& f) {
  validate(f);
  const std::string label = to_string(f);
  FamilyCacheEntry e;
  auto set_lattice = [&](const IntegralLattice& l) {
    e.value.lattice = l.relabeled(label);
    e.value.genus = genus_of(l);
  };
  switch (f.kind) {
    case FamilyKind::L:
      if (f.n == 2) {
        set_lattice(direct_sum(rank_one(2 * f.d), lattice_E8(2)));
      } else {
        GenusDescriptor om = omega_genus(f.n);
        e.value.genus = make_genus(1, om.rank(),
                                   sum_forms({cyclic_block(to_int64(2 * f.d), Rat(1, 2 * f.d)),
                                              om.disc}));
      }
      break;
    case FamilyKind::Lp:
      if (f.n == 2) {
        GlueBuild g = index_two_glue(f.d, lattice_E8(2), label);
        set_lattice(g.lattice);
        e.cert = g.cert;
      } else {
        GenusDescriptor gl = family_lattice({FamilyKind::L, f.d, f.n}).genus;
        // generators: h, then the u(n) block, then q_{M_n}
        FiniteQuadraticForm q = gl.disc;
        LemmaBlock block{q.generator(0), q.generator(1), q.generator(2)};
        e.value.genus = genus_lemma_quotient(gl, block, f.d, f.n);
      }
      break;
    case FamilyKind::M:
      set_lattice(direct_sum(rank_one(2 * f.d), build_Mn(f.n)));
      break;
    case FamilyKind::Mp: {
      GlueBuild g = index_two_glue(f.d, lattice_N(), label);
      set_lattice(g.lattice);
      e.cert = g.cert;
      break;
    }
    case FamilyKind::UN:
      set_lattice(direct_sum(lattice_U(), lattice_N()));
      break;
    case FamilyKind::UE8:
      set_lattice(direct_sum(lattice_U(), lattice_E8(2)));
      break;
  }
  return e;
}

const FamilyCacheEntry& family_entry(const FamilyDescriptor& f) {
  static std::recursive_mutex mu;
  static std::map<std::string, FamilyCacheEntry> cache;
  std::lock_guard<std::recursive_mutex> lock(mu);
  const std::string key = to_string(f);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_family(f)).first;
  return it->second;
}

}  // namespace

FamilyLattice family_lattice(const FamilyDescriptor& f) { return family_entry(f).value; }

GlueCertificate glue_certificate(const FamilyDescriptor& f) { return family_entry(f).cert; }

GenusDescriptor family_genus(const FamilyDescriptor& f) {
  validate(f);
  if (f.n != 2 || (f.kind != FamilyKind::Lp && f.kind != FamilyKind::Mp))
    return family_lattice(f).genus;
  // quotient of q_V by the first order-2 glue meeting both summands
  IntegralLattice w = f.kind == FamilyKind::Lp ? lattice_E8(2) : lattice_N();
  IntegralLattice v = direct_sum(rank_one(2 * f.d), w);
  DiscriminantGroup group = discriminant_group(v);
  FiniteQuadraticForm q = discriminant_form(v, group);
  for (const auto& h : isotropic_subgroups(q, 2, true)) {
    RatVector x = group.lift(h.generators[0]);
    bool polarization_part = x[0].get_den() != 1;
    bool lattice_part = std::any_of(x.begin() + 1, x.end(),
                                    [](const Rat& c) { return c.get_den() != 1; });
    if (polarization_part && lattice_part)
      return make_genus(1, 8, quotient_form(q, h.generators).form);
  }
  throw Error("no index-2 glue for " + to_string(f));
}

Membership membership_classification(const IntegralLattice& ns) {
  auto inv = gram_invariants(ns);
  if (ns.rank() != 9 || inv.sig_plus != 1 || inv.sig_minus != 8)
    throw Error("membership classification needs a hyperbolic rank-9 lattice");
  GenusDescriptor g = genus_of(ns);
  const Int det = abs(ns.determinant());
  Membership out;
  auto try_family = [&](FamilyKind kind, const Int& divisor, bool even_only) {
    if (!mpz_divisible_p(det.get_mpz_t(), divisor.get_mpz_t())) return;
    Int p = det / divisor;
    if (p < 1 || (even_only && p % 2 != 0)) return;
    FamilyDescriptor f{kind, p, 2};
    GenusDescriptor fg = family_genus(f);
    if (fg.disc.invariant_factors() != g.disc.invariant_factors()) return;
    if (!genus_equal(g, fg)) return;
    out.matches.push_back(f);
    if (kind == FamilyKind::L || kind == FamilyKind::Lp) out.covers_k3 = true;
    if (kind == FamilyKind::M || kind == FamilyKind::Mp) out.covered_by_k3 = true;
  };
  try_family(FamilyKind::L, 512, false);
  try_family(FamilyKind::Lp, 128, true);
  try_family(FamilyKind::M, 128, false);
  try_family(FamilyKind::Mp, 32, true);
  if (out.matches.empty()) throw Error("lattice matches none of L, Lp, M, Mp");
  return out;
}

namespace {

std::vector<std::string> split_sum(const std::string& name) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '(' || c == '<') ++depth;
    if (c == ')' || c == '>') --depth;
    if (c == '+' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::optional<FamilyDescriptor> parse_family(const std::string& name) {
  std::smatch m;
  static const std::regex two(R"((Lp|Mp|L|M)\((\d+),(\d+)\))");
  if (std::regex_match(name, m, two)) {
    FamilyKind k = m[1] == "L" ? FamilyKind::L
                   : m[1] == "Lp" ? FamilyKind::Lp
                   : m[1] == "M"  ? FamilyKind::M
                                  : FamilyKind::Mp;
    return FamilyDescriptor{k, Int(m[2].str()), std::stoi(m[3].str())};
  }
  if (name == "UN") return FamilyDescriptor{FamilyKind::UN, 1, 2};
  if (name == "UE8") return FamilyDescriptor{FamilyKind::UE8, 1, 2};
  return std::nullopt;
}

}  // namespace

IntegralLattice catalog_lattice(const std::string& name) {
  auto parts = split_sum(name);
  if (parts.size() > 1) {
    std::vector<IntegralLattice> ls;
    for (const auto& p : parts) ls.push_back(catalog_lattice(p));
    return direct_sum(ls);
  }
  const std::string& s = parts[0];
  std::smatch m;
  if (std::regex_match(s, m, std::regex(R"(M\((\d+)\))"))) return build_Mn(std::stoi(m[1].str()));
  if (auto f = parse_family(s)) {
    FamilyLattice fl = family_lattice(*f);
    if (!fl.lattice) throw Error(s + " is only available at genus level");
    return *fl.lattice;
  }
  return named(s);
}

GenusDescriptor catalog_genus(const std::string& name) {
  auto parts = split_sum(name);
  if (parts.size() == 1)
    if (auto f = parse_family(parts[0])) return family_lattice(*f).genus;
  return genus_of(catalog_lattice(name));
}

}  // namespace k3lat
