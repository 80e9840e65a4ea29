#include "k3lat/ns_geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "k3lat/form_iso.hpp"
#include "k3lat/parallel.hpp"
#include "k3lat/short_vectors.hpp"

namespace k3lat {

namespace {

IntVector vec(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

IntVector unit(std::size_t n, std::size_t i) {
  IntVector v(n, Int(0));
  v[i] = 1;
  return v;
}

IntVector add(const IntVector& a, const IntVector& b) {
  IntVector c(a);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

IntVector sub(const IntVector& a, const IntVector& b) {
  IntVector c(a);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
  return c;
}

IntVector scaled(const IntVector& a, const Int& k) {
  IntVector c(a);
  for (auto& x : c) x *= k;
  return c;
}

bool all_even(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return mpz_even_p(x.get_mpz_t()); });
}

std::string vec_string(const IntVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

IntMatrix columns(const std::vector<IntVector>& cols) {
  return IntMatrix::from_columns(cols, cols.front().size());
}

IntMatrix single_column(const IntVector& v) { return columns({v}); }

std::string nth(const std::string& prefix, std::size_t i) { return prefix + std::to_string(i); }

}  // namespace

LabeledLattice::LabeledLattice(IntegralLattice lattice, std::map<std::string, IntVector> labels,
                               const std::vector<Relation>& relations)
    : lattice_(std::move(lattice)), labels_(std::move(labels)) {
  for (const auto& [name, v] : labels_)
    if (v.size() != lattice_.rank()) throw Error("label " + name + " has the wrong length");
  for (const auto& [a, b, value] : relations) {
    const Int got = product(a, b);
    if (got != value)
      throw Error("relation " + a + "·" + b + " = " + std::to_string(value) + " fails (got " +
                  got.get_str() + ")");
  }
}

const IntVector& LabeledLattice::at(const std::string& name) const {
  auto it = labels_.find(name);
  if (it == labels_.end()) throw Error("unknown label " + name);
  return it->second;
}

Int LabeledLattice::product(const std::string& a, const std::string& b) const {
  return lattice_.product(at(a), at(b));
}

// ---------------------------------------------------------------------------
// The surface with NS = L'(2,2)

LabeledLattice build_X2() {
  const IntMatrix e8 = lattice_E8(2).gram();
  IntMatrix g(9, 9);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) g(i + 1, j + 1) = e8(i, j);
  g(0, 1) = g(1, 0) = -2;
  g(0, 2) = g(2, 0) = 1;

  std::map<std::string, IntVector> labels;
  labels["E1"] = unit(9, 0);
  for (std::size_t i = 1; i <= 8; ++i) labels[nth("e", i)] = unit(9, i);
  labels["E2"] = vec({1, -1, 0, 0, 0, 0, 0, 0, 0});
  labels["L"] = vec({2, -1, 0, 0, 0, 0, 0, 0, 0});
  // N_i = E1 + e2 + ... + e_{i+1} for i <= 6
  for (std::size_t i = 1; i <= 6; ++i) {
    IntVector v = unit(9, 0);
    for (std::size_t j = 2; j <= i + 1; ++j) v[j] = 1;
    labels[nth("N", i)] = v;
  }
  labels["N7"] = vec({1, -2, -3, -5, -4, -3, -2, -1, -3});
  labels["N8"] = vec({3, 0, 1, 0, 0, 0, 0, 0, -1});
  labels["N8'"] = vec({3, -3, -1, 0, 0, 0, 0, 0, 1});
  labels["N8''"] = vec({3, -2, 1, 0, 0, 0, 0, 0, -1});
  labels["N8'''"] = vec({3, -1, -1, 0, 0, 0, 0, 0, 1});
  labels["H"] = vec({6, -1, 2, 0, 0, 0, 0, 0, -2});

  std::vector<LabeledLattice::Relation> rel = {
      {"E1", "E1", 0}, {"E1", "e1", -2}, {"E1", "e2", 1}, {"E2", "E2", 0},
      {"E1", "E2", 2}, {"L", "L", 4}};
  for (std::size_t j = 3; j <= 8; ++j) rel.emplace_back("E1", nth("e", j), 0);
  for (std::size_t j = 1; j <= 8; ++j) rel.emplace_back("L", nth("e", j), 0);
  return LabeledLattice(IntegralLattice(g, "NS(X2)"), std::move(labels), rel);
}

X2Involutions involutions_X2() {
  const IntegralLattice l = build_X2().lattice();
  IntMatrix sigma(9, 9), iq(9, 9), idp(9, 9);
  // columns are images of E1, e1, ..., e8
  sigma(0, 0) = 1;
  sigma(1, 0) = -1;
  for (std::size_t i = 1; i <= 8; ++i) sigma(i, i) = -1;

  iq(0, 0) = 1;
  iq(1, 1) = 1;
  iq(1, 2) = -1;
  iq(2, 2) = -1;
  for (std::size_t j = 3; j <= 8; ++j) iq(j, j) = -1;

  idp(0, 0) = 1;
  idp(1, 0) = -1;
  idp(1, 1) = -1;
  idp(1, 2) = 1;
  idp(2, 2) = 1;
  for (std::size_t j = 3; j <= 8; ++j) idp(j, j) = 1;

  X2Involutions out{IsometryAction(l, sigma), IsometryAction(l, iq), IsometryAction(l, idp)};
  const IntMatrix id = IntMatrix::identity(9);
  for (const auto* g : {&out.sigma, &out.iota_q, &out.iota_dp})
    if (g->matrix() * g->matrix() != id) throw Error("internal error: X2 map is not an involution");
  if (out.iota_q.matrix() * out.iota_dp.matrix() != sigma ||
      out.iota_dp.matrix() * out.iota_q.matrix() != sigma)
    throw Error("internal error: sigma is not iotaQ∘iotaDP");
  return out;
}

namespace {

std::vector<std::string> section_names() {
  std::vector<std::string> n;
  for (std::size_t i = 1; i <= 8; ++i) n.push_back(nth("N", i));
  return n;
}

IntVector label_sum(const LabeledLattice& l, const std::vector<std::string>& names) {
  IntVector s(l.lattice().rank(), Int(0));
  for (const auto& n : names) s = add(s, l.at(n));
  return s;
}

Report product_check(const LabeledLattice& l, const std::string& prefix, const std::string& a,
                     const std::string& b, long want) {
  const Int got = l.product(a, b);
  const std::string rel = a + "·" + b + " = " + std::to_string(want);
  return check(prefix + rel, got == want, got == want ? rel : rel + " fails: got " + got.get_str());
}

}  // namespace

ReportList verify_sections() {
  const LabeledLattice x = build_X2();
  ReportList out;
  const std::string p = "x2.sections.";
  const auto ns = section_names();
  for (std::size_t i = 0; i < 8; ++i) {
    out.push_back(product_check(x, p, ns[i], ns[i], -2));
    out.push_back(product_check(x, p, ns[i], "E1", 1));
    const Int nl = x.product(ns[i], "L");
    out.push_back(check(p + ns[i] + "·L > 0", nl > 0, ns[i] + "·L = " + nl.get_str()));
    for (std::size_t j = i + 1; j < 8; ++j) out.push_back(product_check(x, p, ns[i], ns[j], 0));
    out.push_back(product_check(x, p, "H", ns[i], 0));
  }
  for (std::size_t i = 0; i < 7; ++i) out.push_back(product_check(x, p, ns[i], "E2", 1));
  out.push_back(product_check(x, p, "N8", "E2", 5));
  out.push_back(product_check(x, p, "H", "H", 4));

  IntVector s = label_sum(x, ns);
  out.push_back(check(p + "(ΣN_i)/2 integral", all_even(s), "ΣN_i = " + vec_string(s),
                      row_witness(s)));

  out.push_back(product_check(x, p, "N8''", "N8''", -2));
  out.push_back(product_check(x, p, "N8''", "E1", 5));
  out.push_back(product_check(x, p, "N8''", "E2", 1));
  for (std::size_t i = 0; i < 7; ++i) out.push_back(product_check(x, p, ns[i], "N8''", 0));
  std::vector<std::string> second(ns.begin(), ns.begin() + 7);
  second.push_back("N8''");
  IntVector s2 = label_sum(x, second);
  out.push_back(check(p + "(ΣN_i(i<=7)+N8'')/2 integral", all_even(s2),
                      "sum = " + vec_string(s2), row_witness(s2)));
  return out;
}

bool no_reducible_fibers(const LabeledLattice& l, const std::string& label) {
  const IntVector& e = l.at(label);
  if (l.lattice().norm(e) != 0) throw Error("class " + label + " is not isotropic");
  Embedding perp = orthogonal_complement(Embedding(l.lattice(), single_column(e)));
  const IntMatrix& g = perp.sub().gram();
  for (std::size_t i = 0; i < g.rows(); ++i) {
    if (!mpz_divisible_ui_p(g(i, i).get_mpz_t(), 4)) return false;
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (!mpz_even_p(g(i, j).get_mpz_t())) return false;
  }
  return true;
}

ReportList orbit_and_even_sets() {
  const LabeledLattice x = build_X2();
  const X2Involutions inv = involutions_X2();
  const IntMatrix id = IntMatrix::identity(9);
  const std::vector<IntMatrix> group = {id, inv.sigma.matrix(), inv.iota_q.matrix(),
                                        inv.iota_dp.matrix()};
  ReportList out;
  const std::string p = "x2.orbits.";

  // closure of the generated group
  std::set<std::vector<Int>> elements;
  for (const auto& a : group)
    for (const auto& b : group) {
      IntMatrix c = a * b;
      std::vector<Int> flat;
      for (std::size_t i = 0; i < 9; ++i)
        for (auto& v : c.row(i)) flat.push_back(v);
      elements.insert(flat);
    }
  out.push_back(check(p + "group order 4", elements.size() == 4,
                      "closure has " + std::to_string(elements.size()) + " elements"));

  auto orbit = [&](const IntVector& v) {
    std::set<IntVector> o;
    for (const auto& g : group) o.insert(g * v);
    return o;
  };

  const IntVector& n8 = x.at("N8");
  std::set<IntVector> want8 = {n8, x.at("N8'"), x.at("N8''"), x.at("N8'''")};
  auto o8 = orbit(n8);
  out.push_back(check(p + "orbit(N8) = {N8, N8', N8'', N8'''}", o8 == want8,
                      "orbit size " + std::to_string(o8.size())));
  out.push_back(check(p + "sigma(N8) = N8'", inv.sigma.apply(n8) == x.at("N8'")));
  out.push_back(check(p + "iotaDP(N8) = N8''", inv.iota_dp.apply(n8) == x.at("N8''")));
  out.push_back(check(p + "sigma(iotaDP(N8)) = N8'''",
                      inv.sigma.apply(inv.iota_dp.apply(n8)) == x.at("N8'''")));
  IntVector total(9, Int(0));
  for (const auto& v : o8) total = add(total, v);
  out.push_back(check(p + "orbit sum = 6L", total == scaled(x.at("L"), 6), vec_string(total),
                      row_witness(total)));
  out.push_back(check(p + "orbit sum = 12E1 - 6e1",
                      total == sub(scaled(x.at("E1"), 12), scaled(x.at("e1"), 6))));

  std::vector<std::string> literal_fails;
  for (std::size_t i = 1; i <= 7; ++i) {
    const IntVector& ni = x.at(nth("N", i));
    auto oi = orbit(ni);
    const std::string name = nth("N", i);
    out.push_back(check(p + "orbit(" + name + ") has size 2", oi.size() == 2,
                        "size " + std::to_string(oi.size())));
    out.push_back(check(p + "iotaDP(" + name + ") = " + name, inv.iota_dp.apply(ni) == ni));
    out.push_back(check(p + "iotaQ(" + name + ") = sigma(" + name + ") != " + name,
                        inv.iota_q.apply(ni) == inv.sigma.apply(ni) && inv.sigma.apply(ni) != ni));
    if (inv.iota_q.apply(ni) != ni) literal_fails.push_back(name);
  }
  if (!literal_fails.empty()) {
    std::string names;
    for (const auto& n : literal_fails) names += (names.empty() ? "" : ",") + n;
    out.push_back({p + "literal reading iotaQ(N_i) = N_i", Status::Discrepancy,
                   "with the tabulated matrices iotaQ(N_i) = sigma(N_i) != N_i for " + names +
                       "; iotaDP is the one fixing them",
                   std::nullopt});
  }
  auto oe = orbit(x.at("E1"));
  out.push_back(check(p + "orbit(E1) = {E1, E2}",
                      oe == std::set<IntVector>{x.at("E1"), x.at("E2")}));

  // the del Pezzo cover involution
  const IntVector h = x.at("H");
  out.push_back(check(p + "iotaDP(H - N8) = H - N8",
                      inv.iota_dp.apply(sub(h, n8)) == sub(h, n8)));
  out.push_back(check(p + "iotaDP(N8) = 2H - 3N8",
                      inv.iota_dp.apply(n8) == sub(scaled(h, 2), scaled(n8, 3))));
  std::set<IntVector> first, image, second;
  for (const auto& n : section_names()) {
    first.insert(x.at(n));
    image.insert(inv.iota_dp.apply(x.at(n)));
  }
  second = first;
  second.erase(n8);
  second.insert(x.at("N8''"));
  out.push_back(check(p + "iotaDP{N1..N8} = {N1..N7, N8''}", image == second));
  return out;
}

IntMatrix base_change() {
  const LabeledLattice x = build_X2();
  std::vector<IntVector> cols = {x.at("H")};
  for (std::size_t i = 1; i <= 7; ++i) cols.push_back(x.at(nth("N", i)));
  IntVector s = label_sum(x, section_names());
  for (auto& c : s) c /= 2;
  cols.push_back(s);
  return columns(cols);
}

ReportList base_change_report() {
  const LabeledLattice x = build_X2();
  const IntMatrix b = base_change();
  ReportList out;
  const std::string p = "x2.base_change.";
  const Int det = determinant(b);
  out.push_back(check(p + "unimodular", det == 1 || det == -1, "det = " + det.get_str(), b));
  if (det != 1 && det != -1) return out;
  const IntMatrix binv = to_int(inverse(b));

  // in the new basis (H, N1..N7, s): N8 = 2s - ΣN_{i<=7}
  IntVector hh = unit(9, 0), ss = unit(9, 8), n8(9, Int(-1));
  n8[0] = 0;
  n8[8] = 2;
  IntVector e1 = binv * x.at("E1");
  IntVector e2 = binv * x.at("E2");
  out.push_back(check(p + "E1 = H - (ΣN_i)/2", e1 == sub(hh, ss), vec_string(e1)));
  out.push_back(check(p + "E2 = 2H - (ΣN_i)/2 - 2N8",
                      e2 == sub(sub(scaled(hh, 2), ss), scaled(n8, 2)), vec_string(e2)));

  // B^T G B against <4> ⊕ N, whose catalog basis is (h, (ΣN_i)/2, N1..N7)
  const IntMatrix gm = b.transpose() * x.lattice().gram() * b;
  IntegralLattice m22 = *family_lattice({FamilyKind::M, 2, 2}).lattice;
  IntMatrix perm(9, 9);
  perm(0, 0) = 1;
  for (std::size_t i = 1; i <= 7; ++i) perm(i + 1, i) = 1;
  perm(1, 8) = 1;
  const IntMatrix want = perm.transpose() * m22.gram() * perm;
  out.push_back(check(p + "Gram in new basis is M(2,2)", gm == want, to_string(gm)));

  const RatMatrix conj = inverse(b) * to_rat(involutions_X2().sigma.matrix()) * to_rat(b);
  bool ok = is_integral(conj);
  if (ok) {
    IntMatrix c = to_int(conj);
    ok = c.transpose() * gm * c == gm;
  }
  out.push_back(check(p + "sigma conjugates to an isometry of M(2,2)", ok));
  return out;
}

// ---------------------------------------------------------------------------
// Even sets

namespace {

struct BoxSetup {
  std::size_t n = 0;
  std::vector<std::vector<std::int64_t>> g;
  std::vector<std::int64_t> ge;  // G·E
  std::size_t lin = 0;           // coordinate solved from v·E = 1
  long quad = -1;                // coordinate solved from v² = -2, or -1
  std::vector<std::size_t> free;
  long bound = 0;
};

void box_leaf(const BoxSetup& s, std::vector<std::int64_t>& x, std::vector<std::int64_t> gx,
              std::int64_t q, std::vector<std::vector<std::int64_t>>& found) {
  std::int64_t rest = 1;
  for (std::size_t l = 0; l < s.n; ++l)
    if (l != s.lin) rest -= s.ge[l] * x[l];
  if (rest % s.ge[s.lin] != 0) return;
  const std::int64_t xl = rest / s.ge[s.lin];
  if (xl < -s.bound || xl > s.bound) return;
  x[s.lin] = xl;
  q += 2 * xl * gx[s.lin] + xl * xl * s.g[s.lin][s.lin];
  for (std::size_t l = 0; l < s.n; ++l) gx[l] += xl * s.g[l][s.lin];

  auto emit = [&](std::int64_t t) {
    if (s.quad >= 0) x[s.quad] = t;
    found.push_back(x);
  };
  if (s.quad < 0) {
    if (q == -2) emit(0);
  } else {
    const std::size_t i = static_cast<std::size_t>(s.quad);
    const std::int64_t a = s.g[i][i], b = gx[i], c = q + 2;  // a t² + 2 b t + c = 0
    if (a == 0) {
      if (b == 0) {
        if (c == 0)
          for (std::int64_t t = -s.bound; t <= s.bound; ++t) emit(t);
      } else if ((-c) % (2 * b) == 0) {
        const std::int64_t t = -c / (2 * b);
        if (t >= -s.bound && t <= s.bound) emit(t);
      }
    } else {
      const std::int64_t disc = b * b - a * c;
      if (disc >= 0) {
        std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(disc)));
        while (r * r > disc) --r;
        while ((r + 1) * (r + 1) <= disc) ++r;
        if (r * r == disc) {
          std::set<std::int64_t> roots;
          for (std::int64_t num : {-b + r, -b - r})
            if (num % a == 0) roots.insert(num / a);
          for (auto t : roots)
            if (t >= -s.bound && t <= s.bound) emit(t);
        }
      }
    }
    x[i] = 0;
  }
  x[s.lin] = 0;
}

void box_walk(const BoxSetup& s, std::size_t depth, std::vector<std::int64_t>& x,
              std::vector<std::int64_t>& gx, std::int64_t q,
              std::vector<std::vector<std::int64_t>>& found) {
  if (depth == s.free.size()) {
    box_leaf(s, x, gx, q, found);
    return;
  }
  const std::size_t l = s.free[depth];
  for (std::int64_t t = -s.bound; t <= s.bound; ++t) {
    x[l] = t;
    const std::int64_t q2 = q + 2 * t * gx[l] + t * t * s.g[l][l];
    for (std::size_t k = 0; k < s.n; ++k) gx[k] += t * s.g[k][l];
    box_walk(s, depth + 1, x, gx, q2, found);
    for (std::size_t k = 0; k < s.n; ++k) gx[k] -= t * s.g[k][l];
  }
  x[l] = 0;
}

std::vector<IntVector> sections_in_box(const IntegralLattice& lat, const IntVector& e, long bound) {
  BoxSetup s;
  s.n = lat.rank();
  s.bound = bound;
  s.g.assign(s.n, std::vector<std::int64_t>(s.n));
  for (std::size_t i = 0; i < s.n; ++i)
    for (std::size_t j = 0; j < s.n; ++j) s.g[i][j] = to_int64(lat.gram()(i, j));
  IntVector ge = lat.gram() * e;
  s.ge.resize(s.n);
  for (std::size_t i = 0; i < s.n; ++i) s.ge[i] = to_int64(ge[i]);
  Int content = 0;
  for (const auto& c : ge) content = gcd(content, c);
  if (content != 1) return {};  // v·E is always a multiple of content
  long lin = -1;
  for (std::size_t i = 0; i < s.n && lin < 0; ++i)
    if (s.ge[i] == 1 || s.ge[i] == -1) lin = static_cast<long>(i);
  if (lin < 0) throw Error("no coordinate solves v·E = 1 directly");
  s.lin = static_cast<std::size_t>(lin);
  for (std::size_t i = 0; i < s.n; ++i)
    if (i != s.lin && s.ge[i] == 0 && (s.quad < 0 || s.g[i][i] == 0)) {
      if (s.quad < 0 || s.g[static_cast<std::size_t>(s.quad)][static_cast<std::size_t>(s.quad)] != 0)
        s.quad = static_cast<long>(i);
    }
  for (std::size_t i = 0; i < s.n; ++i)
    if (i != s.lin && static_cast<long>(i) != s.quad) s.free.push_back(i);

  // split on the first free coordinate
  const std::size_t width = static_cast<std::size_t>(2 * bound + 1);
  std::vector<std::vector<std::vector<std::int64_t>>> parts(s.free.empty() ? 1 : width);
  parallel_for(parts.size(), [&](std::size_t k) {
    std::vector<std::int64_t> x(s.n, 0), gx(s.n, 0);
    if (s.free.empty()) {
      box_leaf(s, x, gx, 0, parts[k]);
      return;
    }
    const std::size_t l = s.free[0];
    const std::int64_t t = static_cast<std::int64_t>(k) - bound;
    x[l] = t;
    for (std::size_t i = 0; i < s.n; ++i) gx[i] = t * s.g[i][l];
    box_walk(s, 1, x, gx, t * t * s.g[l][l], parts[k]);
  });
  std::vector<IntVector> out;
  for (const auto& part : parts)
    for (const auto& v : part) {
      IntVector w(s.n);
      for (std::size_t i = 0; i < s.n; ++i) w[i] = v[i];
      out.push_back(std::move(w));
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

using Bits = std::vector<std::uint64_t>;

void set_bit(Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t(1) << (i & 63); }

struct CliqueTables {
  std::vector<Bits> adj;              // adjacency, restricted to later vertices
  std::vector<std::uint64_t> parity;  // coordinate parities
};

struct CliqueSearch {
  const std::vector<Bits>* adj = nullptr;
  const std::vector<std::uint64_t>* parity = nullptr;
  std::size_t cliques = 0;
  std::vector<std::vector<std::size_t>> even;

  void extend(std::vector<std::size_t>& clique, const Bits& cand, std::uint64_t par) {
    if (clique.size() == 8) {
      ++cliques;
      if (par == 0) even.push_back(clique);
      return;
    }
    std::size_t left = 0;
    for (auto w : cand) left += static_cast<std::size_t>(std::popcount(w));
    if (clique.size() + left < 8) return;
    for (std::size_t wi = 0; wi < cand.size(); ++wi) {
      std::uint64_t w = cand[wi];
      while (w) {
        const std::size_t v = wi * 64 + static_cast<std::size_t>(std::countr_zero(w));
        w &= w - 1;
        Bits next(cand.size());
        for (std::size_t k = 0; k < cand.size(); ++k) next[k] = cand[k] & (*adj)[v][k];
        clique.push_back(v);
        extend(clique, next, par ^ (*parity)[v]);
        clique.pop_back();
      }
    }
  }
};

}  // namespace

EvenSetSearch find_even_sets(const LabeledLattice& l, const std::string& label, long bound) {
  if (bound < 0) throw Error("coefficient bound must be non-negative");
  const IntegralLattice& lat = l.lattice();
  if (lat.rank() > 64) throw Error("even-set search supports rank <= 64");
  const IntVector& e = l.at(label);
  if (lat.norm(e) != 0) throw Error("class " + label + " is not isotropic");

  std::vector<IntVector> vs = sections_in_box(lat, e, bound);
  EvenSetSearch out;
  out.vectors = vs.size();
  const std::size_t n = vs.size();

  // order by degree so that low-degree vertices are expanded first
  std::vector<std::size_t> degree(n, 0);
  std::vector<std::vector<std::int64_t>> gv(n);
  for (std::size_t i = 0; i < n; ++i) {
    IntVector t = lat.gram() * vs[i];
    for (auto& c : t) gv[i].push_back(to_int64(c));
  }
  auto orth = [&](std::size_t i, std::size_t j) {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < vs[j].size(); ++k) s += gv[i][k] * vs[j][k].get_si();
    return s == 0;
  };
  std::vector<std::vector<char>> o(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (orth(i, j)) {
        o[i][j] = o[j][i] = 1;
        ++degree[i];
        ++degree[j];
      }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return degree[a] < degree[b]; });

  CliqueTables cs;
  const std::size_t words = (n + 63) / 64;
  cs.adj.assign(n, Bits(words, 0));
  cs.parity.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b)
      if (o[order[a]][order[b]]) set_bit(cs.adj[a], b);
    for (std::size_t k = 0; k < vs[order[a]].size(); ++k)
      if (mpz_odd_p(vs[order[a]][k].get_mpz_t())) cs.parity[a] |= std::uint64_t(1) << k;
  }

  std::vector<std::size_t> counts(n, 0);
  std::vector<std::vector<std::vector<std::size_t>>> evens(n);
  parallel_for(n, [&](std::size_t a) {
    CliqueSearch local;
    local.adj = &cs.adj;
    local.parity = &cs.parity;
    std::vector<std::size_t> clique = {a};
    local.extend(clique, cs.adj[a], cs.parity[a]);
    counts[a] = local.cliques;
    evens[a] = std::move(local.even);
  });

  for (std::size_t a = 0; a < n; ++a) {
    out.cliques += counts[a];
    for (const auto& c : evens[a]) {
      std::vector<IntVector> set;
      for (auto v : c) set.push_back(vs[order[v]]);
      std::sort(set.begin(), set.end());
      out.sets.push_back(std::move(set));
    }
  }
  std::sort(out.sets.begin(), out.sets.end());
  return out;
}

LabeledLattice build_L12_surrogate() {
  IntegralLattice l = direct_sum(rank_one(2), lattice_E8(2)).relabeled("<2>+E8(-2)");
  std::map<std::string, IntVector> labels;
  labels["h"] = unit(9, 0);
  for (std::size_t i = 1; i <= 8; ++i) labels[nth("e", i)] = unit(9, i);
  labels["E"] = add(add(scaled(labels["h"], 2), labels["e1"]), labels["e3"]);
  return LabeledLattice(l, std::move(labels), {{"E", "E", 0}, {"h", "h", 2}});
}

// ---------------------------------------------------------------------------
// The U ⊕ N model with its translation involution

VgsModel build_UN_vgs() {
  // basis F, F+O, C1..C7, s
  IntMatrix g(10, 10);
  g(0, 1) = g(1, 0) = 1;
  for (std::size_t j = 2; j <= 8; ++j) {
    g(j, j) = -2;
    g(j, 9) = g(9, j) = -1;
  }
  g(9, 9) = -4;
  IntegralLattice l(g, "NS(S)");

  std::map<std::string, IntVector> labels;
  labels["F"] = unit(10, 0);
  labels["O"] = sub(unit(10, 1), unit(10, 0));
  labels["s"] = unit(10, 9);
  IntVector c8 = scaled(unit(10, 9), 2);
  for (std::size_t j = 1; j <= 7; ++j) {
    labels[nth("C1_", j)] = unit(10, j + 1);
    c8 = sub(c8, unit(10, j + 1));
  }
  labels["C1_8"] = c8;
  for (std::size_t j = 1; j <= 8; ++j)
    labels[nth("C0_", j)] = sub(labels["F"], labels[nth("C1_", j)]);
  // t = 2F + O - s
  labels["t"] = sub(add(scaled(labels["F"], 2), labels["O"]), labels["s"]);
  labels["F+O+t"] = add(add(labels["F"], labels["O"]), labels["t"]);
  labels["O+t"] = add(labels["O"], labels["t"]);

  std::vector<LabeledLattice::Relation> rel = {
      {"F", "F", 0}, {"F", "O", 1}, {"O", "O", -2}, {"t", "t", -2}, {"O", "t", 0}, {"F", "t", 1}};
  for (std::size_t j = 1; j <= 8; ++j) {
    const std::string c = nth("C1_", j);
    rel.emplace_back("O", c, 0);
    rel.emplace_back("F", c, 0);
    rel.emplace_back(c, c, -2);
    rel.emplace_back("t", c, 1);
    for (std::size_t k = j + 1; k <= 8; ++k) rel.emplace_back(c, nth("C1_", k), 0);
  }
  LabeledLattice ns(l, labels, rel);

  // F -> F, F+O -> F+t, C_1^j -> C_0^j, s -> 4F - s
  std::vector<IntVector> img = {labels["F"], add(labels["F"], labels["t"])};
  for (std::size_t j = 1; j <= 7; ++j) img.push_back(labels[nth("C0_", j)]);
  img.push_back(sub(scaled(labels["F"], 4), labels["s"]));
  IsometryAction sigma(l, columns(img));
  if (sigma.matrix() * sigma.matrix() != IntMatrix::identity(10))
    throw Error("internal error: sigma_t is not an involution");
  return {ns, sigma};
}

ReportList vgs_report() {
  VgsModel m = build_UN_vgs();
  const LabeledLattice& ns = m.ns;
  ReportList out;
  const std::string p = "un.";
  out.push_back(check(p + "sigma_t(O) = t", m.sigma_t.apply(ns.at("O")) == ns.at("t")));
  out.push_back(check(p + "sigma_t(t) = O", m.sigma_t.apply(ns.at("t")) == ns.at("O")));
  bool swaps = true;
  for (std::size_t j = 1; j <= 8; ++j)
    swaps = swaps && m.sigma_t.apply(ns.at(nth("C1_", j))) == ns.at(nth("C0_", j));
  out.push_back(check(p + "sigma_t(C_1^j) = C_0^j", swaps));
  out.push_back(check(p + "genus equals U+N",
                      genus_equal(genus_of(ns.lattice()), catalog_genus("U+N"))));

  InvariantSplit split = invariant_split(m.sigma_t);
  const IntMatrix want = columns({ns.at("F"), ns.at("F+O+t")});
  const bool same_span = split.fixed.sub().rank() == 2 &&
                         column_span_basis(split.fixed.matrix()) == column_span_basis(want);
  out.push_back(check(p + "fixed lattice spanned by F, F+O+t", same_span,
                      "fixed rank " + std::to_string(split.fixed.sub().rank()), want));
  IntMatrix fg{{0, 0}, {0, 0}};
  fg(0, 1) = ns.product("F", "F+O+t");
  fg(1, 0) = fg(0, 1);
  fg(1, 1) = ns.product("F+O+t", "F+O+t");
  out.push_back(check(p + "Gram on F, F+O+t is U(2)", fg == lattice_U(2).gram(), to_string(fg)));

  auto iso = is_isometric_definite(split.anti.sub(), lattice_E8(2));
  out.push_back(check(p + "anti-invariant lattice is E8(-2)", iso.has_value(),
                      iso ? "explicit isometry found" : "no isometry",
                      iso ? std::optional<IntMatrix>(*iso) : std::nullopt));
  return out;
}

GenusDescriptor vgs_polarized_complement(const Int& e) {
  if (e < 1) throw Error("e must be positive");
  VgsModel m = build_UN_vgs();
  const IntVector v = sub(m.ns.at("F"), scaled(m.ns.at("F+O+t"), e));
  if (m.ns.lattice().norm(v) != -4 * e) throw Error("v² != -4e");
  if (m.sigma_t.apply(v) != v) throw Error("v is not invariant");
  Embedding perp = orthogonal_complement(Embedding(m.ns.lattice(), single_column(v)));
  return genus_of(perp.sub());
}

ReportList vgs_polarized_report(const Int& e) {
  ReportList out;
  const std::string p = "un.e=" + e.get_str() + ".";
  VgsModel m = build_UN_vgs();
  const IntVector v = sub(m.ns.at("F"), scaled(m.ns.at("F+O+t"), e));
  const Int v2 = m.ns.lattice().norm(v);
  out.push_back(check(p + "v² = -4e", v2 == -4 * e, "v² = " + v2.get_str(), row_witness(v)));
  out.push_back(check(p + "v invariant", m.sigma_t.apply(v) == v));
  if (v2 != -4 * e) return out;
  GenusDescriptor g = vgs_polarized_complement(e);
  GenusDescriptor want = family_lattice({FamilyKind::Lp, 2 * e, 2}).genus;
  out.push_back(check(p + "v^⊥ genus = Lp(" + Int(2 * e).get_str() + ",2) genus",
                      genus_equal(g, want)));
  return out;
}

Report vgs_literal_record(const Int& e) {
  VgsModel m = build_UN_vgs();
  const IntVector v = sub(m.ns.at("F"), scaled(m.ns.at("O+t"), e));
  const Int v2 = m.ns.lattice().norm(v);
  IntMatrix g(2, 2);
  g(0, 1) = g(1, 0) = m.ns.product("F", "O+t");
  g(1, 1) = m.ns.product("O+t", "O+t");
  const bool agrees = v2 == -4 * e && g == lattice_U(2).gram();
  return {"un.literal reading v = F - e(O+t)", agrees ? Status::Pass : Status::Discrepancy,
          "e = " + e.get_str() + ": v² = " + v2.get_str() + " (stated " + Int(-4 * e).get_str() +
              "); Gram on F, O+t = " + to_string(g) + "; F+O+t gives v² = -4e and U(2)",
          row_witness(v)};
}

// ---------------------------------------------------------------------------
// Glue constructions in rank 10

namespace {

// Pairs (x_j, y_j) with q = 0, b(x_j, y_j) = 1/2, pairwise orthogonal blocks.
std::vector<std::pair<Element, Element>> u2_basis(const FiniteQuadraticForm& q) {
  std::vector<std::int64_t> alive;
  for (std::int64_t i = 1; i < q.size(); ++i) alive.push_back(i);
  std::vector<std::pair<Element, Element>> out;
  while (!alive.empty()) {
    Element x, y;
    bool found = false;
    for (auto i : alive) {
      x = q.element_at(i);
      if (q.q(x) != 0) continue;
      for (auto j : alive) {
        y = q.element_at(j);
        if (q.q(y) == 0 && q.b(x, y) == Rat(1, 2)) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) throw Error("discriminant form is not a sum of u(2) blocks");
    out.emplace_back(x, y);
    std::vector<std::int64_t> next;
    for (auto i : alive) {
      Element z = q.element_at(i);
      if (q.b(z, x) == 0 && q.b(z, y) == 0) next.push_back(i);
    }
    alive = std::move(next);
  }
  return out;
}

struct GluedModel {
  IntegralLattice base;  // U(2) ⊕ W
  Overlattice z;
};

// (U(2) ⊕ W)' obtained by adding (u1 + u2 + w11 + w21)/2.
GluedModel glue_u2(const IntegralLattice& w) {
  GluedModel out;
  out.base = direct_sum(lattice_U(2), w);
  const std::size_t n = out.base.rank();
  DiscriminantGroup gw = discriminant_group(w);
  auto blocks = u2_basis(discriminant_form(w, gw));
  RatVector lift(n, Rat(0));
  lift[0] = Rat(1, 2);
  lift[1] = Rat(1, 2);
  RatVector a = gw.lift(blocks[0].first), b = gw.lift(blocks[0].second);
  for (std::size_t i = 0; i < w.rank(); ++i) lift[i + 2] = a[i] + b[i];
  DiscriminantGroup g = discriminant_group(out.base);
  Element glue = g.coordinates(out.base.gram(), lift);
  out.z = overlattice_from_glue(out.base, g, {glue});
  return out;
}

// <2d> -> U or U(2) via (1, d), plus the identity on W.
IntMatrix polarized_embedding(const Int& d, std::size_t w_rank) {
  IntMatrix m(2 + w_rank, 1 + w_rank);
  m(0, 0) = 1;
  m(1, 0) = d;
  for (std::size_t i = 0; i < w_rank; ++i) m(i + 2, i + 1) = 1;
  return m;
}

}  // namespace

ReportList glue_constructions(GlueHost which, const std::vector<Int>& params) {
  ReportList out;
  const std::string p = "glue.";
  struct Case {
    std::string name;
    IntegralLattice w;
    std::string host;  // U ⊕ W
    FamilyKind plain, glued;
  };
  const std::vector<Case> cases = {
      {"N", lattice_N(), "U+N", FamilyKind::M, FamilyKind::Mp},
      {"E8(-2)", lattice_E8(2), "U+E8(-2)", FamilyKind::L, FamilyKind::Lp}};
  for (const auto& c : cases) {
    if ((which == GlueHost::N) != (c.name == "N")) continue;
    GluedModel gm = glue_u2(c.w);
    const std::string zname = "(U(2)+" + c.name + ")'";
    out.push_back(check(p + zname + " index 2", gm.z.index == 2, "index " + gm.z.index.get_str()));
    GenusDescriptor zg = genus_of(gm.z.lattice);
    out.push_back(check(p + zname + " genus = " + c.host, genus_equal(zg, catalog_genus(c.host))));
    out.push_back(check(p + zname + " unique in genus", unique_in_genus_by_length(zg),
                        "rank " + std::to_string(zg.rank()) + ", length " +
                            std::to_string(zg.disc.length())));

    IntegralLattice host = catalog_lattice(c.host);
    for (const Int& d : params) {
      // the plain family in U ⊕ W
      FamilyDescriptor fd{c.plain, d, 2};
      Embedding emb(host, polarized_embedding(d, c.w.rank()));
      const std::string fname = to_string(fd);
      out.push_back(check(p + fname + " -> " + c.host + " Gram",
                          emb.sub().gram() == family_lattice(fd).lattice->gram()));
      out.push_back(check(p + fname + " -> " + c.host + " primitive", is_primitive(emb)));

      // the glued family: <4d> ⊕ W in U(2) ⊕ W, saturated inside the overlattice
      if (d % 2 == 0)
        throw Error("the embedding u1 + d·u2 extends to the overlattice only for odd d");
      FamilyDescriptor gd{c.glued, 2 * d, 2};
      const std::string gname = to_string(gd);
      IntMatrix in_base = polarized_embedding(d, c.w.rank());
      Embedding in_z(gm.z.lattice, gm.z.embedding * in_base);
      const Int idx = saturation_index(in_z);
      Embedding sat = saturation(in_z);
      out.push_back(check(p + gname + " -> " + zname + " saturation index 2", idx == 2,
                          "index " + idx.get_str()));
      out.push_back(check(p + gname + " -> " + zname + " genus",
                          genus_equal(genus_of(sat.sub()), family_lattice(gd).genus)));
    }
  }
  if (which == GlueHost::N) return out;
  out.push_back(check(p + "U+E8(-2) genus = U(2)+N",
                      genus_equal(catalog_genus("U+E8(-2)"), catalog_genus("U(2)+N"))));
  GenusDescriptor ue8 = catalog_genus("U+E8(-2)");
  out.push_back(check(p + "U+E8(-2) rank 10 length 8",
                      ue8.rank() == 10 && ue8.disc.length() == 8 && unique_in_genus_by_length(ue8)));
  out.push_back(check(p + "U+D4+D4 genus != U+E8(-2)",
                      !genus_equal(catalog_genus("U+D4+D4"), catalog_genus("U+E8(-2)"))));
  return out;
}

ReportList glue_constructions(const std::vector<Int>& params) {
  ReportList out = glue_constructions(GlueHost::N, params);
  append(out, glue_constructions(GlueHost::E8, params));
  return out;
}

}  // namespace k3lat
