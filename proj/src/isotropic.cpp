#include "k3lat/isotropic.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "k3lat/linalg.hpp"

namespace k3lat {

namespace {

std::vector<std::int64_t> extend_span(const FiniteQuadraticForm& q,
                                      const std::vector<std::int64_t>& base,
                                      const Element& g) {
  std::vector<std::int64_t> out;
  const std::int64_t ord = q.order_of(g);
  out.reserve(base.size() * ord);
  Element kg = q.zero();
  for (std::int64_t k = 0; k < ord; ++k) {
    for (auto idx : base) out.push_back(q.index_of(q.add(q.element_at(idx), kg)));
    kg = q.add(kg, g);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IntMatrix diag_orders(const FiniteQuadraticForm& q) {
  const std::size_t k = q.generator_count();
  IntMatrix d(k, k);
  for (std::size_t i = 0; i < k; ++i) d(i, i) = static_cast<long>(q.orders()[i]);
  return d;
}

// Preimage in Z^k of H^⊥.
IntMatrix perp_preimage(const FiniteQuadraticForm& q, const std::vector<Element>& gens) {
  const std::size_t k = q.generator_count();
  IntMatrix c(gens.size(), k);
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (std::size_t i = 0; i < k; ++i)
      c(j, i) = static_cast<long>(q.b_scaled(q.generator(i), gens[j]));
  // generators of order 1 contribute nothing; add D Z^k explicitly
  IntMatrix p = congruence_solutions(c, Int(static_cast<long>(q.exponent())));
  return column_span_basis(hstack(p, diag_orders(q)));
}

IntMatrix subgroup_preimage(const FiniteQuadraticForm& q, const std::vector<Element>& gens) {
  const std::size_t k = q.generator_count();
  IntMatrix g(k, gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (std::size_t i = 0; i < k; ++i) g(i, j) = static_cast<long>(gens[j][i]);
  return column_span_basis(hstack(g, diag_orders(q)));
}

// Presentation of P/R for full-rank lattices R ⊆ P ⊆ Z^k.
SubgroupPresentation presentation(const FiniteQuadraticForm& q, const IntMatrix& bp,
                                  const IntMatrix& br) {
  IntMatrix c = to_int(inverse(to_rat(bp)) * to_rat(br));
  SmithForm s = smith(c);
  IntMatrix w = bp * to_int(inverse(to_rat(s.u)));
  SubgroupPresentation out;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    if (s.d(i, i) == 1) continue;
    Element g(q.generator_count());
    for (std::size_t r = 0; r < g.size(); ++r)
      g[r] = to_int64(mod(w(r, i), Int(static_cast<long>(q.orders()[r]))));
    out.generators.push_back(g);
    out.orders.push_back(to_int64(s.d(i, i)));
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> span_indices(const FiniteQuadraticForm& q,
                                       const std::vector<Element>& gens) {
  std::vector<std::int64_t> s{q.index_of(q.zero())};
  for (const auto& g : gens) s = extend_span(q, s, q.normalize(g));
  return s;
}

bool is_isotropic(const FiniteQuadraticForm& q, const std::vector<Element>& gens) {
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (q.q_scaled(gens[i]) != 0) return false;
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (q.b_scaled(gens[i], gens[j]) != 0) return false;
  }
  return true;
}

std::vector<Subgroup> isotropic_subgroups(const FiniteQuadraticForm& q,
                                          std::int64_t order, bool cyclic_only) {
  if (order < 1 || q.size() % order != 0) throw Error("order must divide |A|");
  if (q.size() > FiniteQuadraticForm::kMaxEnumerable)
    throw Error("finite form too large to enumerate");
  std::vector<Subgroup> out;
  if (order == 1) {
    out.push_back({{}, {q.index_of(q.zero())}});
    return out;
  }
  std::vector<std::int64_t> iso;
  for (std::int64_t x = 1; x < q.size(); ++x) {
    Element e = q.element_at(x);
    if (order % q.order_of(e) == 0 && q.q_scaled(e) == 0) iso.push_back(x);
  }

  std::map<std::vector<std::int64_t>, Subgroup> found;
  if (cyclic_only) {
    for (auto x : iso) {
      Element e = q.element_at(x);
      if (q.order_of(e) != order) continue;
      Subgroup h{{e}, span_indices(q, {e})};
      found.emplace(h.elements, std::move(h));  // keeps the smallest generator
    }
  } else {
    std::vector<Subgroup> frontier{{{}, {q.index_of(q.zero())}}};
    std::set<std::vector<std::int64_t>> seen;
    while (!frontier.empty()) {
      std::vector<Subgroup> next;
      for (const auto& h : frontier) {
        for (auto x : iso) {
          if (std::binary_search(h.elements.begin(), h.elements.end(), x)) continue;
          Element e = q.element_at(x);
          bool orth = true;
          for (const auto& g : h.generators)
            if (q.b_scaled(e, g) != 0) {
              orth = false;
              break;
            }
          if (!orth) continue;
          auto span = extend_span(q, h.elements, e);
          const auto sz = static_cast<std::int64_t>(span.size());
          if (order % sz != 0 || !seen.insert(span).second) continue;
          Subgroup h2{h.generators, span};
          h2.generators.push_back(e);
          if (sz == order)
            found.emplace(span, std::move(h2));
          else
            next.push_back(std::move(h2));
        }
      }
      frontier = std::move(next);
    }
  }
  for (auto& [k, v] : found) out.push_back(std::move(v));
  return out;
}

SubgroupPresentation orthogonal_subgroup(const FiniteQuadraticForm& q,
                                         const std::vector<Element>& gens) {
  return presentation(q, perp_preimage(q, gens), diag_orders(q));
}

QuotientForm quotient_form(const FiniteQuadraticForm& q, const std::vector<Element>& gens) {
  if (!is_isotropic(q, gens)) throw Error("subgroup is not isotropic");
  if (q.generator_count() == 0) return {q, {}};
  auto pres = presentation(q, perp_preimage(q, gens), subgroup_preimage(q, gens));
  QuotientForm out;
  out.form = subform(q, pres.generators, pres.orders);
  out.representatives = pres.generators;
  return out;
}

}  // namespace k3lat
