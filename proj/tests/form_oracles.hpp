#pragma once

// Brute-force reference computations on small finite quadratic forms.

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "k3lat/finite_form.hpp"

namespace oracle {

using k3lat::Element;
using k3lat::FiniteQuadraticForm;
using k3lat::Rat;

inline std::vector<Element> all_elements(const FiniteQuadraticForm& q) {
  std::vector<Element> out;
  Element x = q.zero();
  for (;;) {
    out.push_back(x);
    std::size_t i = 0;
    while (i < x.size() && ++x[i] == q.orders()[i]) x[i++] = 0;
    if (i == x.size()) break;
  }
  return out;
}

// The subgroup generated by a subgroup h and one more element x.
inline std::set<Element> adjoin(const FiniteQuadraticForm& q, const std::set<Element>& h,
                                const Element& x) {
  std::set<Element> out;
  Element kx = q.zero();
  do {
    for (const auto& y : h) out.insert(q.add(y, kx));
    kx = q.add(kx, x);
  } while (kx != q.zero());
  return out;
}

// Every subgroup of the group, found by adjoining elements one at a time.
inline std::set<std::set<Element>> all_subgroups(const FiniteQuadraticForm& q) {
  auto elems = all_elements(q);
  std::set<std::set<Element>> seen{{q.zero()}};
  std::vector<std::set<Element>> todo{{q.zero()}};
  while (!todo.empty()) {
    auto h = todo.back();
    todo.pop_back();
    for (const auto& x : elems) {
      if (h.count(x)) continue;
      auto s = adjoin(q, h, x);
      if (seen.insert(s).second) todo.push_back(s);
    }
  }
  return seen;
}

inline std::set<std::set<Element>> isotropic_subgroups(const FiniteQuadraticForm& q,
                                                       std::size_t order) {
  std::set<std::set<Element>> out;
  for (const auto& h : all_subgroups(q)) {
    if (h.size() != order) continue;
    bool iso = std::all_of(h.begin(), h.end(), [&](const Element& x) { return q.q(x) == 0; });
    if (iso) out.insert(h);
  }
  return out;
}

inline std::vector<Element> perp(const FiniteQuadraticForm& q, const std::set<Element>& h) {
  std::vector<Element> out;
  for (const auto& x : all_elements(q)) {
    bool ok = std::all_of(h.begin(), h.end(), [&](const Element& y) { return q.b(x, y) == 0; });
    if (ok) out.push_back(x);
  }
  return out;
}

// Multiset of (q-value, order) over the cosets of H inside H^⊥.
inline std::map<std::pair<Rat, std::int64_t>, int> quotient_profile(
    const FiniteQuadraticForm& q, const std::set<Element>& h) {
  auto p = perp(q, h);
  std::set<Element> covered;
  std::map<std::pair<Rat, std::int64_t>, int> out;
  for (const auto& x : p) {
    if (covered.count(x)) continue;
    for (const auto& y : h) covered.insert(q.add(x, y));
    // order of x modulo H
    std::int64_t k = 1;
    Element m = x;
    while (!h.count(m)) {
      m = q.add(m, x);
      ++k;
    }
    out[{q.q(x), k}]++;
  }
  return out;
}

inline std::map<std::pair<Rat, std::int64_t>, int> profile(const FiniteQuadraticForm& q) {
  std::map<std::pair<Rat, std::int64_t>, int> out;
  for (const auto& x : all_elements(q)) out[{q.q(x), q.order_of(x)}]++;
  return out;
}

}  // namespace oracle
