#pragma once

#include <cstdint>
#include <vector>

#include "k3lat/finite_form.hpp"

namespace k3lat {

struct Subgroup {
  std::vector<Element> generators;
  std::vector<std::int64_t> elements;  // sorted element indices
  std::int64_t order() const { return static_cast<std::int64_t>(elements.size()); }
};

// All elements of the subgroup generated by gens, as sorted indices.
std::vector<std::int64_t> span_indices(const FiniteQuadraticForm& q,
                                       const std::vector<Element>& gens);

bool is_isotropic(const FiniteQuadraticForm& q, const std::vector<Element>& gens);

// All isotropic subgroups of the given order, in canonical order.
std::vector<Subgroup> isotropic_subgroups(const FiniteQuadraticForm& q,
                                          std::int64_t order,
                                          bool cyclic_only = false);

struct SubgroupPresentation {
  std::vector<Element> generators;  // independent, in parent coordinates
  std::vector<std::int64_t> orders;
};

// H^⊥ for H generated by gens.
SubgroupPresentation orthogonal_subgroup(const FiniteQuadraticForm& q,
                                         const std::vector<Element>& gens);

struct QuotientForm {
  FiniteQuadraticForm form;
  std::vector<Element> representatives;  // lifts of the generators into q
};

// The induced form on H^⊥/H; H must be isotropic.
QuotientForm quotient_form(const FiniteQuadraticForm& q,
                           const std::vector<Element>& gens);

}  // namespace k3lat
