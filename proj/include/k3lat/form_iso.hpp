#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "k3lat/finite_form.hpp"

namespace k3lat {

// images[i] is the image of generator i of the source, in target coordinates.
struct FormIsomorphism {
  std::vector<Element> images;
};

struct PrimaryPart {
  std::int64_t p = 0;
  std::vector<Element> basis;  // in coordinates of the parent form
  FiniteQuadraticForm form;
};

std::vector<PrimaryPart> primary_parts(const FiniteQuadraticForm& q);

// Throws BudgetExceeded when the node budget runs out.
std::optional<FormIsomorphism> forms_isomorphic(const FiniteQuadraticForm& q1,
                                                const FiniteQuadraticForm& q2,
                                                std::uint64_t budget = kDefaultBudget);

bool is_form_isomorphism(const FiniteQuadraticForm& q1,
                         const FiniteQuadraticForm& q2,
                         const FormIsomorphism& phi);

}  // namespace k3lat
