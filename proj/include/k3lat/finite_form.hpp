#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "k3lat/matrix.hpp"

namespace k3lat {

using Element = std::vector<std::int64_t>;

// Finite abelian group ⊕ Z/d_i with a Q/2Z-valued quadratic form, given by
// q_gram: diagonal = q(g_i) in [0,2), off-diagonal = b(g_i,g_j) in [0,1).
class FiniteQuadraticForm {
 public:
  FiniteQuadraticForm() = default;
  FiniteQuadraticForm(std::vector<std::int64_t> orders, const RatMatrix& q_gram,
                      bool allow_degenerate = false);

  const std::vector<std::int64_t>& orders() const { return orders_; }
  const RatMatrix& q_gram() const { return q_gram_; }
  std::size_t generator_count() const { return orders_.size(); }
  std::int64_t size() const { return size_; }
  std::int64_t exponent() const { return exponent_; }

  // Invariant factors d_1 | d_2 | ... of the group, all > 1.
  std::vector<std::int64_t> invariant_factors() const;
  std::size_t length() const { return invariant_factors().size(); }

  Element zero() const { return Element(orders_.size(), 0); }
  Element generator(std::size_t i) const;
  Element normalize(Element x) const;
  Element add(const Element& x, const Element& y) const;
  Element scale(const Element& x, std::int64_t k) const;
  std::int64_t order_of(const Element& x) const;
  bool is_zero(const Element& x) const;

  // Mixed-radix indexing of all elements; requires size() <= kMaxEnumerable.
  std::int64_t index_of(const Element& x) const;
  Element element_at(std::int64_t index) const;

  // Scaled integer values: q(x) = q_scaled(x) / exponent (mod 2),
  // b(x,y) = b_scaled(x,y) / exponent (mod 1).
  std::int64_t q_scaled(const Element& x) const;
  std::int64_t b_scaled(const Element& x, const Element& y) const;
  Rat q(const Element& x) const;
  Rat b(const Element& x, const Element& y) const;

  bool is_nondegenerate() const;

  static constexpr std::int64_t kMaxEnumerable = std::int64_t(1) << 24;

 private:
  void require_enumerable() const;

  std::vector<std::int64_t> orders_;
  RatMatrix q_gram_;
  std::int64_t size_ = 1;
  std::int64_t exponent_ = 1;
  std::vector<std::int64_t> qd_;                // q(g_i)*e mod 2e
  std::vector<std::vector<std::int64_t>> bs_;  // b(g_i,g_j)*e mod e
};

FiniteQuadraticForm u_block(std::int64_t n);
FiniteQuadraticForm cyclic_block(std::int64_t order, const Rat& q_value);
FiniteQuadraticForm sum_forms(const std::vector<FiniteQuadraticForm>& forms);
FiniteQuadraticForm negate(const FiniteQuadraticForm& q);
inline std::size_t length(const FiniteQuadraticForm& q) { return q.length(); }

// The form restricted to the subgroup with the given generators, taken as
// independent with the given orders.
FiniteQuadraticForm subform(const FiniteQuadraticForm& q,
                            const std::vector<Element>& basis,
                            const std::vector<std::int64_t>& orders,
                            bool allow_degenerate = false);

// σ mod 8 with Σ exp(πi q(x)) = sqrt|A| exp(2πiσ/8).
int milgram_signature(const FiniteQuadraticForm& q);

// Multiset of q-values, keyed by q(x)*exponent in [0, 2e).
std::map<std::int64_t, std::int64_t> value_histogram(const FiniteQuadraticForm& q);

std::vector<std::int64_t> prime_divisors(std::int64_t n);

}  // namespace k3lat
