#include "k3lat/lattice.hpp"

namespace k3lat {

IntegralLattice::IntegralLattice(IntMatrix gram, std::string label,
                                 bool allow_degenerate)
    : gram_(std::move(gram)), label_(std::move(label)) {
  if (!gram_.is_symmetric()) throw Error("Gram matrix is not symmetric");
  for (std::size_t i = 0; i < gram_.rows(); ++i)
    if (!mpz_even_p(gram_(i, i).get_mpz_t()))
      throw Error("lattice is not even");
  det_ = k3lat::determinant(gram_);
  if (det_ == 0 && !allow_degenerate) throw Error("degenerate Gram matrix");
}

Int IntegralLattice::product(const IntVector& a, const IntVector& b) const {
  return bilinear(gram_, a, b);
}

Rat IntegralLattice::product(const RatVector& a, const RatVector& b) const {
  return bilinear(to_rat(gram_), a, b);
}

IntegralLattice IntegralLattice::relabeled(std::string label) const {
  IntegralLattice l = *this;
  l.label_ = std::move(label);
  return l;
}

GramInvariants gram_invariants(const IntegralLattice& l) {
  auto sig = signature(l.gram());
  return {l.rank(), l.determinant(), sig.positive, sig.negative};
}

IntegralLattice direct_sum(const IntegralLattice& a, const IntegralLattice& b) {
  std::string label = a.label().empty() || b.label().empty()
                          ? std::string()
                          : a.label() + "+" + b.label();
  return IntegralLattice(block_diagonal(a.gram(), b.gram()), label,
                         a.degenerate() || b.degenerate());
}

IntegralLattice direct_sum(const std::vector<IntegralLattice>& parts) {
  if (parts.empty()) return IntegralLattice(IntMatrix(0, 0));
  IntegralLattice out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out = direct_sum(out, parts[i]);
  return out;
}

IntegralLattice rescale(const IntegralLattice& l, const Int& n) {
  if (n == 0) throw Error("rescale by zero");
  std::string label = l.label().empty() ? std::string()
                                        : l.label() + "(" + n.get_str() + ")";
  return IntegralLattice(n * l.gram(), label, l.degenerate());
}

IntegralLattice rank_one(const Int& n) {
  IntMatrix g(1, 1);
  g(0, 0) = n;
  return IntegralLattice(g, "<" + n.get_str() + ">");
}

bool is_negative_definite(const IntegralLattice& l) {
  auto sig = signature(l.gram());
  return sig.negative == l.rank();
}

Embedding::Embedding(IntegralLattice host, IntMatrix matrix, std::string label)
    : host_(std::move(host)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != host_.rank()) throw Error("embedding shape mismatch");
  if (rank(matrix_) != matrix_.cols())
    throw Error("embedding columns are linearly dependent");
  IntMatrix g = matrix_.transpose() * host_.gram() * matrix_;
  sub_ = IntegralLattice(g, std::move(label), true);
}

IsometryAction::IsometryAction(IntegralLattice lattice, IntMatrix matrix)
    : lattice_(std::move(lattice)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != lattice_.rank() || !matrix_.is_square())
    throw Error("isometry shape mismatch");
  if (matrix_.transpose() * lattice_.gram() * matrix_ != lattice_.gram())
    throw Error("matrix does not preserve the Gram matrix");
  Int det = determinant(matrix_);
  if (det != 1 && det != -1) throw Error("isometry is not unimodular");
}

Element DiscriminantGroup::coordinates(const IntMatrix& gram,
                                       const RatVector& dual) const {
  RatVector y = to_rat(gram) * dual;
  IntVector yi(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i].get_den() != 1) throw Error("vector is not in the dual lattice");
    yi[i] = y[i].get_num();
  }
  IntVector c = coord_rows * yi;
  Element out(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i)
    out[i] = to_int64(mod(c[i], factors[i]));
  return out;
}

RatVector DiscriminantGroup::lift(const Element& coords) const {
  RatVector v(lifts.rows(), Rat(0));
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (coords[j] == 0) continue;
    Rat c(static_cast<long>(coords[j]));
    for (std::size_t i = 0; i < lifts.rows(); ++i) v[i] += c * lifts(i, j);
  }
  return v;
}

DiscriminantGroup discriminant_group(const IntegralLattice& l) {
  if (l.degenerate()) throw Error("discriminant group of a degenerate lattice");
  const std::size_t n = l.rank();
  SmithForm s = smith(l.gram());
  DiscriminantGroup g;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i)
    if (s.d(i, i) > 1) idx.push_back(i);
  g.lifts = RatMatrix(n, idx.size());
  g.coord_rows = IntMatrix(idx.size(), n);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::size_t i = idx[k];
    g.factors.push_back(s.d(i, i));
    for (std::size_t r = 0; r < n; ++r) {
      g.lifts(r, k) = Rat(s.v(r, i), s.d(i, i));
      g.lifts(r, k).canonicalize();
      g.coord_rows(k, r) = s.u(i, r);
    }
  }
  return g;
}

FiniteQuadraticForm discriminant_form(const IntegralLattice& l,
                                      const DiscriminantGroup& group) {
  const std::size_t k = group.factors.size();
  RatMatrix lifts = group.lifts;
  RatMatrix b = lifts.transpose() * to_rat(l.gram()) * lifts;
  std::vector<std::int64_t> orders;
  for (const auto& f : group.factors) orders.push_back(to_int64(f));
  RatMatrix q(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) q(i, j) = b(i, j);
  return FiniteQuadraticForm(orders, q);
}

FiniteQuadraticForm discriminant_form(const IntegralLattice& l) {
  return discriminant_form(l, discriminant_group(l));
}

Embedding orthogonal_complement(const Embedding& e) {
  IntMatrix a = e.matrix().transpose() * e.host().gram();
  IntMatrix k = integer_kernel(a);
  return Embedding(e.host(), k);
}

Embedding saturation(const Embedding& e) {
  return Embedding(e.host(), saturate_columns(e.matrix()));
}

Int saturation_index(const Embedding& e) {
  SmithForm s = smith(e.matrix());
  Int idx = 1;
  for (const auto& d : s.diagonal()) idx *= d;
  return idx;
}

bool is_primitive(const Embedding& e) { return saturation_index(e) == 1; }

InvariantSplit invariant_split(const IsometryAction& g) {
  const std::size_t n = g.lattice().rank();
  const IntMatrix id = IntMatrix::identity(n);
  if (g.matrix() * g.matrix() != id) throw Error("isometry is not an involution");
  Embedding fixed(g.lattice(), integer_kernel(g.matrix() - id), "fixed");
  Embedding anti(g.lattice(), integer_kernel(g.matrix() + id), "anti");
  return {fixed, anti};
}

}  // namespace k3lat
