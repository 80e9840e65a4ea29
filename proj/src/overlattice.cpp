#include "k3lat/overlattice.hpp"

#include "k3lat/form_iso.hpp"

namespace k3lat {

GenusDescriptor make_genus(std::size_t sig_plus, std::size_t sig_minus,
                           FiniteQuadraticForm disc) {
  GenusDescriptor g{sig_plus, sig_minus, std::move(disc)};
  if (g.rank() < g.disc.length()) throw Error("genus rank is smaller than its length");
  const int diff = static_cast<int>(sig_plus) - static_cast<int>(sig_minus);
  if (milgram_signature(g.disc) != ((diff % 8) + 8) % 8)
    throw Error("signature violates the Milgram relation");
  return g;
}

GenusDescriptor genus_of(const IntegralLattice& l) {
  auto inv = gram_invariants(l);
  return make_genus(inv.sig_plus, inv.sig_minus, discriminant_form(l));
}

bool genus_equal(const GenusDescriptor& a, const GenusDescriptor& b, std::uint64_t budget) {
  if (a.sig_plus != b.sig_plus || a.sig_minus != b.sig_minus) return false;
  return forms_isomorphic(a.disc, b.disc, budget).has_value();
}

bool unique_in_genus_by_length(const GenusDescriptor& g) {
  return g.sig_plus >= 1 && g.sig_minus >= 1 && g.rank() >= 2 + g.disc.length();
}

Overlattice overlattice_from_glue(const IntegralLattice& l, const DiscriminantGroup& group,
                                  const std::vector<Element>& glue) {
  const std::size_t n = l.rank();
  std::vector<RatVector> lifts;
  Int den = 1;
  for (const auto& g : glue) {
    lifts.push_back(group.lift(g));
    for (const auto& x : lifts.back()) den = lcm(den, x.get_den());
  }
  IntMatrix gens(n, n + lifts.size());
  for (std::size_t i = 0; i < n; ++i) gens(i, i) = den;
  for (std::size_t j = 0; j < lifts.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) gens(i, n + j) = Rat(lifts[j][i] * Rat(den)).get_num();
  IntMatrix b = column_span_basis(gens);
  Overlattice out;
  out.basis = RatMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.basis(i, j) = Rat(b(i, j), den);
      out.basis(i, j).canonicalize();
    }
  RatMatrix gram = out.basis.transpose() * to_rat(l.gram()) * out.basis;
  if (!is_integral(gram)) throw Error("glue is not isotropic: overlattice is not integral");
  out.lattice = IntegralLattice(to_int(gram));
  out.embedding = to_int(inverse(out.basis));
  out.glue = glue;
  out.index = abs(determinant(out.embedding));
  return out;
}

std::vector<Overlattice> overlattices(const IntegralLattice& l, std::int64_t index,
                                      bool cyclic_only) {
  DiscriminantGroup group = discriminant_group(l);
  FiniteQuadraticForm q = discriminant_form(l, group);
  std::vector<Overlattice> out;
  if (q.size() % (index * index) != 0) return out;
  for (const auto& h : isotropic_subgroups(q, index, cyclic_only)) {
    Overlattice z = overlattice_from_glue(l, group, h.generators);
    out.push_back(std::move(z));
  }
  return out;
}

LemmaResult lemma_overlattice(const Int& d, std::int64_t m, const IntegralLattice& w,
                              const RatVector& block_e1, const RatVector& block_e2) {
  if (m < 1 || !mpz_divisible_p(d.get_mpz_t(), Int(2 * m).get_mpz_t()))
    throw Error("lemma needs d ≡ 0 mod 2m");
  const Rat mr(static_cast<long>(m));
  const RatMatrix gw = to_rat(w.gram());
  auto pairing_ok = [&](const RatVector& v) {
    RatVector gv = gw * v;
    for (const auto& x : gv)
      if (x.get_den() != 1) return false;
    return true;
  };
  if (!pairing_ok(block_e1) || !pairing_ok(block_e2))
    throw Error("u(m) block vectors are not in the dual lattice");
  const Rat q1 = bilinear(gw, block_e1, block_e1), q2 = bilinear(gw, block_e2, block_e2);
  const Rat b12 = bilinear(gw, block_e1, block_e2);
  if (mod(q1, 2) != 0 || mod(q2, 2) != 0 || mod(b12 + 1 / mr, 1) != 0)
    throw Error("u(m) block not found at the supplied coordinates");
  for (const auto& v : {block_e1, block_e2}) {
    // order m in A_W
    RatVector mv = v;
    for (auto& x : mv) x *= mr;
    for (const auto& x : mv)
      if (x.get_den() != 1) throw Error("u(m) block generator does not have order m");
  }

  // 2d = 4km; glue (4k) h + ε with ε = e1 + 2k e2 and h = generator of <2d>*.
  const Int k = d / (2 * m);
  IntegralLattice v = direct_sum(rank_one(2 * d), w);
  const std::size_t n = v.rank();
  RatVector glue(n, Rat(0));
  glue[0] = Rat(4 * k, 2 * d);
  glue[0].canonicalize();
  for (std::size_t i = 0; i < w.rank(); ++i)
    glue[i + 1] = block_e1[i] + Rat(2 * k) * block_e2[i];

  DiscriminantGroup group = discriminant_group(v);
  Element coords = group.coordinates(v.gram(), glue);
  Overlattice z = overlattice_from_glue(v, group, {coords});
  if (z.index != m) throw Error("lemma glue does not have order m");
  IntMatrix wcols = z.embedding.submatrix(0, 1, n, w.rank());
  Embedding we(z.lattice, wcols, w.label());
  if (!is_primitive(we)) throw Error("W is not primitive in the lemma overlattice");
  return {z, we};
}

GenusDescriptor genus_lemma_quotient(const GenusDescriptor& gv, const LemmaBlock& block,
                                     const Int& d, std::int64_t m) {
  if (m < 1 || !mpz_divisible_p(d.get_mpz_t(), Int(2 * m).get_mpz_t()))
    throw Error("lemma needs d ≡ 0 mod 2m");
  if (m == 1) return gv;
  const FiniteQuadraticForm& q = gv.disc;
  const Rat mr(static_cast<long>(m));
  if (q.order_of(block.h) != to_int64(2 * d) || q.q(block.h) != mod(Rat(1) / Rat(2 * d), 2))
    throw Error("(1/2d) generator not found at the supplied coordinates");
  if (q.order_of(block.e1) != m || q.order_of(block.e2) != m || q.q(block.e1) != 0 ||
      q.q(block.e2) != 0 || q.b(block.e1, block.e2) != mod(Rat(-1) / mr, 1))
    throw Error("u(m) block not found at the supplied coordinates");
  const std::int64_t k = to_int64(d / (2 * m));
  Element glue = q.add(q.scale(block.h, 4 * k), q.add(block.e1, q.scale(block.e2, 2 * k)));
  auto quo = quotient_form(q, {glue});
  return make_genus(gv.sig_plus, gv.sig_minus, quo.form);
}

}  // namespace k3lat
