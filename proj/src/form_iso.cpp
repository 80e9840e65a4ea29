#include "k3lat/form_iso.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace k3lat {

namespace {

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  while (a1) {
    std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw Error("not invertible");
  return ((x % m) + m) % m;
}

std::int64_t pair_order(std::int64_t scaled, std::int64_t e) {
  const std::int64_t g = std::gcd(((scaled % e) + e) % e, e);
  return e / g;
}

struct Block {
  std::vector<std::int64_t> gens;  // element indices, one or two
  std::int64_t order = 1;
};

// Orthogonal splitting of a p-primary form into cyclic and rank-two blocks.
// hist[t] is the value histogram of the complement of blocks 0..t.
struct Decomposition {
  std::vector<Block> blocks;
  std::vector<std::map<std::int64_t, std::int64_t>> hist;
};

class ElementTable {
 public:
  explicit ElementTable(const FiniteQuadraticForm& f) : f_(f), e_(f.exponent()) {
    const std::size_t k = f.generator_count();
    elems.resize(f.size());
    order.resize(f.size());
    q.resize(f.size());
    pv_.assign(f.size(), std::vector<std::int64_t>(k));
    for (std::int64_t y = 0; y < f.size(); ++y) {
      elems[y] = f.element_at(y);
      order[y] = f.order_of(elems[y]);
      q[y] = f.q_scaled(elems[y]);
      for (std::size_t l = 0; l < k; ++l) pv_[y][l] = f.b_scaled(elems[y], f.generator(l));
    }
  }

  std::int64_t pair(std::int64_t y, std::int64_t z) const {
    __int128 s = 0;
    const Element& zz = elems[z];
    for (std::size_t l = 0; l < zz.size(); ++l) s += static_cast<__int128>(zz[l]) * pv_[y][l];
    return static_cast<std::int64_t>(((s % e_) + e_) % e_);
  }

  std::int64_t exponent() const { return e_; }

  std::vector<std::int64_t> orthogonal(const std::vector<std::int64_t>& alive,
                                       const std::vector<std::int64_t>& to) const {
    std::vector<std::int64_t> out;
    for (auto z : alive) {
      bool ok = true;
      for (auto x : to) ok = ok && pair(z, x) == 0;
      if (ok) out.push_back(z);
    }
    return out;
  }

  std::map<std::int64_t, std::int64_t> histogram(const std::vector<std::int64_t>& set) const {
    std::map<std::int64_t, std::int64_t> h;
    for (auto z : set) ++h[q[z] * (e_ + 1) + order[z]];
    return h;
  }

  std::vector<Element> elems;
  std::vector<std::int64_t> order, q;

 private:
  const FiniteQuadraticForm& f_;
  std::int64_t e_;
  std::vector<std::vector<std::int64_t>> pv_;
};

Decomposition decompose(const ElementTable& t, std::int64_t size) {
  Decomposition d;
  const std::int64_t e = t.exponent();
  std::vector<std::int64_t> alive(size);
  std::iota(alive.begin(), alive.end(), 0);
  while (alive.size() > 1) {
    std::int64_t n = 1;
    for (auto z : alive) n = std::max(n, t.order[z]);
    Block blk;
    blk.order = n;
    for (auto z : alive)
      if (t.order[z] == n && pair_order(t.pair(z, z), e) == n) {
        blk.gens = {z};
        break;
      }
    if (blk.gens.empty()) {
      std::int64_t x = -1;
      for (auto z : alive)
        if (t.order[z] == n) {
          x = z;
          break;
        }
      for (auto z : alive)
        if (pair_order(t.pair(x, z), e) == n) {
          blk.gens = {x, z};
          break;
        }
      if (blk.gens.size() != 2) throw Error("internal error: degenerate primary part");
    }
    alive = t.orthogonal(alive, blk.gens);
    d.hist.push_back(t.histogram(alive));
    d.blocks.push_back(std::move(blk));
  }
  return d;
}

// Block-by-block matching of two p-primary forms with equal invariants. Each
// block image must lie in the orthogonal complement of the earlier images, and
// the remaining complement must have the same value histogram as on the source.
class PrimarySearch {
 public:
  PrimarySearch(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b,
                std::uint64_t& nodes, std::uint64_t budget)
      : a_(a), b_(b), ta_(a), tb_(b), nodes_(nodes), budget_(budget) {}

  std::optional<std::vector<Element>> run() {
    dec_ = decompose(ta_, a_.size());
    std::vector<std::int64_t> alive(b_.size());
    std::iota(alive.begin(), alive.end(), 0);
    img_.assign(dec_.blocks.size(), {});
    if (!search(0, alive)) return std::nullopt;
    return images_of_generators();
  }

 private:
  bool search(std::size_t pos, const std::vector<std::int64_t>& alive) {
    if (pos == dec_.blocks.size()) return true;
    const Block& blk = dec_.blocks[pos];
    const std::int64_t x = blk.gens[0];
    for (auto y : alive) {
      if (tb_.order[y] != ta_.order[x] || tb_.q[y] != ta_.q[x]) continue;
      if (blk.gens.size() == 1) {
        if (try_block(pos, alive, {y})) return true;
        continue;
      }
      const std::int64_t x2 = blk.gens[1];
      const std::int64_t bx = ta_.pair(x, x2);
      for (auto y2 : alive) {
        if (tb_.order[y2] != ta_.order[x2] || tb_.q[y2] != ta_.q[x2]) continue;
        if (tb_.pair(y, y2) != bx) continue;
        if (try_block(pos, alive, {y, y2})) return true;
      }
    }
    return false;
  }

  bool try_block(std::size_t pos, const std::vector<std::int64_t>& alive,
                 std::vector<std::int64_t> images) {
    if (++nodes_ > budget_) throw BudgetExceeded("form isomorphism search budget exceeded");
    auto rest = tb_.orthogonal(alive, images);
    if (tb_.histogram(rest) != dec_.hist[pos]) return false;
    img_[pos] = std::move(images);
    return search(pos + 1, rest);
  }

  // Coordinates of each source generator in the block basis, pushed forward.
  std::vector<Element> images_of_generators() const {
    const std::int64_t e = a_.exponent();
    std::vector<Element> out;
    for (std::size_t i = 0; i < a_.generator_count(); ++i) {
      const Element g = a_.generator(i);
      const std::int64_t gi = a_.index_of(g);
      Element image = b_.zero();
      for (std::size_t t = 0; t < dec_.blocks.size(); ++t) {
        const Block& blk = dec_.blocks[t];
        const std::int64_t n = blk.order, s = e / n;
        if (blk.gens.size() == 1) {
          const std::int64_t x = blk.gens[0];
          const std::int64_t u = ta_.pair(x, x) / s, r = ta_.pair(gi, x) / s;
          const std::int64_t c = static_cast<std::int64_t>(
              static_cast<__int128>(r) * inverse_mod(u, n) % n);
          image = b_.add(image, b_.scale(tb_.elems[img_[t][0]], c));
        } else {
          const std::int64_t x = blk.gens[0], y = blk.gens[1];
          const __int128 a = ta_.pair(x, x) / s, beta = ta_.pair(x, y) / s,
                         dl = ta_.pair(y, y) / s;
          const __int128 rx = ta_.pair(gi, x) / s, ry = ta_.pair(gi, y) / s;
          const __int128 det = ((a * dl - beta * beta) % n + n) % n;
          const __int128 di = inverse_mod(static_cast<std::int64_t>(det), n);
          // [c1 c2] G = [rx ry]  =>  [c1 c2] = [rx ry] G^{-1}
          const __int128 c1 = ((rx * dl - ry * beta) % n + n) % n * di % n;
          const __int128 c2 = ((ry * a - rx * beta) % n + n) % n * di % n;
          image = b_.add(image, b_.scale(tb_.elems[img_[t][0]], static_cast<std::int64_t>(c1)));
          image = b_.add(image, b_.scale(tb_.elems[img_[t][1]], static_cast<std::int64_t>(c2)));
        }
      }
      out.push_back(image);
    }
    return out;
  }

  const FiniteQuadraticForm& a_;
  const FiniteQuadraticForm& b_;
  ElementTable ta_, tb_;
  std::uint64_t& nodes_;
  std::uint64_t budget_;
  Decomposition dec_;
  std::vector<std::vector<std::int64_t>> img_;
};

}  // namespace

std::vector<PrimaryPart> primary_parts(const FiniteQuadraticForm& q) {
  std::int64_t all = 1;
  for (auto d : q.orders()) all = std::lcm(all, d);
  std::vector<PrimaryPart> out;
  for (auto p : prime_divisors(all)) {
    PrimaryPart part;
    part.p = p;
    std::vector<std::int64_t> orders;
    for (std::size_t i = 0; i < q.generator_count(); ++i) {
      std::int64_t d = q.orders()[i], pa = 1;
      while (d % p == 0) {
        d /= p;
        pa *= p;
      }
      if (pa == 1) continue;
      part.basis.push_back(q.scale(q.generator(i), q.orders()[i] / pa));
      orders.push_back(pa);
    }
    part.form = subform(q, part.basis, orders);
    out.push_back(std::move(part));
  }
  return out;
}

bool is_form_isomorphism(const FiniteQuadraticForm& q1,
                         const FiniteQuadraticForm& q2,
                         const FormIsomorphism& phi) {
  const std::size_t k = q1.generator_count();
  if (phi.images.size() != k || q1.size() != q2.size()) return false;
  if (!q1.is_nondegenerate()) return false;
  for (std::size_t i = 0; i < k; ++i) {
    if (phi.images[i].size() != q2.generator_count()) return false;
    if (q1.orders()[i] % q2.order_of(q2.normalize(phi.images[i])) != 0) return false;
    if (q2.q(phi.images[i]) != q1.q(q1.generator(i))) return false;
    for (std::size_t j = i + 1; j < k; ++j)
      if (q2.b(phi.images[i], phi.images[j]) != q1.b(q1.generator(i), q1.generator(j)))
        return false;
  }
  return true;
}

std::optional<FormIsomorphism> forms_isomorphic(const FiniteQuadraticForm& q1,
                                                const FiniteQuadraticForm& q2,
                                                std::uint64_t budget) {
  if (q1.invariant_factors() != q2.invariant_factors()) return std::nullopt;
  if (value_histogram(q1) != value_histogram(q2)) return std::nullopt;
  if (milgram_signature(q1) != milgram_signature(q2)) return std::nullopt;

  auto parts1 = primary_parts(q1);
  auto parts2 = primary_parts(q2);
  for (std::size_t t = 0; t < parts1.size(); ++t)
    if (value_histogram(parts1[t].form) != value_histogram(parts2[t].form))
      return std::nullopt;

  std::uint64_t nodes = 0;
  std::vector<std::vector<Element>> part_images;
  for (std::size_t t = 0; t < parts1.size(); ++t) {
    PrimarySearch s(parts1[t].form, parts2[t].form, nodes, budget);
    auto img = s.run();
    if (!img) return std::nullopt;
    part_images.push_back(std::move(*img));
  }

  // Reassemble: g_i = Σ_p c_p (d_i/p^a) g_i with Σ_p c_p (d_i/p^a) ≡ 1 mod d_i.
  FormIsomorphism phi;
  for (std::size_t i = 0; i < q1.generator_count(); ++i) {
    Element image = q2.zero();
    const std::int64_t di = q1.orders()[i];
    for (std::size_t t = 0; t < parts1.size(); ++t) {
      const std::int64_t p = parts1[t].p;
      std::int64_t pa = 1, rest = di;
      while (rest % p == 0) {
        rest /= p;
        pa *= p;
      }
      if (pa == 1) continue;
      // position of generator i within the p-part basis
      std::size_t pos = 0;
      for (std::size_t j = 0; j < i; ++j)
        if (q1.orders()[j] % p == 0) ++pos;
      const std::int64_t c = inverse_mod(rest, pa);
      const Element& local = part_images[t][pos];
      Element global = q2.zero();
      for (std::size_t l = 0; l < local.size(); ++l)
        global = q2.add(global, q2.scale(parts2[t].basis[l], local[l]));
      image = q2.add(image, q2.scale(global, c));
    }
    phi.images.push_back(image);
  }
  if (!is_form_isomorphism(q1, q2, phi))
    throw Error("internal error: assembled form isomorphism failed verification");
  return phi;
}

}  // namespace k3lat
