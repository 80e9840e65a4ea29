#include "k3lat/short_vectors.hpp"

#include <algorithm>
#include <cmath>

namespace k3lat {

namespace {

void canonical_sign(IntVector& v) {
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    return;
  }
}

// Positive-definite enumeration of x with Q(x) <= bound, Q = -gram.
class FinckePohst {
 public:
  FinckePohst(const IntMatrix& gram, const Rat& bound) : n_(gram.rows()), bound_(bound) {
    RatMatrix a = Rat(-1) * to_rat(gram);
    q_ = RatMatrix(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      Rat d = a(i, i);
      for (std::size_t k = 0; k < i; ++k) d -= q_(k, k) * q_(k, i) * q_(k, i);
      if (d <= 0) throw Error("lattice is not negative definite");
      q_(i, i) = d;
      for (std::size_t j = i + 1; j < n_; ++j) {
        Rat s = a(i, j);
        for (std::size_t k = 0; k < i; ++k) s -= q_(k, k) * q_(k, i) * q_(k, j);
        q_(i, j) = s / d;
      }
    }
  }

  template <class Visit>
  void run(Visit&& visit) {
    x_.assign(n_, Int(0));
    if (n_ == 0) return;
    recurse(n_ - 1, bound_, visit);
  }

 private:
  template <class Visit>
  void recurse(std::size_t i, const Rat& remaining, Visit& visit) {
    Rat c = 0;
    for (std::size_t j = i + 1; j < n_; ++j) c -= q_(i, j) * Rat(x_[j]);
    const Rat r2 = remaining / q_(i, i);
    const double s = std::sqrt(r2.get_d());
    Int lo(std::floor(c.get_d() - s) - 1);
    Int hi(std::ceil(c.get_d() + s) + 1);
    auto outside = [&](const Int& t) {
      Rat d = Rat(t) - c;
      return d * d > r2;
    };
    while (lo <= hi && outside(lo)) ++lo;
    while (hi >= lo && outside(hi)) --hi;
    for (Int t = lo; t <= hi; ++t) {
      x_[i] = t;
      Rat d = Rat(t) - c;
      Rat rest = remaining - q_(i, i) * d * d;
      if (i == 0)
        visit(x_, bound_ - rest);
      else
        recurse(i - 1, rest, visit);
    }
    x_[i] = 0;
  }

  std::size_t n_;
  Rat bound_;
  RatMatrix q_;
  IntVector x_;
};

}  // namespace

std::size_t ShortVectors::count() const {
  std::size_t c = 0;
  for (const auto& [n, v] : by_norm) c += 2 * v.size();
  return c;
}

std::size_t ShortVectors::count(const Int& norm) const {
  auto it = by_norm.find(norm);
  return it == by_norm.end() ? 0 : 2 * it->second.size();
}

IntMatrix pair_reduce(const IntegralLattice& l) {
  const std::size_t n = l.rank();
  IntMatrix t = IntMatrix::identity(n);
  IntMatrix g = l.gram();
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const Int& gjj = g(j, j);
        if (gjj == 0) continue;
        // k = round(g_ij / g_jj)
        Int num = 2 * g(i, j) + gjj;
        Int k = floor_div(num, 2 * gjj);
        if (gjj < 0) k = floor_div(-num, -2 * gjj);
        if (k == 0) continue;
        Int newnorm = g(i, i) - 2 * k * g(i, j) + k * k * gjj;
        if (abs(newnorm) >= abs(g(i, i))) continue;
        t.add_col(i, j, Int(-k));
        g.add_col(i, j, Int(-k));
        g.add_row(i, j, Int(-k));
        changed = true;
      }
  }
  return t;
}

ShortVectors short_vectors(const IntegralLattice& l, const Int& norm_bound) {
  if (norm_bound >= 0) throw Error("norm bound must be negative");
  IntMatrix t = pair_reduce(l);
  IntMatrix g = t.transpose() * l.gram() * t;
  ShortVectors out;
  FinckePohst fp(g, Rat(-norm_bound));
  fp.run([&](const IntVector& x, const Rat& q) {
    if (q == 0) return;
    IntVector v = t * x;
    IntVector w = v;
    canonical_sign(w);
    if (w != v) return;
    out.by_norm[-q.get_num()].push_back(std::move(v));
  });
  for (auto& [n, vs] : out.by_norm) std::sort(vs.begin(), vs.end());
  return out;
}

namespace {

class IsometrySearch {
 public:
  IsometrySearch(const IntMatrix& g1r, const IntMatrix& g2,
                 std::vector<std::vector<std::vector<std::int64_t>>> cands,
                 std::uint64_t budget)
      : n_(g1r.rows()), budget_(budget) {
    g1_.assign(n_, std::vector<std::int64_t>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) g1_[i][j] = to_int64(g1r(i, j));
    g2_.assign(n_, std::vector<std::int64_t>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) g2_[i][j] = to_int64(g2(i, j));
    // pool of distinct target vectors, with G2 y precomputed
    for (std::size_t i = 0; i < n_; ++i) {
      std::vector<int> ids;
      for (auto& y : cands[i]) ids.push_back(intern(y));
      lists_.push_back(ids);
    }
  }

  std::optional<std::vector<std::vector<std::int64_t>>> run() {
    img_.assign(n_, -1);
    if (!search(lists_, 0)) return std::nullopt;
    std::vector<std::vector<std::int64_t>> out;
    for (auto id : img_) out.push_back(pool_[id]);
    return out;
  }

 private:
  int intern(const std::vector<std::int64_t>& y) {
    auto it = ids_.find(y);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(pool_.size());
    pool_.push_back(y);
    std::vector<std::int64_t> w(n_, 0);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b) w[a] += g2_[a][b] * y[b];
    gy_.push_back(w);
    ids_.emplace(y, id);
    return id;
  }

  std::int64_t pair(int a, int b) const {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < n_; ++k) s += pool_[a][k] * gy_[b][k];
    return s;
  }

  bool search(const std::vector<std::vector<int>>& lists, std::size_t depth) {
    if (depth == n_) return true;
    // most constrained unassigned basis vector
    std::size_t best = n_;
    for (std::size_t i = 0; i < n_; ++i)
      if (img_[i] < 0 && (best == n_ || lists[i].size() < lists[best].size())) best = i;
    for (int y : lists[best]) {
      if (++nodes_ > budget_) throw BudgetExceeded("definite isometry search budget exceeded");
      bool used = false;
      for (std::size_t i = 0; i < n_; ++i) used = used || img_[i] == y;
      if (used) continue;
      std::vector<std::vector<int>> next(n_);
      bool dead = false;
      for (std::size_t j = 0; j < n_ && !dead; ++j) {
        if (img_[j] >= 0 || j == best) continue;
        for (int z : lists[j])
          if (z != y && pair(y, z) == g1_[best][j]) next[j].push_back(z);
        dead = next[j].empty();
      }
      if (dead) continue;
      img_[best] = y;
      if (search(next, depth + 1)) return true;
      img_[best] = -1;
    }
    return false;
  }

  std::size_t n_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::vector<std::int64_t>> g1_, g2_;
  std::vector<std::vector<std::int64_t>> pool_, gy_;
  std::map<std::vector<std::int64_t>, int> ids_;
  std::vector<std::vector<int>> lists_;
  std::vector<int> img_;
};

}  // namespace

std::optional<IntMatrix> is_isometric_definite(const IntegralLattice& l1,
                                               const IntegralLattice& l2,
                                               std::uint64_t budget) {
  if (!is_negative_definite(l1) || !is_negative_definite(l2))
    throw Error("definite isometry search needs negative-definite lattices");
  if (l1.rank() != l2.rank() || l1.determinant() != l2.determinant()) return std::nullopt;
  const std::size_t n = l1.rank();
  if (n == 0) return IntMatrix(0, 0);
  IntMatrix r1 = pair_reduce(l1);
  IntMatrix g1r = r1.transpose() * l1.gram() * r1;
  Int bound = 0;
  for (std::size_t i = 0; i < n; ++i) bound = std::min(bound, Int(g1r(i, i)));
  ShortVectors s1 = short_vectors(l1, bound);
  ShortVectors s2 = short_vectors(l2, bound);
  for (const auto& [norm, vs] : s1.by_norm)
    if (s2.count(norm) != 2 * vs.size()) return std::nullopt;
  if (s1.count() != s2.count()) return std::nullopt;

  std::vector<std::vector<std::vector<std::int64_t>>> cands(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& reps = s2.by_norm[g1r(i, i)];
    std::vector<std::vector<std::int64_t>> both;
    for (const auto& v : reps) {
      std::vector<std::int64_t> p, m;
      for (const auto& x : v) {
        p.push_back(to_int64(x));
        m.push_back(-to_int64(x));
      }
      both.push_back(p);
      both.push_back(m);
    }
    std::sort(both.begin(), both.end());
    cands[i] = std::move(both);
  }
  IsometrySearch search(g1r, l2.gram(), std::move(cands), budget);
  auto imgs = search.run();
  if (!imgs) return std::nullopt;
  IntMatrix y(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) y(i, j) = static_cast<long>((*imgs)[j][i]);
  IntMatrix m = to_int(to_rat(y) * inverse(to_rat(r1)));
  if (m.transpose() * l2.gram() * m != l1.gram())
    throw Error("internal error: isometry failed verification");
  return m;
}

}  // namespace k3lat
