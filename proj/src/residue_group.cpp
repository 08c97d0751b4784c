#include "sparsebound/residue_group.hpp"

#include <deque>

namespace sparsebound {

namespace {

IntegerMatrix adjugate(const IntegerMatrix& w) {
  int n = w.rows();
  IntegerMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  IntegerMatrix minor(n - 1, n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int r = 0, mr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, mc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(mr, mc) = w(r, c);
          ++mc;
        }
        ++mr;
      }
      Int cof = det(minor);
      adj(j, i) = ((i + j) % 2 == 0) ? cof : Int(-cof);
    }
  }
  return adj;
}

}  // namespace

ResidueGroup::ResidueGroup(IntegerMatrix w, Caps caps)
    : w_(std::move(w)), adj_(1, 1), snf_u_(1, 1), caps_(std::move(caps)) {
  if (w_.rows() != w_.cols())
    throw std::invalid_argument("residue group: matrix must be square");
  det_ = det(w_);
  if (det_ == 0)
    throw std::invalid_argument("residue group: matrix must be invertible");
  adj_ = adjugate(w_);
  order_ = abs(det_);
  SnfResult s = snf(w_);
  snf_diag_ = s.diag;
  snf_u_ = s.u;
}

Vec ResidueGroup::canonical_lift(const Vec& b) const {
  if (int(b.size()) != dim())
    throw std::invalid_argument("residue: dimension mismatch");
  // b = g + w*floor(w^{-1} b); the fractional parts select the unique
  // parallelepiped representative.
  Vec num = adj_ * b;
  Int den = det_;
  if (den < 0) {
    den = -den;
    for (Int& x : num) x = -x;
  }
  Vec fl(num.size());
  for (std::size_t i = 0; i < num.size(); ++i)
    mpz_fdiv_q(fl[i].get_mpz_t(), num[i].get_mpz_t(), den.get_mpz_t());
  return vec_sub(b, w_ * fl);
}

std::vector<Int> ResidueGroup::snf_coords(const Vec& v) const {
  Vec c = snf_u_ * v;
  std::vector<Int> out(c.size());
  for (std::size_t j = 0; j < c.size(); ++j)
    mpz_fdiv_r(out[j].get_mpz_t(), c[j].get_mpz_t(), snf_diag_[j].get_mpz_t());
  return out;
}

GroupElement ResidueGroup::residue(const Vec& b) const {
  Vec lift = canonical_lift(b);
  return GroupElement{lift, snf_coords(lift)};
}

void ResidueGroup::check_member(const GroupElement& g) const {
  if (int(g.vec.size()) != dim())
    throw std::invalid_argument("group element: dimension mismatch");
  if (canonical_lift(g.vec) != g.vec)
    throw std::invalid_argument(
        "group mismatch: element is not a parallelepiped point of this group");
}

GroupElement ResidueGroup::add(const GroupElement& g, const GroupElement& h) const {
  check_member(g);
  check_member(h);
  return residue(vec_add(g.vec, h.vec));
}

GroupElement ResidueGroup::identity_element() const {
  Vec zero(dim(), Int(0));
  return GroupElement{zero, std::vector<Int>(dim(), Int(0))};
}

std::vector<GroupElement> ResidueGroup::enumerate() const {
  if (order_ > caps_.group)
    throw cap_exceeded("group enumeration: order " + order_.get_str() +
                       " exceeds cap " + std::to_string(caps_.group));
  // The residues of the unit vectors generate the whole group; close under
  // addition starting from the identity.
  std::map<Vec, bool, LexLess> seen;
  std::deque<Vec> queue;
  Vec zero(dim(), Int(0));
  seen.emplace(zero, true);
  queue.push_back(zero);
  std::vector<Vec> units;
  for (int i = 0; i < dim(); ++i) {
    Vec e(dim(), Int(0));
    e[i] = 1;
    units.push_back(canonical_lift(e));
  }
  while (!queue.empty()) {
    Vec cur = queue.front();
    queue.pop_front();
    for (const Vec& u : units) {
      Vec nxt = canonical_lift(vec_add(cur, u));
      if (seen.emplace(nxt, true).second) queue.push_back(nxt);
    }
  }
  if (Int(long(seen.size())) != order_)
    throw std::runtime_error("internal: parallelepiped size disagrees with |det|");
  std::vector<GroupElement> out;
  out.reserve(seen.size());
  for (const auto& [vec, _] : seen) out.push_back(GroupElement{vec, snf_coords(vec)});
  return out;
}

bool ResidueGroup::subgroup_contains(const std::vector<Vec>& generators,
                                     const GroupElement& g) const {
  check_member(g);
  std::vector<Vec> cols = generators;
  for (int j = 0; j < dim(); ++j) cols.push_back(w_.col(j));
  return Lattice::from_columns(cols, dim()).contains(g.vec);
}

std::map<Vec, std::vector<Int>, LexLess> ResidueGroup::nonneg_reach(
    const std::vector<Vec>& generators) const {
  if (order_ > caps_.group)
    throw cap_exceeded("nonneg_reach: group order " + order_.get_str() +
                       " exceeds cap " + std::to_string(caps_.group));
  std::map<Vec, std::vector<Int>, LexLess> reach;
  std::deque<Vec> queue;
  Vec zero(dim(), Int(0));
  reach.emplace(zero, std::vector<Int>(generators.size(), Int(0)));
  queue.push_back(zero);
  while (!queue.empty()) {
    Vec cur = queue.front();
    queue.pop_front();
    const std::vector<Int> base = reach.at(cur);
    for (std::size_t j = 0; j < generators.size(); ++j) {
      Vec nxt = canonical_lift(vec_add(cur, generators[j]));
      if (reach.count(nxt)) continue;
      std::vector<Int> p = base;
      p[j] += 1;
      reach.emplace(nxt, std::move(p));
      queue.push_back(nxt);
    }
  }
  return reach;
}

std::vector<std::size_t> ResidueGroup::select_generators(
    const std::vector<Vec>& candidates) const {
  // The chain length bound needs phi(w); insisting on a complete
  // factorization here keeps the bound certified.
  unsigned phi = omega(order_, caps_.factor_ceiling);
  std::vector<std::size_t> selected;
  Lattice current = Lattice::from_columns(
      [&] {
        std::vector<Vec> cols;
        for (int j = 0; j < dim(); ++j) cols.push_back(w_.col(j));
        return cols;
      }(),
      dim());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (int(candidates[i].size()) != dim())
      throw std::invalid_argument("select_generators: dimension mismatch");
    if (current.contains(candidates[i])) continue;
    selected.push_back(i);
    current = current.extended(candidates[i]);
  }
  if (selected.size() > phi)
    throw std::runtime_error("internal: generator chain exceeds phi(w)");
  return selected;
}

QVec ResidueGroup::basis_coordinates(const Vec& x) const {
  Vec num = adj_ * x;
  QVec out(num.size());
  for (std::size_t i = 0; i < num.size(); ++i) out[i] = make_rat(num[i], det_);
  return out;
}

}  // namespace sparsebound
