#include "sparsebound/geometry.hpp"

#include "sparsebound/exact_linalg.hpp"

namespace sparsebound {

namespace {

IntegerMatrix adjugate_of(const IntegerMatrix& w) {
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

SimplicialCone::SimplicialCone(IntegerMatrix basis, std::vector<int> source_cols)
    : basis_(std::move(basis)), adj_(1, 1), source_cols_(std::move(source_cols)) {
  if (basis_.rows() != basis_.cols())
    throw std::invalid_argument("simplicial cone: basis must be square");
  det_ = det(basis_);
  if (det_ == 0)
    throw std::invalid_argument("simplicial cone: basis must be invertible");
  adj_ = adjugate_of(basis_);
  // Row i of basis^{-1} is adj row i over det; negate for the inner normal.
  normals_.resize(dim());
  for (int i = 0; i < dim(); ++i) {
    normals_[i].resize(dim());
    for (int j = 0; j < dim(); ++j) normals_[i][j] = make_rat(-adj_(i, j), det_);
  }
}

bool SimplicialCone::contains(const Vec& x) const {
  if (int(x.size()) != dim())
    throw std::invalid_argument("cone membership: dimension mismatch");
  int sign = sgn(det_);
  for (int i = 0; i < dim(); ++i) {
    Int num = 0;
    for (int j = 0; j < dim(); ++j) num += adj_(i, j) * x[j];
    if (sign > 0 ? num < 0 : num > 0) return false;
  }
  return true;
}

bool SimplicialCone::contains(const QVec& x) const {
  if (int(x.size()) != dim())
    throw std::invalid_argument("cone membership: dimension mismatch");
  for (const Rat& c : coordinates(x))
    if (c < 0) return false;
  return true;
}

QVec SimplicialCone::coordinates(const QVec& x) const {
  if (int(x.size()) != dim())
    throw std::invalid_argument("cone coordinates: dimension mismatch");
  QVec out(dim());
  Rat qdet(det_);
  for (int i = 0; i < dim(); ++i) {
    Rat num = 0;
    for (int j = 0; j < dim(); ++j) num += Rat(adj_(i, j)) * x[j];
    out[i] = num / qdet;
  }
  return out;
}

QVec SimplicialCone::coordinates(const Vec& x) const {
  QVec q(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) q[i] = Rat(x[i]);
  return coordinates(q);
}

std::optional<Vec> SimplicialCone::integral_coordinates(const Vec& x) const {
  QVec c = coordinates(x);
  Vec out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].get_den() != 1) return std::nullopt;
    out[i] = c[i].get_num();
  }
  return out;
}

ConeCover caratheodory_cover(const IntegerMatrix& w, const Caps& caps) {
  int m = w.rows(), n = w.cols();
  if (n < m) throw std::invalid_argument("cone cover: fewer columns than rows");
  Int count;
  mpz_bin_uiui(count.get_mpz_t(), unsigned(n), unsigned(m));
  if (count > caps.minors)
    throw cap_exceeded("cone cover: " + count.get_str() +
                       " column subsets exceed cap " + std::to_string(caps.minors));
  ConeCover cover{{}, w};
  std::vector<int> idx = first_combination(m);
  do {
    IntegerMatrix sub = w.columns(idx);
    if (det(sub) == 0) continue;
    cover.subcones.emplace_back(std::move(sub), idx);
  } while (next_combination(idx, n));
  if (cover.subcones.empty())
    throw std::invalid_argument("matrix not full row rank");
  return cover;
}

bool cone_equal(const IntegerMatrix& a, const IntegerMatrix& w, const Caps& caps) {
  ConeCover cover = caratheodory_cover(w, caps);
  for (int j = 0; j < a.cols(); ++j) {
    Vec c = a.col(j);
    bool inside = false;
    for (const SimplicialCone& k : cover.subcones)
      if (k.contains(c)) {
        inside = true;
        break;
      }
    if (!inside) return false;
  }
  return true;
}

namespace {

// Interior point of K, K + x and K + y built from the inner normals: for
// each j, lambda_j lifts x along v^j far enough that both halfspace families
// are satisfied; a^j . v^j = -1 for the normals constructed above.
QVec two_translate_point(const SimplicialCone& k, const QVec& x, const QVec& y) {
  int m = k.dim();
  const std::vector<QVec>& a = k.inner_normals();
  auto qdot = [m](const QVec& u, const QVec& v) {
    Rat s = 0;
    for (int i = 0; i < m; ++i) s += u[i] * v[i];
    return s;
  };
  QVec xy(m);
  for (int i = 0; i < m; ++i) xy[i] = x[i] - y[i];
  QVec w0 = x;
  for (int j = 0; j < m; ++j) {
    Rat ax = qdot(a[j], x);
    Rat axy = qdot(a[j], xy);
    // r^j := v^j, for which a^j . r^j = -1 < 0.
    QVec rj(m);
    for (int i = 0; i < m; ++i) rj[i] = Rat(k.basis()(i, j));
    Rat arr = qdot(a[j], rj);
    Rat lam = std::max(Rat(0), Rat(-ax / arr));
    if (axy > 0) lam = std::max(lam, Rat(-axy / arr));
    for (int i = 0; i < m; ++i) w0[i] += lam * Rat(k.basis()(i, j));
  }
  return w0;
}

}  // namespace

Vec overlap_translate(const SimplicialCone& k, const std::vector<Vec>& xs) {
  int m = k.dim();
  Vec z(m, Int(0));
  if (!xs.empty()) {
    auto to_q = [m](const Vec& v) {
      QVec q(m);
      for (int i = 0; i < m; ++i) q[i] = Rat(v[i]);
      return q;
    };
    QVec cur = two_translate_point(k, to_q(xs[0]), to_q(xs[0]));
    for (std::size_t i = 1; i < xs.size(); ++i)
      cur = two_translate_point(k, cur, to_q(xs[i]));
    QVec coords = k.coordinates(cur);
    Vec kvec(m);
    for (int i = 0; i < m; ++i) {
      mpz_cdiv_q(kvec[i].get_mpz_t(), coords[i].get_num().get_mpz_t(),
                 coords[i].get_den().get_mpz_t());
      if (kvec[i] < 0)
        throw std::runtime_error("internal: negative translate coordinate");
    }
    z = k.basis() * kvec;
  }
  // K + z subset of K and of each K + x is equivalent to z in K and
  // z - x in K; check both exactly.
  if (!k.contains(z)) throw std::runtime_error("internal: translate left the cone");
  for (const Vec& x : xs)
    if (!k.contains(vec_sub(z, x)))
      throw std::runtime_error("internal: translate misses a shifted cone");
  return z;
}

}  // namespace sparsebound
