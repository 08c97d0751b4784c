#include "sparsebound/exact_linalg.hpp"

#include <algorithm>

namespace sparsebound {

Int det(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det: matrix not square");
  int n = m.rows();
  IntegerMatrix a = m;
  int sign = 1;
  Int prev = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return Int(0);
      for (int j = k; j < n; ++j) std::swap(a(k, j), a(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign > 0 ? a(n - 1, n - 1) : Int(-a(n - 1, n - 1));
}

namespace {

// Apply the unimodular column operation (c1, c2) <- (s*c1 + t*c2, u*c1 + v*c2)
// to both the working matrix and the transform accumulator.
void col_op(IntegerMatrix& a, IntegerMatrix& u, int c1, int c2, const Int& s,
            const Int& t, const Int& uu, const Int& vv) {
  for (int i = 0; i < a.rows(); ++i) {
    Int x = a(i, c1), y = a(i, c2);
    a(i, c1) = s * x + t * y;
    a(i, c2) = uu * x + vv * y;
  }
  for (int i = 0; i < u.rows(); ++i) {
    Int x = u(i, c1), y = u(i, c2);
    u(i, c1) = s * x + t * y;
    u(i, c2) = uu * x + vv * y;
  }
}

void col_swap(IntegerMatrix& a, IntegerMatrix& u, int c1, int c2) {
  if (c1 == c2) return;
  for (int i = 0; i < a.rows(); ++i) std::swap(a(i, c1), a(i, c2));
  for (int i = 0; i < u.rows(); ++i) std::swap(u(i, c1), u(i, c2));
}

void col_negate(IntegerMatrix& a, IntegerMatrix& u, int c) {
  for (int i = 0; i < a.rows(); ++i) a(i, c) = -a(i, c);
  for (int i = 0; i < u.rows(); ++i) u(i, c) = -u(i, c);
}

void col_submul(IntegerMatrix& a, IntegerMatrix& u, int dst, int src, const Int& q) {
  if (q == 0) return;
  for (int i = 0; i < a.rows(); ++i) a(i, dst) -= q * a(i, src);
  for (int i = 0; i < u.rows(); ++i) u(i, dst) -= q * u(i, src);
}

}  // namespace

HnfResult hnf(const IntegerMatrix& m) {
  HnfResult res{m, IntegerMatrix::identity(m.cols()), {}};
  IntegerMatrix& h = res.h;
  IntegerMatrix& u = res.u;
  int rows = m.rows(), cols = m.cols();
  int col = 0;
  for (int row = 0; row < rows && col < cols; ++row) {
    int j0 = -1;
    for (int j = col; j < cols; ++j)
      if (h(row, j) != 0) {
        j0 = j;
        break;
      }
    if (j0 < 0) continue;
    col_swap(h, u, col, j0);
    // Clear the rest of the row with extended-gcd column combinations.
    for (int j = col + 1; j < cols; ++j) {
      if (h(row, j) == 0) continue;
      Int g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                 h(row, col).get_mpz_t(), h(row, j).get_mpz_t());
      Int ag, bg;
      mpz_divexact(ag.get_mpz_t(), h(row, col).get_mpz_t(), g.get_mpz_t());
      mpz_divexact(bg.get_mpz_t(), h(row, j).get_mpz_t(), g.get_mpz_t());
      // det of [[s, -bg], [t, ag]] is s*ag + t*bg = 1.
      col_op(h, u, col, j, s, t, -bg, ag);
    }
    if (h(row, col) < 0) col_negate(h, u, col);
    // Reduce earlier columns at this pivot row into [0, pivot).
    for (int j = 0; j < col; ++j) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), h(row, j).get_mpz_t(), h(row, col).get_mpz_t());
      col_submul(h, u, j, col, q);
    }
    res.pivot_rows.push_back(row);
    ++col;
  }
  return res;
}

SnfResult snf(const IntegerMatrix& m) {
  int rows = m.rows(), cols = m.cols();
  IntegerMatrix s = m;
  IntegerMatrix u = IntegerMatrix::identity(rows);
  IntegerMatrix v = IntegerMatrix::identity(cols);

  auto row_op = [&](int r1, int r2, const Int& a, const Int& b, const Int& c,
                    const Int& d) {
    for (int j = 0; j < cols; ++j) {
      Int x = s(r1, j), y = s(r2, j);
      s(r1, j) = a * x + b * y;
      s(r2, j) = c * x + d * y;
    }
    for (int j = 0; j < rows; ++j) {
      Int x = u(r1, j), y = u(r2, j);
      u(r1, j) = a * x + b * y;
      u(r2, j) = c * x + d * y;
    }
  };
  auto row_swap = [&](int r1, int r2) {
    if (r1 == r2) return;
    for (int j = 0; j < cols; ++j) std::swap(s(r1, j), s(r2, j));
    for (int j = 0; j < rows; ++j) std::swap(u(r1, j), u(r2, j));
  };
  auto row_addmul = [&](int dst, int src, const Int& q) {
    if (q == 0) return;
    for (int j = 0; j < cols; ++j) s(dst, j) += q * s(src, j);
    for (int j = 0; j < rows; ++j) u(dst, j) += q * u(src, j);
  };

  int r = 0;
  for (int k = 0; k < std::min(rows, cols); ++k) {
    // Pivot search.
    int pi = -1, pj = -1;
    for (int i = k; i < rows && pi < 0; ++i)
      for (int j = k; j < cols; ++j)
        if (s(i, j) != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;
    row_swap(k, pi);
    col_swap(s, v, k, pj);

    // Clear row and column k. A pivot that divides an entry is removed by a
    // plain subtraction, which leaves row/column k untouched; otherwise a gcd
    // combination strictly shrinks the pivot, which bounds the iteration.
    auto col_addmul = [&](int dst, int src, const Int& q) {
      if (q == 0) return;
      for (int i = 0; i < rows; ++i) s(i, dst) += q * s(i, src);
      for (int i = 0; i < cols; ++i) v(i, dst) += q * v(i, src);
    };
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (int i = k + 1; i < rows; ++i) {
        if (s(i, k) == 0) continue;
        if (s(i, k) % s(k, k) == 0) {
          row_addmul(i, k, Int(-(s(i, k) / s(k, k))));
          continue;
        }
        Int g, a, b;
        mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(),
                   s(k, k).get_mpz_t(), s(i, k).get_mpz_t());
        Int x, y;
        mpz_divexact(x.get_mpz_t(), s(k, k).get_mpz_t(), g.get_mpz_t());
        mpz_divexact(y.get_mpz_t(), s(i, k).get_mpz_t(), g.get_mpz_t());
        row_op(k, i, a, b, -y, x);
        dirty = true;
      }
      for (int j = k + 1; j < cols; ++j) {
        if (s(k, j) == 0) continue;
        if (s(k, j) % s(k, k) == 0) {
          col_addmul(j, k, Int(-(s(k, j) / s(k, k))));
          continue;
        }
        Int g, a, b;
        mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(),
                   s(k, k).get_mpz_t(), s(k, j).get_mpz_t());
        Int x, y;
        mpz_divexact(x.get_mpz_t(), s(k, k).get_mpz_t(), g.get_mpz_t());
        mpz_divexact(y.get_mpz_t(), s(k, j).get_mpz_t(), g.get_mpz_t());
        col_op(s, v, k, j, a, b, -y, x);
        dirty = true;
      }
      if (dirty) continue;
      // Enforce divisibility of the remaining block by the pivot.
      for (int i = k + 1; i < rows && !dirty; ++i)
        for (int j = k + 1; j < cols; ++j)
          if (s(i, j) % s(k, k) != 0) {
            row_addmul(k, i, Int(1));
            dirty = true;
            break;
          }
    }
    if (s(k, k) < 0) {
      for (int j = 0; j < cols; ++j) s(k, j) = -s(k, j);
      for (int j = 0; j < rows; ++j) u(k, j) = -u(k, j);
    }
    ++r;
  }

  SnfResult res{{}, u, v, r};
  for (int k = 0; k < r; ++k) res.diag.push_back(s(k, k));
  return res;
}

std::optional<QVec> solve_rational_q(const IntegerMatrix& m, const QVec& b) {
  if (int(b.size()) != m.rows())
    throw std::invalid_argument("solve_rational: dimension mismatch");
  int rows = m.rows(), cols = m.cols();
  std::vector<QVec> a(rows, QVec(cols + 1));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a[i][j] = Rat(m(i, j));
    a[i][cols] = b[i];
  }
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int piv = -1;
    for (int i = row; i < rows; ++i)
      if (a[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[row], a[piv]);
    Rat p = a[row][col];
    for (int j = col; j <= cols; ++j) a[row][j] /= p;
    for (int i = 0; i < rows; ++i) {
      if (i == row || a[i][col] == 0) continue;
      Rat f = a[i][col];
      for (int j = col; j <= cols; ++j) a[i][j] -= f * a[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (int i = row; i < rows; ++i)
    if (a[i][cols] != 0) return std::nullopt;
  QVec x(cols, Rat(0));
  for (int i = 0; i < int(pivot_col.size()); ++i) x[pivot_col[i]] = a[i][cols];
  return x;
}

std::optional<QVec> solve_rational(const IntegerMatrix& m, const Vec& b) {
  QVec qb(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) qb[i] = Rat(b[i]);
  return solve_rational_q(m, qb);
}

std::vector<Int> factorize(const Int& n, const Int& ceiling) {
  if (n < 1) throw std::invalid_argument("factorize: argument must be positive");
  std::vector<Int> fs;
  Int r = n;
  while (r % 2 == 0) {
    fs.push_back(2);
    r /= 2;
  }
  Int d = 3;
  while (d * d <= r && d <= ceiling) {
    while (r % d == 0) {
      fs.push_back(d);
      r /= d;
    }
    d += 2;
  }
  if (r > 1) {
    // Either the loop ended at d*d > r (cofactor prime) or the cofactor has
    // no divisor up to the ceiling, which proves primality only up to
    // ceiling^2.
    if (d * d > r || r <= ceiling * ceiling) {
      fs.push_back(r);
    } else {
      throw factorization_incomplete("factorization incomplete: cofactor " +
                                     r.get_str() + " exceeds ceiling^2");
    }
  }
  return fs;
}

unsigned omega(const Int& n, const Int& ceiling) {
  if (n < 1) throw std::invalid_argument("omega: argument must be positive");
  return unsigned(factorize(n, ceiling).size());
}

std::vector<int> first_combination(int k) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  return idx;
}

bool next_combination(std::vector<int>& idx, int n) {
  int k = int(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

MinorStats minor_stats(const IntegerMatrix& w, const Caps& caps) {
  int m = w.rows(), n = w.cols();
  if (hnf(w).rank() != m) throw std::invalid_argument("matrix not full row rank");

  // C(n, m) against the subset cap.
  Int count;
  mpz_bin_uiui(count.get_mpz_t(), unsigned(n), unsigned(m));
  if (count > caps.minors)
    throw cap_exceeded("minor enumeration: " + count.get_str() +
                       " column subsets exceed cap " + std::to_string(caps.minors));

  MinorStats st;
  st.subsets_enumerated = long(count.get_si());
  bool first = true;
  std::vector<int> idx = first_combination(m);
  do {
    Int d = det(w.columns(idx));
    if (d == 0) continue;
    Int ad = abs(d);
    st.delta_set.insert(ad);
    if (first) {
      st.minor_gcd = ad;
      first = false;
    } else {
      Int g;
      mpz_gcd(g.get_mpz_t(), st.minor_gcd.get_mpz_t(), ad.get_mpz_t());
      st.minor_gcd = g;
    }
  } while (next_combination(idx, n));

  st.delta_max = *st.delta_set.rbegin();
  st.delta_min = *st.delta_set.begin();
  bool first_phi = true;
  for (const Int& d : st.delta_set) {
    unsigned o = omega(d, caps.factor_ceiling);
    st.phi_set.insert(o);
    if (first_phi) {
      st.phi_max = st.phi_min = o;
      first_phi = false;
    } else {
      st.phi_max = std::max(st.phi_max, o);
      st.phi_min = std::min(st.phi_min, o);
    }
  }
  st.gram_det = det(w * w.transpose());
  return st;
}

Lattice Lattice::from_columns(const IntegerMatrix& generators) {
  HnfResult r = hnf(generators);
  Lattice l;
  l.dim_ = generators.rows();
  for (int j = 0; j < r.rank(); ++j) l.basis_.push_back(r.h.col(j));
  l.pivot_rows_ = r.pivot_rows;
  return l;
}

Lattice Lattice::from_columns(const std::vector<Vec>& generators, int dim) {
  if (generators.empty()) {
    Lattice l;
    l.dim_ = dim;
    return l;
  }
  return from_columns(IntegerMatrix::from_columns(generators));
}

bool Lattice::contains(const Vec& v) const {
  if (int(v.size()) != dim_) throw std::invalid_argument("lattice: dimension mismatch");
  Vec r = v;
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    int p = pivot_rows_[j];
    const Int& piv = basis_[j][p];
    if (r[p] % piv != 0) return false;
    Int q = r[p] / piv;
    if (q != 0)
      for (int i = 0; i < dim_; ++i) r[i] -= q * basis_[j][i];
  }
  return vec_is_zero(r);
}

Lattice Lattice::extended(const Vec& extra) const {
  std::vector<Vec> gens = basis_;
  gens.push_back(extra);
  return from_columns(gens, dim_);
}

}  // namespace sparsebound
