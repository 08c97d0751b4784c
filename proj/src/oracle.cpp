#include "sparsebound/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace sparsebound {

namespace {

struct CapHit {};

// One inequality a . t >= c over the kernel coefficients.
struct FmRow {
  std::vector<Int> a;
  Int c;
};

int row_level(const FmRow& r) {
  for (int j = int(r.a.size()) - 1; j >= 0; --j)
    if (r.a[j] != 0) return j;
  return -1;
}

void normalize_row(FmRow& r) {
  Int g = 0;
  for (const Int& x : r.a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g <= 1) return;
  for (Int& x : r.a) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  // a . t >= c tightens to a' . t >= ceil(c / g) over integer points.
  Int c2;
  mpz_cdiv_q(c2.get_mpz_t(), r.c.get_mpz_t(), g.get_mpz_t());
  r.c = c2;
}

constexpr std::size_t kMaxFmRows = 100'000;

}  // namespace

SigmaOracle::SigmaOracle(IntegerMatrix a, Caps caps)
    : a_(std::move(a)), caps_(std::move(caps)) {}

const SigmaOracle::SubsetParam& SigmaOracle::param_for(
    const std::vector<std::size_t>& cols) {
  auto it = cache_.find(cols);
  if (it != cache_.end()) return it->second;

  SubsetParam p;
  p.cols = cols;
  std::vector<int> idx(cols.begin(), cols.end());
  IntegerMatrix sub = a_.columns(idx);
  p.hnf = hnf(sub);
  int s = sub.cols();
  for (int j = p.hnf.rank(); j < s; ++j) p.kernel.push_back(p.hnf.u.col(j));

  int kmax = std::min(a_.rows(), s);
  p.max_minor.assign(std::size_t(kmax) + 1, Int(0));
  p.max_minor[0] = 1;
  for (int kk = 1; kk <= kmax; ++kk) {
    Int rc, cc;
    mpz_bin_uiui(rc.get_mpz_t(), unsigned(a_.rows()), unsigned(kk));
    mpz_bin_uiui(cc.get_mpz_t(), unsigned(s), unsigned(kk));
    if (rc * cc > 200'000)
      throw cap_exceeded("oracle: subdeterminant bound enumeration too large");
    Int best = 0;
    std::vector<int> ri = first_combination(kk);
    do {
      std::vector<int> ci = first_combination(kk);
      do {
        IntegerMatrix mm(kk, kk);
        for (int i = 0; i < kk; ++i)
          for (int j = 0; j < kk; ++j) mm(i, j) = sub(ri[i], ci[j]);
        Int d = abs(det(mm));
        if (d > best) best = d;
      } while (next_combination(ci, s));
    } while (next_combination(ri, a_.rows()));
    p.max_minor[kk] = best;
  }
  return cache_.emplace(cols, std::move(p)).first->second;
}

FeasResult SigmaOracle::feasible_param(const SubsetParam& p, const Vec& b) {
  int m = a_.rows();
  int s = int(p.cols.size());

  // Integer particular solution of the subsystem via the triangular form.
  Vec rem = b;
  Vec y(p.hnf.rank(), Int(0));
  for (int j = 0; j < p.hnf.rank(); ++j) {
    int pr = p.hnf.pivot_rows[j];
    const Int& piv = p.hnf.h(pr, j);
    if (rem[pr] % piv != 0) return {Feas::No, std::nullopt, false};
    y[j] = rem[pr] / piv;
    if (y[j] != 0)
      for (int i = 0; i < m; ++i) rem[i] -= y[j] * p.hnf.h(i, j);
  }
  if (!vec_is_zero(rem)) return {Feas::No, std::nullopt, false};

  Vec x0(s, Int(0));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < p.hnf.rank(); ++j) x0[i] += p.hnf.u(i, j) * y[j];

  int k = s - p.hnf.rank();
  if (k == 0) {
    for (const Int& x : x0)
      if (x < 0) return {Feas::No, std::nullopt, false};
    return {Feas::Yes, x0, false};
  }

  // If a nonnegative integer solution exists at all, one exists inside the
  // box ||x||_inf <= (s+1) * max |subdeterminant of [A_S | b]|; the Laplace
  // expansion along the b column bounds the subdeterminants by the cached
  // minors of A_S alone.
  Int bmax = 0;
  for (const Int& v : b) bmax = std::max(bmax, Int(abs(v)));
  Int delta = 1;
  for (std::size_t kk = 1; kk < p.max_minor.size(); ++kk) {
    delta = std::max(delta, p.max_minor[kk]);
    delta = std::max(delta, Int(Int(kk) * bmax * p.max_minor[kk - 1]));
  }
  Int box = Int(s + 1) * delta;

  // 0 <= x0 + N t <= box, as rows over the kernel coefficients t.
  std::vector<FmRow> rows;
  for (int i = 0; i < s; ++i) {
    FmRow lo, hi;
    lo.a.resize(k);
    hi.a.resize(k);
    for (int j = 0; j < k; ++j) {
      lo.a[j] = p.kernel[j][i];
      hi.a[j] = -p.kernel[j][i];
    }
    lo.c = -x0[i];
    hi.c = x0[i] - box;
    rows.push_back(std::move(lo));
    rows.push_back(std::move(hi));
  }

  // Fourier-Motzkin cascade from the last variable down; every derived row is
  // implied, so the per-level bounds below are exact projections.
  std::vector<std::vector<FmRow>> by_level(k);
  std::vector<FmRow> constants;
  auto file_row = [&](FmRow r) {
    normalize_row(r);
    int lvl = row_level(r);
    if (lvl < 0)
      constants.push_back(std::move(r));
    else
      by_level[lvl].push_back(std::move(r));
  };
  for (FmRow& r : rows) file_row(std::move(r));

  std::size_t total_rows = rows.size();
  for (int lvl = k - 1; lvl >= 1; --lvl) {
    // Dedupe, keeping the strongest constant per coefficient vector.
    std::map<std::vector<Int>, Int> uniq;
    for (const FmRow& r : by_level[lvl]) {
      auto [it, fresh] = uniq.emplace(r.a, r.c);
      if (!fresh && r.c > it->second) it->second = r.c;
    }
    by_level[lvl].clear();
    std::vector<const std::pair<const std::vector<Int>, Int>*> pos, neg;
    for (const auto& e : uniq) {
      by_level[lvl].push_back(FmRow{e.first, e.second});
      if (e.first[lvl] > 0)
        pos.push_back(&e);
      else
        neg.push_back(&e);
    }
    for (const auto* pr : pos) {
      for (const auto* nr : neg) {
        FmRow nw;
        nw.a.resize(k);
        const Int& pc = pr->first[lvl];
        Int nc = -nr->first[lvl];
        for (int j = 0; j < lvl; ++j) nw.a[j] = pc * nr->first[j] + nc * pr->first[j];
        nw.c = pc * nr->second + nc * pr->second;
        file_row(std::move(nw));
        if (++total_rows > kMaxFmRows) throw CapHit{};
      }
    }
  }

  for (const FmRow& r : constants)
    if (r.c > 0) return {Feas::No, std::nullopt, false};

  // Depth-first enumeration of integer points, lexicographic in t.
  Vec t(k, Int(0));
  long long points = 0;
  std::optional<Vec> found;
  auto descend = [&](auto&& self, int j) -> bool {
    if (j == k) {
      Vec x = x0;
      for (int i = 0; i < s; ++i)
        for (int jj = 0; jj < k; ++jj) x[i] += p.kernel[jj][i] * t[jj];
      found = std::move(x);
      return true;
    }
    bool has_lo = false, has_hi = false;
    Int lo, hi;
    for (const FmRow& r : by_level[j]) {
      Int rest = r.c;
      for (int l = 0; l < j; ++l) rest -= r.a[l] * t[l];
      Int bound;
      if (r.a[j] > 0) {
        mpz_cdiv_q(bound.get_mpz_t(), rest.get_mpz_t(), r.a[j].get_mpz_t());
        if (!has_lo || bound > lo) lo = bound, has_lo = true;
      } else {
        mpz_fdiv_q(bound.get_mpz_t(), rest.get_mpz_t(), r.a[j].get_mpz_t());
        if (!has_hi || bound < hi) hi = bound, has_hi = true;
      }
    }
    if (!has_lo || !has_hi)
      throw std::runtime_error("internal: unbounded kernel direction survived the box");
    for (t[j] = lo; t[j] <= hi; ++t[j]) {
      if (++points > caps_.oracle_points) throw CapHit{};
      if (self(self, j + 1)) return true;
    }
    return false;
  };

  if (descend(descend, 0)) return {Feas::Yes, std::move(found), false};
  return {Feas::No, std::nullopt, false};
}

FeasResult SigmaOracle::feasible_columns(const std::vector<std::size_t>& cols,
                                         const Vec& b) {
  if (int(b.size()) != a_.rows())
    throw std::invalid_argument("oracle: dimension mismatch");
  if (cols.empty()) {
    if (vec_is_zero(b)) return {Feas::Yes, Vec{}, false};
    return {Feas::No, std::nullopt, false};
  }
  if (int(cols.size()) > caps_.oracle_cols)
    return {Feas::Unknown, std::nullopt, true};
  try {
    return feasible_param(param_for(cols), b);
  } catch (const CapHit&) {
    return {Feas::Unknown, std::nullopt, true};
  } catch (const cap_exceeded&) {
    return {Feas::Unknown, std::nullopt, true};
  }
}

FeasResult SigmaOracle::feasible(const Vec& b) {
  std::vector<std::size_t> all(a_.cols());
  std::iota(all.begin(), all.end(), 0);
  FeasResult r = feasible_columns(all, b);
  return r;
}

SigmaResult SigmaOracle::sigma(const Vec& b) {
  FeasResult full = feasible(b);
  if (full.status == Feas::No)
    return {SigmaResult::Kind::Infinite, 0, std::nullopt, false, true};
  if (full.status == Feas::Unknown)
    return {SigmaResult::Kind::Unknown, 0, std::nullopt, true, false};
  unsigned s0 = 0;
  for (const Int& x : *full.witness)
    if (x != 0) ++s0;
  if (s0 == 0)
    return {SigmaResult::Kind::Finite, 0, full.witness, false, true};
  SigmaUpTo up = sigma_up_to(b, s0 - 1);
  switch (up.kind) {
    case SigmaUpTo::Kind::Found:
      return {SigmaResult::Kind::Finite, up.value, up.witness, false, true};
    case SigmaUpTo::Kind::Greater:
      return {SigmaResult::Kind::Finite, s0, full.witness, false, true};
    default:
      return {SigmaResult::Kind::Unknown, 0, full.witness, true, false};
  }
}

SigmaUpTo SigmaOracle::sigma_up_to(const Vec& b, unsigned max_card) {
  int n = a_.cols();
  bool tainted = false;
  unsigned limit = std::min<unsigned>(max_card, unsigned(n));
  for (unsigned card = 0; card <= limit; ++card) {
    if (card == 0) {
      if (vec_is_zero(b)) return {SigmaUpTo::Kind::Found, 0, Vec(n, Int(0))};
      continue;
    }
    std::vector<int> idx = first_combination(int(card));
    do {
      std::vector<std::size_t> cols(idx.begin(), idx.end());
      FeasResult r = feasible_columns(cols, b);
      if (r.status == Feas::Unknown) {
        tainted = true;
        continue;
      }
      if (r.status == Feas::Yes) {
        if (tainted) return {SigmaUpTo::Kind::Unknown, 0, std::nullopt};
        Vec x(n, Int(0));
        for (std::size_t i = 0; i < cols.size(); ++i) x[cols[i]] = (*r.witness)[i];
        // The witness may use fewer than `card` columns; report its support.
        unsigned supp = 0;
        for (const Int& v : x)
          if (v != 0) ++supp;
        return {SigmaUpTo::Kind::Found, supp, std::move(x)};
      }
    } while (next_combination(idx, n));
  }
  if (tainted) return {SigmaUpTo::Kind::Unknown, 0, std::nullopt};
  if (limit == unsigned(n)) return {SigmaUpTo::Kind::Infeasible, 0, std::nullopt};
  return {SigmaUpTo::Kind::Greater, max_card, std::nullopt};
}

FeasResult feasible(const IntegerMatrix& a, const Vec& b, const Caps& caps) {
  SigmaOracle o(a, caps);
  return o.feasible(b);
}

SigmaResult sigma_exact(const IntegerMatrix& a, const Vec& b, const Caps& caps) {
  SigmaOracle o(a, caps);
  return o.sigma(b);
}

Int frobenius_number(const std::vector<Int>& coins) {
  if (coins.empty()) throw std::invalid_argument("frobenius: no coins");
  Int g = 0;
  for (const Int& c : coins) {
    if (c < 2) throw std::invalid_argument("frobenius: coins must be at least 2");
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  }
  if (g != 1) throw std::invalid_argument("frobenius: gcd of coins must be 1");
  Int cmin = coins[0], cmax = coins[0];
  for (const Int& c : coins) {
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
  }
  Int range = cmin * cmax;
  if (range > 1'000'000'000)
    throw cap_exceeded("frobenius: dynamic programming range " + range.get_str() +
                       " too large");
  unsigned long r = range.get_ui();
  std::vector<unsigned long> cs;
  for (const Int& c : coins) cs.push_back(c.get_ui());
  std::vector<char> reach(r + 1, 0);
  reach[0] = 1;
  for (unsigned long v = 1; v <= r; ++v)
    for (unsigned long c : cs)
      if (v >= c && reach[v - c]) {
        reach[v] = 1;
        break;
      }
  for (unsigned long v = r;; --v) {
    if (!reach[v]) return Int(v);
    if (v == 0) break;
  }
  throw std::runtime_error("internal: frobenius scan found no gap");
}

}  // namespace sparsebound
