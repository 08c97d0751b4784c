#include "sparsebound/asymptotics.hpp"

#include <algorithm>
#include <ostream>
#include <random>

#include "sparsebound/parallel.hpp"

namespace sparsebound {

namespace {

Int pow_int(const Int& base, int exp) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), unsigned(exp));
  return r;
}

// Uniform draw in [0, bound) by rejection; mt19937_64 output is fixed by the
// standard, so sampled sweeps replay bit-for-bit under a seed.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  std::uint64_t limit = ~std::uint64_t(0) - ~std::uint64_t(0) % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

Vec box_point(long long index, long long t, int m) {
  Vec b(m);
  long long side = 2 * t + 1;
  for (int i = m - 1; i >= 0; --i) {
    b[i] = Int(long(index % side - t));
    index /= side;
  }
  return b;
}

struct SigmaTally {
  enum class Kind { Exact, AboveAll, Unknown } kind;
  unsigned value = 0;
};

// Exact sigma when it is at most k_max, using a known support upper bound
// from a witness in hand.
SigmaTally settle_sigma(SigmaOracle& oracle, const Vec& b, unsigned witness_supp,
                        unsigned k_max) {
  if (witness_supp == 0) return {SigmaTally::Kind::Exact, 0};
  unsigned limit = std::min(k_max, witness_supp - 1);
  SigmaUpTo up = oracle.sigma_up_to(b, limit);
  switch (up.kind) {
    case SigmaUpTo::Kind::Found:
      return {SigmaTally::Kind::Exact, up.value};
    case SigmaUpTo::Kind::Greater:
      if (witness_supp <= k_max) return {SigmaTally::Kind::Exact, witness_supp};
      return {SigmaTally::Kind::AboveAll, 0};
    case SigmaUpTo::Kind::Infeasible:
      throw std::runtime_error("internal: oracle contradicts a feasibility witness");
    default:
      return {SigmaTally::Kind::Unknown, 0};
  }
}

}  // namespace

std::vector<SweepRow> density_sweep(const Plan& plan,
                                    const std::vector<long long>& t_schedule,
                                    const std::vector<unsigned>& k_list,
                                    const Caps& caps, std::uint64_t seed,
                                    long long sample_size) {
  for (std::size_t i = 1; i < t_schedule.size(); ++i)
    if (t_schedule[i] <= t_schedule[i - 1])
      throw std::invalid_argument("sweep: schedule must be strictly increasing");
  if (k_list.empty()) throw std::invalid_argument("sweep: empty k list");
  int m = plan.a.rows();
  unsigned k_max = *std::max_element(k_list.begin(), k_list.end());

  std::vector<SweepRow> rows;
  for (long long t : t_schedule) {
    SweepRow row;
    row.t = t;
    row.seed = seed;
    row.n_box = pow_int(Int(long(2 * t + 1)), m);
    row.exhaustive = row.n_box <= Int(long(caps.box));
    for (unsigned k : k_list) {
      row.sigma_le[k] = 0;
      row.cert_le[k] = 0;
    }

    long long n_points;
    std::vector<Vec> samples;
    if (row.exhaustive) {
      n_points = row.n_box.get_si();
      row.sample_size = n_points;
    } else {
      n_points = sample_size;
      row.sample_size = sample_size;
      std::mt19937_64 rng(seed);
      std::uint64_t side = std::uint64_t(2 * t + 1);
      samples.reserve(std::size_t(sample_size));
      for (long long i = 0; i < sample_size; ++i) {
        Vec b(m);
        for (int j = 0; j < m; ++j)
          b[j] = Int(long(draw_below(rng, side)) - long(t));
        samples.push_back(std::move(b));
      }
    }

    std::vector<SweepRow> partial(chunk_count(std::size_t(n_points)), row);
    run_chunked(std::size_t(n_points), [&](std::size_t ci, std::size_t lo,
                                           std::size_t hi) {
      SweepRow& acc = partial[ci];
      SigmaOracle oracle(plan.a, caps);
      for (std::size_t i = lo; i < hi; ++i) {
        Vec b = row.exhaustive ? box_point((long long)i, t, m) : samples[i];
        SolveOutcome out = solve_sparse(plan, b);
        if (out.status == SolveStatus::Infeasible) continue;

        std::optional<unsigned> witness_supp;
        if (out.status == SolveStatus::Certificate) {
          ++acc.n_covered;
          ++acc.n_feasible;
          unsigned supp = unsigned(out.cert->support.size());
          for (unsigned k : k_list)
            if (supp <= k) ++acc.cert_le[k];
          witness_supp = supp;
        } else {
          ++acc.n_uncovered;
          FeasResult f = oracle.feasible(b);
          if (f.status == Feas::No) continue;
          if (f.status == Feas::Unknown) {
            ++acc.n_unknown;
            continue;
          }
          ++acc.n_feasible;
          unsigned supp = 0;
          for (const Int& x : *f.witness)
            if (x != 0) ++supp;
          witness_supp = supp;
        }

        SigmaTally st = settle_sigma(oracle, b, *witness_supp, k_max);
        if (st.kind == SigmaTally::Kind::Unknown) {
          ++acc.n_unknown;
        } else if (st.kind == SigmaTally::Kind::Exact) {
          for (unsigned k : k_list)
            if (st.value <= k) ++acc.sigma_le[k];
        }
      }
    });
    for (const SweepRow& acc : partial) {
      row.n_feasible += acc.n_feasible;
      row.n_covered += acc.n_covered;
      row.n_uncovered += acc.n_uncovered;
      row.n_unknown += acc.n_unknown;
      for (unsigned k : k_list) {
        row.sigma_le[k] += acc.sigma_le.at(k);
        row.cert_le[k] += acc.cert_le.at(k);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Int ehrhart_count(const IntegerMatrix& lattice_basis,
                  const std::vector<Vec>& generators, long long t,
                  const Caps& caps) {
  if (t < 0) throw std::invalid_argument("ehrhart: t must be nonnegative");
  int m = lattice_basis.rows();
  Lattice lambda = Lattice::from_columns(lattice_basis);
  if (lambda.rank() != m)
    throw std::invalid_argument("ehrhart: lattice basis must have full rank");
  if (generators.empty()) return Int(1);
  for (const Vec& g : generators)
    if (int(g.size()) != m) throw std::invalid_argument("ehrhart: dimension mismatch");
  int r = int(generators.size());
  IntegerMatrix g(m, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < m; ++i) g(i, j) = generators[j][i];
  if (hnf(g).rank() != r)
    throw std::invalid_argument("ehrhart: generators must be linearly independent");
  if (t == 0) return Int(1);

  // Coordinates on the generator span: lam = adj(G^T G) G^T y / det(G^T G),
  // with the span-membership check D y == G (M y) kept in integers.
  IntegerMatrix gtg = g.transpose() * g;
  Int d = det(gtg);
  IntegerMatrix adj(r, r);
  {
    // adjugate via solves: adj = det * inverse
    for (int j = 0; j < r; ++j) {
      Vec e(r, Int(0));
      e[j] = 1;
      std::optional<QVec> col = solve_rational(gtg, e);
      for (int i = 0; i < r; ++i) {
        Rat v = (*col)[i] * Rat(d);
        if (v.get_den() != 1)
          throw std::runtime_error("internal: adjugate entry not integral");
        adj(i, j) = v.get_num();
      }
    }
  }
  IntegerMatrix lam_map = adj * g.transpose();  // r x m
  Int dpos = d;                                  // det(G^T G) > 0 for independent G

  Int tz = long(t);
  Vec lo(m, Int(0)), hi(m, Int(0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < r; ++j) {
      if (g(i, j) < 0)
        lo[i] += tz * g(i, j);
      else
        hi[i] += tz * g(i, j);
    }

  const std::vector<Vec>& basis = lambda.basis();
  Int count = 0;
  long long scanned = 0;
  Vec y(m, Int(0));
  auto scan = [&](auto&& self, int level) -> void {
    if (level == m) {
      Vec ly = lam_map * y;
      Int tb = tz * dpos;
      for (int j = 0; j < r; ++j)
        if (ly[j] < 0 || ly[j] > tb) return;
      // span membership: dpos * y == G * lam
      Vec gl(m, Int(0));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < r; ++j) gl[i] += g(i, j) * ly[j];
      for (int i = 0; i < m; ++i)
        if (gl[i] != dpos * y[i]) return;
      ++count;
      return;
    }
    const Int& piv = basis[level][level];
    Int lo_u, hi_u;
    Int a = lo[level] - y[level], b = hi[level] - y[level];
    mpz_cdiv_q(lo_u.get_mpz_t(), a.get_mpz_t(), piv.get_mpz_t());
    mpz_fdiv_q(hi_u.get_mpz_t(), b.get_mpz_t(), piv.get_mpz_t());
    for (Int u = lo_u; u <= hi_u; ++u) {
      if (++scanned > caps.box)
        throw cap_exceeded("ehrhart: scan exceeds box cap");
      Vec saved = y;
      for (int i = level; i < m; ++i) y[i] += basis[level][i] * u;
      self(self, level + 1);
      y = saved;
    }
  };
  scan(scan, 0);
  return count;
}

Rat density_ratio(const Lattice& lambda,
                 const std::vector<std::pair<SimplicialCone, Vec>>& translated,
                 long long t, const Caps& caps) {
  int m = lambda.dim();
  Int boxcount = pow_int(Int(long(2 * t + 1)), m);
  if (boxcount > Int(long(caps.box)))
    throw cap_exceeded("density ratio: box " + boxcount.get_str() +
                       " exceeds cap " + std::to_string(caps.box));
  long long n_points = boxcount.get_si();
  std::vector<std::pair<long long, long long>> partial(
      chunk_count(std::size_t(n_points)), {0, 0});
  run_chunked(std::size_t(n_points), [&](std::size_t ci, std::size_t lo,
                                         std::size_t hi) {
    auto& [num, den] = partial[ci];
    for (std::size_t i = lo; i < hi; ++i) {
      Vec b = box_point((long long)i, t, m);
      if (!lambda.contains(b)) continue;
      bool in_cone = false, in_translate = false;
      for (const auto& [cone, shift] : translated) {
        if (!in_cone && cone.contains(b)) in_cone = true;
        if (!in_translate && cone.contains(vec_sub(b, shift))) in_translate = true;
        if (in_cone && in_translate) break;
      }
      if (in_cone) ++den;
      if (in_translate) ++num;
    }
  });
  long long num = 0, den = 0;
  for (const auto& [n, d] : partial) {
    num += n;
    den += d;
  }
  if (den == 0) throw std::runtime_error("density ratio: empty denominator");
  return make_rat(Int(long(num)), Int(long(den)));
}

Rat density_ratio(const Plan& plan, long long t, const Caps& caps) {
  std::vector<std::pair<SimplicialCone, Vec>> translated;
  for (const SubconePlan& sp : plan.subcones)
    translated.emplace_back(sp.cone, sp.shift);
  return density_ratio(plan.lambda, translated, t, caps);
}

namespace {

bool is_small_prime(const Int& p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

PrimorialInstance gen_primorial(PrimorialKind kind, int m, int d,
                                const std::vector<Int>& primes) {
  if (d < 1 || int(primes.size()) != d)
    throw std::invalid_argument("primorial: need exactly d primes");
  for (int i = 0; i < d; ++i) {
    if (!is_small_prime(primes[i]))
      throw std::invalid_argument("primorial: " + primes[i].get_str() + " is not prime");
    if (i > 0 && primes[i] <= primes[i - 1])
      throw std::invalid_argument("primorial: primes must be strictly increasing");
  }
  if (m < 1) throw std::invalid_argument("primorial: m must be at least 1");
  if (kind == PrimorialKind::B && d < m + 3)
    throw std::invalid_argument("primorial: kind B needs d >= m + 3");

  PrimorialInstance inst;
  inst.kind = kind;
  inst.m = m;
  inst.d = d;
  inst.primes = primes;
  inst.delta = 1;
  for (const Int& p : primes) inst.delta *= p;
  for (int i = 0; i < d; ++i) {
    Int qi;
    mpz_divexact(qi.get_mpz_t(), inst.delta.get_mpz_t(), primes[i].get_mpz_t());
    inst.q.push_back(qi);
  }
  // With a single prime the only q value is the empty product 1, whose set of
  // nonnegative combinations is all of Z>=0; the largest integer outside it
  // is -1.
  inst.frobenius = d == 1 ? Int(-1) : frobenius_number(inst.q);

  IntegerMatrix atilde(1, d + 1);
  for (int i = 0; i < d; ++i) atilde(0, i) = inst.q[i];
  atilde(0, d) = -inst.delta;

  switch (kind) {
    case PrimorialKind::Atilde:
      inst.matrix = atilde;
      inst.m = 1;
      break;
    case PrimorialKind::A: {
      IntegerMatrix a(m, m + d);
      for (int i = 0; i + 1 < m; ++i) a(i, i) = 1;
      for (int j = 0; j < d + 1; ++j) a(m - 1, m - 1 + j) = atilde(0, j);
      inst.matrix = a;
      break;
    }
    case PrimorialKind::B: {
      // Rows: [ U | A ; 1..1 | 0..0 ] with U = [I_m | 0], so the leading
      // (m+1) x (m+1) block is unimodular.
      IntegerMatrix a(m, m + d);
      for (int i = 0; i + 1 < m; ++i) a(i, i) = 1;
      for (int j = 0; j < d + 1; ++j) a(m - 1, m - 1 + j) = atilde(0, j);
      IntegerMatrix bmat(m + 1, 2 * m + 1 + d);
      for (int i = 0; i < m; ++i) bmat(i, i) = 1;  // U = [I_m | 0]
      for (int j = 0; j < m + 1; ++j) bmat(m, j) = 1;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m + d; ++j) bmat(i, m + 1 + j) = a(i, j);
      inst.matrix = bmat;
      std::vector<int> corner(m + 1);
      for (int j = 0; j <= m; ++j) corner[j] = j;
      if (abs(det(bmat.columns(corner))) != 1)
        throw std::runtime_error("internal: leading block of kind B is not unimodular");
      break;
    }
  }
  return inst;
}

SigmaAsyEstimate sigma_asy_estimate(const std::vector<SweepRow>& rows,
                                    const Rat& epsilon) {
  if (rows.size() < 2)
    throw std::invalid_argument("estimate: need at least two sweep rows");
  SigmaAsyEstimate est;
  for (const SweepRow& row : rows) {
    if (!row.exhaustive) est.any_sampled = true;
    if (row.n_unknown > 0) est.any_unknown = true;
  }
  Rat target = Rat(1) - epsilon;
  for (const auto& [k, _] : rows.front().sigma_le) {
    bool mono = true;
    Rat prev(-1);
    Rat final_ratio(0);
    for (const SweepRow& row : rows) {
      Rat ratio = row.n_feasible > 0
                      ? make_rat(Int(long(row.sigma_le.at(k))), Int(long(row.n_feasible)))
                      : Rat(0);
      if (ratio < prev) mono = false;
      prev = ratio;
      final_ratio = ratio;
    }
    if (!mono) est.non_monotone_k.push_back(k);
    if (!est.k_hat && mono && final_ratio >= target) est.k_hat = k;
  }
  return est;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "t,mode,n_box,n_feasible,n_covered,k,n_sigma_le_k,ratio_num,ratio_den\n";
  for (const SweepRow& row : rows) {
    std::string mode =
        row.exhaustive ? "exhaustive"
                       : "sampled(size=" + std::to_string(row.sample_size) +
                             ";seed=" + std::to_string(row.seed) + ")";
    for (const auto& [k, cnt] : row.sigma_le) {
      out << row.t << ',' << mode << ',' << row.n_box.get_str() << ','
          << row.n_feasible << ',' << row.n_covered << ',' << k << ',' << cnt
          << ',' << cnt << ',' << row.n_feasible << '\n';
    }
  }
}

}  // namespace sparsebound
