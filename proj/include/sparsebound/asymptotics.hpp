#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>

#include "sparsebound/oracle.hpp"
#include "sparsebound/sparse_solver.hpp"

namespace sparsebound {

// One row of a density sweep over the box {-t..t}^m. Counts are exact in
// exhaustive mode; in sampled mode they refer to the drawn sample, whose size
// and seed are recorded. sigma_le holds oracle-exact counts of feasible b
// with sigma(A,b) <= k; cert_le holds the certificate-based counts (covered b
// whose certificate support is <= k). Right-hand sides whose exact class the
// oracle could not settle under the caps are tallied in n_unknown and folded
// into neither count.
struct SweepRow {
  long long t = 0;
  bool exhaustive = true;
  long long sample_size = 0;
  std::uint64_t seed = 0;
  Int n_box;
  long long n_feasible = 0;
  long long n_covered = 0;
  long long n_uncovered = 0;
  long long n_unknown = 0;
  std::map<unsigned, long long> sigma_le;
  std::map<unsigned, long long> cert_le;
};

// Sweep the boxes of the schedule. Boxes with at most caps.box points are
// enumerated exhaustively; larger ones are sampled uniformly (sample_size
// points, reproducible under the seed). Feasibility runs through the solver
// fast path with the oracle as fallback for uncovered right-hand sides.
std::vector<SweepRow> density_sweep(const Plan& plan,
                                    const std::vector<long long>& t_schedule,
                                    const std::vector<unsigned>& k_list,
                                    const Caps& caps, std::uint64_t seed,
                                    long long sample_size = 100'000);

// Exact number of lattice points in t * P, where P is the parallelepiped
// spanned by the (linearly independent) generators with coefficients in
// [0,1]. Counted by exhaustive scan in lattice coordinates.
Int ehrhart_count(const IntegerMatrix& lattice_basis, const std::vector<Vec>& generators,
                  long long t, const Caps& caps = {});

// The exact fraction of box lattice points of the subcone union that the
// translated subcones retain: |box ∩ Λ ∩ ∪(K_i + z_i)| / |box ∩ Λ ∩ ∪K_i|.
Rat density_ratio(const Plan& plan, long long t, const Caps& caps = {});
Rat density_ratio(const Lattice& lambda,
                 const std::vector<std::pair<SimplicialCone, Vec>>& translated,
                 long long t, const Caps& caps = {});

enum class PrimorialKind { Atilde, A, B };

// Instance family built from pairwise products of distinct primes: the row
// [q_1 .. q_d, -delta] with q_i = delta / p_i, its block embedding with an
// identity corner, and the stacked variant whose extra unimodular block
// forces a zero minimum prime-factor count.
struct PrimorialInstance {
  PrimorialKind kind = PrimorialKind::Atilde;
  int m = 1, d = 1;
  std::vector<Int> primes, q;
  Int delta;
  Int frobenius;  // of the q values
  IntegerMatrix matrix{1, 1};
};

PrimorialInstance gen_primorial(PrimorialKind kind, int m, int d,
                                const std::vector<Int>& primes);

// Finite-data estimate of the asymptotic support: the smallest k whose exact
// ratio is at least 1 - epsilon at the largest t and nondecreasing across
// the schedule. An estimate, never a proof.
struct SigmaAsyEstimate {
  std::optional<unsigned> k_hat;
  std::vector<unsigned> non_monotone_k;
  bool any_sampled = false;
  bool any_unknown = false;
};

SigmaAsyEstimate sigma_asy_estimate(const std::vector<SweepRow>& rows,
                                    const Rat& epsilon);

// CSV with header t,mode,n_box,n_feasible,n_covered,k,n_sigma_le_k,ratio_num,
// ratio_den — one line per (t, k), counts exact, the ratio as an integer
// fraction.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace sparsebound
