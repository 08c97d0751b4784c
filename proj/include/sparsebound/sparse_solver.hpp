#pragma once

#include <iosfwd>
#include <map>
#include <optional>

#include "sparsebound/exact_linalg.hpp"
#include "sparsebound/geometry.hpp"
#include "sparsebound/matrix.hpp"
#include "sparsebound/residue_group.hpp"

namespace sparsebound {

enum class BoundMode { I, II };

// One coset-table entry: a representative x_g congruent to the key modulo
// the subcone lattice, written both as nonnegative generator coefficients
// (x_g = sum p_l w^l) and expanded to a full nonnegative column combination
// of A. tau holds the integer subcone coordinates of x_g minus the key.
struct CosetEntry {
  Vec x_g;
  std::vector<Int> gen_coeffs;
  Vec tau;
  std::vector<Int> expansion;
};

// Everything solve_sparse needs for one simplicial subcone: its residue
// group, the selected generator columns, the coset table over the subgroup
// generated by the columns of A, and the translate that pushes the cone
// inside all representative translates.
struct SubconePlan {
  SimplicialCone cone;
  ResidueGroup group;
  std::vector<int> a_cols;  // column indices of the cone basis within A
  unsigned phi;
  std::vector<std::size_t> generator_cols;
  std::map<Vec, CosetEntry, LexLess> coset_table;
  Vec shift;
};

struct Plan {
  IntegerMatrix a;
  std::vector<int> w_cols;
  BoundMode mode;
  Lattice lambda;  // right-hand sides outside this lattice are infeasible
  unsigned phi_max = 0, phi_min = 0;
  std::vector<SubconePlan> subcones;
};

// Builds per-subcone plans for the column subset W of A (cone(A) must equal
// cone(W)). Mode II sorts the subcones by their prime-factor count and
// relocates every representative of the later subcones into the translated
// first subcone, so their expansions route through it.
Plan build_plan(const IntegerMatrix& a, const std::vector<int>& w_cols,
                BoundMode mode, const Caps& caps = {});
// W defaults to all of A.
Plan build_plan(const IntegerMatrix& a, BoundMode mode, const Caps& caps = {});

struct SparseCertificate {
  Vec x;  // nonnegative, A x = b
  std::vector<int> support;
  unsigned bound_claimed = 0;
  BoundMode mode = BoundMode::I;
  int subcone_index = -1;
};

enum class SolveStatus { Certificate, Infeasible, Uncovered };

struct SolveOutcome {
  SolveStatus status;
  std::optional<SparseCertificate> cert;
};

// Certificate, Infeasible (b outside the feasibility lattice, so the system
// has no solution at all), or Uncovered (b is in the lattice and in cone(A)
// or outside it, but in no translated subcone; callers fall back to an exact
// oracle for these).
SolveOutcome solve_sparse(const Plan& plan, const Vec& b);

// Independent re-check of a certificate: A x = b, x nonnegative integer,
// and the support fits the claimed bound. Shares no state with the solver.
bool verify_certificate(const IntegerMatrix& a, const Vec& b,
                        const SparseCertificate& cert);

// Support bounds derived from the minor statistics, all held exactly. The
// base-2 logarithm relaxations are reported as integer ceilings together
// with the quantities they bound.
struct SupportBoundsReport {
  int m = 0;
  unsigned mode_i_bound = 0;    // m + phi_max
  unsigned mode_ii_bound = 0;   // 2m + phi_min
  long log2_delta_max_ceil = 0; // smallest k with 2^k >= delta_max
  long log2_delta_min_ceil = 0;
  // m + ceil(log2(sqrt(gram_det) / g)), from the determinant bound.
  long det_bound = 0;
  // g-divided variants, informational only: m + ceil(log2(delta_max / g))
  // and 2m + ceil(log2(delta_min / g)).
  long g_adjusted_i = 0;
  long g_adjusted_ii = 0;
  Int delta_max, delta_min, minor_gcd, gram_det;
  unsigned phi_max = 0, phi_min = 0;
};

SupportBoundsReport support_bounds(const MinorStats& stats, int m);

// Smallest k >= 0 with 2^k >= x (x >= 1).
long ceil_log2(const Int& x);

// Line-oriented certificate records, the wire format consumed by `verify`.
std::string format_certificate(const Vec& b, const SparseCertificate& cert);
struct ParsedCertificate {
  Vec b;
  SparseCertificate cert;
};
ParsedCertificate parse_certificate(std::istream& in);

}  // namespace sparsebound
