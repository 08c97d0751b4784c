#pragma once

#include <map>
#include <optional>

#include "sparsebound/exact_linalg.hpp"
#include "sparsebound/matrix.hpp"

namespace sparsebound {

enum class Feas { Yes, No, Unknown };

struct FeasResult {
  Feas status = Feas::Unknown;
  std::optional<Vec> witness;  // nonnegative integer solution when Yes
  bool caps_hit = false;
};

// Exact minimum support of a nonnegative integer solution. Finite values
// carry a witness of exactly that support; Infinite means the system was
// proven infeasible; Unknown only appears when a work cap was hit.
struct SigmaResult {
  enum class Kind { Finite, Infinite, Unknown } kind = Kind::Unknown;
  unsigned value = 0;
  std::optional<Vec> witness;
  bool caps_hit = false;
  bool exhaustive = false;  // every smaller support was proven infeasible
};

// Bounded-cardinality support query used by sweeps: either the exact sigma
// when it is at most max_card, or a proof that it is greater.
struct SigmaUpTo {
  enum class Kind { Found, Greater, Infeasible, Unknown } kind = Kind::Unknown;
  unsigned value = 0;
  std::optional<Vec> witness;
};

// Ground-truth feasibility and support machinery for one constraint matrix.
// Decides nonemptiness of {x >= 0 integer : A x = b} by parametrizing the
// integer solutions through a column Hermite normal form and exhaustively
// enumerating the kernel coefficients inside exact Fourier-Motzkin bounds.
// Unbounded recession directions are truncated at a solution-size bound
// derived from the subdeterminants of [A | b], which preserves completeness.
//
// Instances cache per-column-subset data and are not safe for concurrent
// use; give each worker its own oracle.
class SigmaOracle {
 public:
  explicit SigmaOracle(IntegerMatrix a, Caps caps = {});

  const IntegerMatrix& matrix() const { return a_; }

  FeasResult feasible(const Vec& b);
  FeasResult feasible_columns(const std::vector<std::size_t>& cols, const Vec& b);

  SigmaResult sigma(const Vec& b);
  SigmaUpTo sigma_up_to(const Vec& b, unsigned max_card);

 private:
  struct SubsetParam {
    std::vector<std::size_t> cols;
    HnfResult hnf;
    std::vector<Vec> kernel;     // integer kernel basis of the subsystem
    std::vector<Int> max_minor;  // max |k x k minor| of the subsystem, k=0..
  };

  const SubsetParam& param_for(const std::vector<std::size_t>& cols);
  FeasResult feasible_param(const SubsetParam& p, const Vec& b);

  IntegerMatrix a_;
  Caps caps_;
  std::map<std::vector<std::size_t>, SubsetParam> cache_;
};

FeasResult feasible(const IntegerMatrix& a, const Vec& b, const Caps& caps = {});
SigmaResult sigma_exact(const IntegerMatrix& a, const Vec& b, const Caps& caps = {});

// Largest integer not representable as a nonnegative integer combination of
// the coins, by dynamic programming up to min(coins)*max(coins). Requires
// gcd(coins) == 1 and every coin >= 2.
Int frobenius_number(const std::vector<Int>& coins);

}  // namespace sparsebound
