#pragma once

#include <map>

#include "sparsebound/exact_linalg.hpp"
#include "sparsebound/matrix.hpp"

namespace sparsebound {

// An element of the finite group of residues modulo the column lattice of an
// invertible matrix w. `vec` is the canonical lift: the unique integer point
// of the fundamental parallelepiped {w l : l in [0,1)^m} in the element's
// residue class. `coords` is the element's class in the Smith decomposition
// Z_{d_1} x ... x Z_{d_m}.
struct GroupElement {
  Vec vec;
  std::vector<Int> coords;

  bool operator==(const GroupElement& o) const { return vec == o.vec; }
};

// The group of integer residues of a fundamental parallelepiped. The order
// equals |det(w)|, and the Smith coordinate map is a homomorphism from Z^m
// whose kernel is exactly the column lattice of w.
class ResidueGroup {
 public:
  explicit ResidueGroup(IntegerMatrix w, Caps caps = {});

  int dim() const { return w_.rows(); }
  const IntegerMatrix& w() const { return w_; }
  const Int& order() const { return order_; }
  const std::vector<Int>& snf_diag() const { return snf_diag_; }
  const IntegerMatrix& snf_row_transform() const { return snf_u_; }

  // The unique parallelepiped point congruent to b modulo the column lattice.
  GroupElement residue(const Vec& b) const;

  // Group addition: residue(g.vec + h.vec). Both operands must be canonical
  // lifts belonging to this group's parallelepiped.
  GroupElement add(const GroupElement& g, const GroupElement& h) const;

  GroupElement identity_element() const;

  // All elements, as canonical lifts. Requires order() within the group cap.
  std::vector<GroupElement> enumerate() const;

  // Whether g lies in the subgroup generated by the residues of `generators`,
  // decided as membership of g.vec in the lattice spanned by the generators
  // together with the columns of w. An empty list denotes the trivial
  // subgroup.
  bool subgroup_contains(const std::vector<Vec>& generators,
                         const GroupElement& g) const;

  // For every element of the subgroup generated by `generators`, a vector of
  // nonnegative coefficients p with residue(generators * p) equal to that
  // element. Breadth-first closure over the Cayley graph from the identity;
  // the key is the element's canonical lift.
  std::map<Vec, std::vector<Int>, LexLess> nonneg_reach(
      const std::vector<Vec>& generators) const;

  // Greedy generator chain: scan candidates in order and keep each one whose
  // residue lies outside the subgroup generated so far. The result generates
  // the same subgroup as the full candidate list, and its size is at most the
  // number of prime factors of |det(w)|. Returns indices into `candidates`.
  std::vector<std::size_t> select_generators(
      const std::vector<Vec>& candidates) const;

  // Exact coordinates of x in the basis w (helper for callers that need the
  // integral translation part of a residue decomposition).
  QVec basis_coordinates(const Vec& x) const;

 private:
  Vec canonical_lift(const Vec& b) const;
  std::vector<Int> snf_coords(const Vec& v) const;
  void check_member(const GroupElement& g) const;

  IntegerMatrix w_;
  IntegerMatrix adj_;  // adjugate of w: adj_ * x = det * w^{-1} x
  Int det_;
  Int order_;
  std::vector<Int> snf_diag_;
  IntegerMatrix snf_u_;
  Caps caps_;
};

}  // namespace sparsebound
