#include "sparsebound/asymptotics.hpp"

#include <sstream>

#include "doctest.h"
#include "test_util.hpp"

using namespace sparsebound;

namespace {

IntegerMatrix mat(std::initializer_list<Vec> rows) {
  return IntegerMatrix::from_rows(std::vector<Vec>(rows));
}

IntegerMatrix stacked() { return mat({{1, 0, 0, 0}, {0, 3, 2, -6}}); }

}  // namespace

TEST_CASE("density_sweep on the identity") {
  Plan plan = build_plan(IntegerMatrix::identity(2), BoundMode::I);
  auto rows = density_sweep(plan, {3}, {1, 2}, Caps{}, 0);
  REQUIRE(rows.size() == 1);
  const SweepRow& r = rows[0];
  CHECK(r.exhaustive);
  CHECK(r.n_box == 49);
  CHECK(r.n_feasible == 16);  // the nonnegative quadrant of the box
  CHECK(r.n_covered == 16);
  CHECK(r.sigma_le.at(2) == 16);
  CHECK(r.n_unknown == 0);
}

TEST_CASE("density_sweep rows are internally consistent") {
  Plan plan = build_plan(stacked(), BoundMode::I);
  auto rows = density_sweep(plan, {6, 12}, {2, 3, 4}, Caps{}, 0);
  REQUIRE(rows.size() == 2);
  for (const SweepRow& r : rows) {
    long long prev = -1;
    for (const auto& [k, cnt] : r.sigma_le) {
      CHECK(cnt >= prev);
      CHECK(cnt <= r.n_feasible);
      prev = cnt;
    }
    CHECK(r.n_covered <= r.n_feasible);
    CHECK(r.n_unknown == 0);
  }
  // Feasible set is {b1 >= 0} x Z: counts (t+1)(2t+1).
  CHECK(rows[0].n_feasible == 7 * 13);
  CHECK(rows[1].n_feasible == 13 * 25);
  // Every feasible b has a solution on at most the 4 columns.
  CHECK(rows[0].sigma_le.at(4) == rows[0].n_feasible);
  CHECK(rows[1].sigma_le.at(4) == rows[1].n_feasible);
}

TEST_CASE("sampled sweeps replay bit for bit under a seed") {
  Plan plan = build_plan(stacked(), BoundMode::I);
  Caps small;
  small.box = 100;  // force sampling at t = 6
  auto a = density_sweep(plan, {6}, {3, 4}, small, 7, 500);
  auto b = density_sweep(plan, {6}, {3, 4}, small, 7, 500);
  REQUIRE(a.size() == 1);
  CHECK_FALSE(a[0].exhaustive);
  CHECK(a[0].sample_size == 500);
  CHECK(a[0].n_feasible == b[0].n_feasible);
  CHECK(a[0].sigma_le == b[0].sigma_le);
  CHECK(a[0].cert_le == b[0].cert_le);

  auto c = density_sweep(plan, {6}, {3, 4}, small, 8, 500);
  CHECK(c[0].n_feasible != a[0].n_feasible);  // different seed, different draw
}

TEST_CASE("ehrhart_count examples") {
  IntegerMatrix z2 = IntegerMatrix::identity(2);
  std::vector<Vec> unit = {{Int(1), Int(0)}, {Int(0), Int(1)}};
  CHECK(ehrhart_count(z2, unit, 3) == 16);

  std::vector<Vec> segment = {{Int(1), Int(0)}};
  CHECK(ehrhart_count(z2, segment, 5) == 6);

  IntegerMatrix sub = mat({{2, 0}, {0, 1}});
  std::vector<Vec> gens = {{Int(2), Int(0)}, {Int(0), Int(1)}};
  CHECK(ehrhart_count(sub, gens, 2) == 9);

  CHECK(ehrhart_count(z2, unit, 0) == 1);
  CHECK_THROWS_AS(ehrhart_count(z2, {{Int(1), Int(1)}, {Int(2), Int(2)}}, 1),
                  std::invalid_argument);
}

TEST_CASE("ehrhart_count dilation polynomial for unit cubes") {
  for (int m = 1; m <= 3; ++m) {
    IntegerMatrix zm = IntegerMatrix::identity(m);
    std::vector<Vec> gens;
    for (int i = 0; i < m; ++i) {
      Vec e(m, Int(0));
      e[i] = 1;
      gens.push_back(e);
    }
    for (long long t : {1LL, 4LL, 20LL}) {
      Int expect = 1;
      for (int i = 0; i < m; ++i) expect *= Int(long(t + 1));
      CHECK(ehrhart_count(zm, gens, t) == expect);
    }
  }
}

TEST_CASE("density_ratio examples") {
  Plan id = build_plan(IntegerMatrix::identity(2), BoundMode::I);
  CHECK(density_ratio(id, 5) == Rat(1));
  CHECK(density_ratio(id, 10) == Rat(1));

  // Orthant with shift (1,1) over Z^2.
  Lattice z2 = Lattice::from_columns(IntegerMatrix::identity(2));
  SimplicialCone orthant(IntegerMatrix::identity(2));
  std::vector<std::pair<SimplicialCone, Vec>> tr = {{orthant, Vec{1, 1}}};
  CHECK(density_ratio(z2, tr, 10) == make_rat(Int(100), Int(121)));
}

TEST_CASE("density_ratio on the stacked plan approaches one") {
  Plan plan = build_plan(stacked(), BoundMode::I);
  std::vector<Rat> ratios;
  for (long long t : {6LL, 12LL, 24LL, 48LL}) ratios.push_back(density_ratio(plan, t));
  for (std::size_t i = 0; i + 1 < ratios.size(); ++i) CHECK(ratios[i] <= ratios[i + 1]);
  CHECK(ratios.back() >= make_rat(Int(9), Int(10)));
  CHECK(ratios.back() <= 1);

  // Cross-check the largest box by a direct two-loop scan.
  long t = 48, num = 0, den = 0;
  for (long x = -t; x <= t; ++x)
    for (long y = -t; y <= t; ++y) {
      Vec b{Int(x), Int(y)};
      if (!plan.lambda.contains(b)) continue;
      bool in_cone = false, in_tr = false;
      for (const SubconePlan& sp : plan.subcones) {
        if (sp.cone.contains(b)) in_cone = true;
        if (sp.cone.contains(vec_sub(b, sp.shift))) in_tr = true;
      }
      if (in_cone) ++den;
      if (in_tr) ++num;
    }
  CHECK(density_ratio(plan, t) == make_rat(Int(num), Int(den)));
}

TEST_CASE("gen_primorial shapes and values") {
  PrimorialInstance at = gen_primorial(PrimorialKind::Atilde, 1, 2, {Int(2), Int(3)});
  CHECK(at.matrix == mat({{3, 2, -6}}));
  CHECK(at.delta == 6);
  CHECK(at.frobenius == 1);

  PrimorialInstance a = gen_primorial(PrimorialKind::A, 2, 2, {Int(2), Int(3)});
  CHECK(a.matrix == stacked());
  CHECK(minor_stats(a.matrix).phi_max == 2);

  PrimorialInstance b = gen_primorial(PrimorialKind::B, 1, 4,
                                      {Int(2), Int(3), Int(5), Int(7)});
  CHECK(b.matrix.rows() == 2);
  CHECK(b.matrix.cols() == 7);
  CHECK(minor_stats(b.matrix).phi_min == 0);
  CHECK(b.q == std::vector<Int>{105, 70, 42, 30});
  CHECK(abs(det(b.matrix.columns({0, 1}))) == 1);

  CHECK_THROWS_AS(gen_primorial(PrimorialKind::B, 1, 3, {Int(2), Int(3), Int(5)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(gen_primorial(PrimorialKind::A, 1, 2, {Int(2), Int(4)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(gen_primorial(PrimorialKind::A, 1, 2, {Int(3), Int(2)}),
                  std::invalid_argument);
}

TEST_CASE("block instance hard class has sigma m + d") {
  // For the m=2, d=2 block instance, right-hand sides with positive first
  // coordinate and negative last coordinate congruent to 1 mod delta need
  // every primorial column plus the identity column.
  PrimorialInstance inst = gen_primorial(PrimorialKind::A, 2, 2, {Int(2), Int(3)});
  SigmaOracle oracle(inst.matrix);
  for (long b1 : {1L, 3L})
    for (long b2 : {-5L, -11L, -17L}) {
      SigmaResult s = oracle.sigma({Int(b1), Int(b2)});
      REQUIRE(s.kind == SigmaResult::Kind::Finite);
      CHECK(s.value == 4);  // m + d
    }
}

TEST_CASE("gen_primorial kind A with one row equals the base row") {
  PrimorialInstance a1 = gen_primorial(PrimorialKind::A, 1, 2, {Int(2), Int(3)});
  PrimorialInstance at = gen_primorial(PrimorialKind::Atilde, 1, 2, {Int(2), Int(3)});
  CHECK(a1.matrix == at.matrix);
}

TEST_CASE("sigma_asy_estimate") {
  Plan id = build_plan(IntegerMatrix::identity(2), BoundMode::I);
  auto rows = density_sweep(id, {2, 4, 8}, {1, 2}, Caps{}, 0);
  SigmaAsyEstimate est = sigma_asy_estimate(rows, make_rat(Int(1), Int(100)));
  REQUIRE(est.k_hat.has_value());
  CHECK(*est.k_hat == 2);
  CHECK_FALSE(est.any_sampled);

  Plan at = build_plan(mat({{3, 2, -6}}), BoundMode::I);
  auto arows = density_sweep(at, {20, 40, 60}, {1, 2, 3}, Caps{}, 0);
  SigmaAsyEstimate aest = sigma_asy_estimate(arows, make_rat(Int(1), Int(100)));
  REQUIRE(aest.k_hat.has_value());
  CHECK(*aest.k_hat <= 3);

  CHECK_THROWS_AS(sigma_asy_estimate({rows[0]}, Rat(0)), std::invalid_argument);
}

TEST_CASE("sweep csv format") {
  Plan plan = build_plan(IntegerMatrix::identity(2), BoundMode::I);
  auto rows = density_sweep(plan, {2}, {2}, Caps{}, 0);
  std::ostringstream out;
  write_sweep_csv(out, rows);
  std::string text = out.str();
  CHECK(text.find("t,mode,n_box,n_feasible,n_covered,k,n_sigma_le_k,ratio_num,ratio_den\n") == 0);
  CHECK(text.find("2,exhaustive,25,9,9,2,9,9,9\n") != std::string::npos);
}
