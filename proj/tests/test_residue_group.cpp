#include "sparsebound/residue_group.hpp"

#include "doctest.h"
#include "test_util.hpp"

using namespace sparsebound;

namespace {

IntegerMatrix mat(std::initializer_list<Vec> rows) {
  return IntegerMatrix::from_rows(std::vector<Vec>(rows));
}

// Independent subgroup oracle: close the generated residues under addition.
std::set<Vec, LexLess> closure(const ResidueGroup& g, const std::vector<Vec>& gens) {
  std::set<Vec, LexLess> seen;
  seen.insert(Vec(g.dim(), Int(0)));
  bool grew = true;
  std::vector<Vec> lifted;
  for (const Vec& v : gens) lifted.push_back(g.residue(v).vec);
  while (grew) {
    grew = false;
    std::vector<Vec> cur(seen.begin(), seen.end());
    for (const Vec& x : cur)
      for (const Vec& l : lifted) {
        Vec nxt = g.residue(vec_add(x, l)).vec;
        if (seen.insert(nxt).second) grew = true;
      }
  }
  return seen;
}

}  // namespace

TEST_CASE("residue examples") {
  ResidueGroup id(IntegerMatrix::identity(2));
  CHECK(id.residue({17, -4}).vec == Vec{0, 0});

  ResidueGroup two(mat({{2}}));
  CHECK(two.residue({3}).vec == Vec{1});

  ResidueGroup diag(mat({{2, 0}, {0, 3}}));
  CHECK(diag.residue({3, 4}).vec == Vec{1, 1});

  CHECK_THROWS_AS(diag.residue({1}), std::invalid_argument);
}

TEST_CASE("group order and snf invariants") {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 40; ++it) {
    int n = sbtest::rand_range(rng, 1, 3);
    IntegerMatrix w = sbtest::rand_invertible(rng, n, -6, 6, Int(200));
    ResidueGroup g(w);
    CHECK(g.order() == abs(det(w)));
    Int prod = 1;
    for (const Int& d : g.snf_diag()) {
      CHECK(d > 0);
      prod *= d;
    }
    CHECK(prod == g.order());
    for (std::size_t i = 0; i + 1 < g.snf_diag().size(); ++i)
      CHECK(g.snf_diag()[i + 1] % g.snf_diag()[i] == 0);

    // Coordinate map: homomorphism with kernel the column lattice.
    Lattice lat = Lattice::from_columns(w);
    for (int jt = 0; jt < 20; ++jt) {
      Vec a = sbtest::rand_vec(rng, n, -30, 30);
      Vec b = sbtest::rand_vec(rng, n, -30, 30);
      GroupElement ra = g.residue(a), rb = g.residue(b);
      CHECK(g.residue(vec_add(a, b)).vec == g.add(ra, rb).vec);
      bool zero = vec_is_zero(g.residue(a).vec);
      CHECK(zero == lat.contains(a));
    }
  }
}

TEST_CASE("group_add examples") {
  ResidueGroup four(mat({{4}}));
  for (long v = 0; v < 4; ++v) {
    GroupElement g = four.residue({Int(v)});
    CHECK(four.add(g, four.identity_element()).vec == g.vec);
  }
  CHECK(four.add(four.residue({1}), four.residue({3})).vec == Vec{0});

  ResidueGroup diag(mat({{2, 0}, {0, 3}}));
  CHECK(diag.add(diag.residue({1, 1}), diag.residue({1, 2})).vec == Vec{0, 0});

  // A vector outside the parallelepiped is rejected.
  GroupElement bogus{{Int(7)}, {Int(3)}};
  CHECK_THROWS_AS(four.add(bogus, four.identity_element()), std::invalid_argument);
}

TEST_CASE("enumerate_group") {
  CHECK(ResidueGroup(IntegerMatrix::identity(2)).enumerate().size() == 1);

  auto four = ResidueGroup(mat({{2, 0}, {0, 2}})).enumerate();
  CHECK(four.size() == 4);

  auto z4 = ResidueGroup(mat({{4}})).enumerate();
  std::set<Vec, LexLess> vals;
  for (const GroupElement& e : z4) vals.insert(e.vec);
  CHECK(vals == std::set<Vec, LexLess>{{Int(0)}, {Int(1)}, {Int(2)}, {Int(3)}});

  Caps tight;
  tight.group = 3;
  CHECK_THROWS_AS(ResidueGroup(mat({{4}}), tight).enumerate(), cap_exceeded);
}

TEST_CASE("enumerate is closed under addition") {
  std::mt19937_64 rng(22);
  IntegerMatrix w = sbtest::rand_invertible(rng, 2, -5, 5, Int(24));
  ResidueGroup g(w);
  auto elems = g.enumerate();
  std::set<Vec, LexLess> all;
  for (const GroupElement& e : elems) all.insert(e.vec);
  for (const GroupElement& x : elems)
    for (const GroupElement& y : elems) CHECK(all.count(g.add(x, y).vec) == 1);
}

TEST_CASE("subgroup_contains") {
  ResidueGroup four(mat({{4}}));
  GroupElement zero = four.identity_element();
  GroupElement one = four.residue({1});
  GroupElement two = four.residue({2});

  CHECK(four.subgroup_contains({}, zero));
  CHECK_FALSE(four.subgroup_contains({}, one));
  CHECK(four.subgroup_contains({{Int(2)}}, two));
  CHECK_FALSE(four.subgroup_contains({{Int(2)}}, one));
  for (long v = 0; v < 4; ++v)
    CHECK(four.subgroup_contains({{Int(1)}}, four.residue({Int(v)})));
}

TEST_CASE("nonneg_reach examples") {
  ResidueGroup four(mat({{4}}));
  auto empty = four.nonneg_reach({});
  CHECK(empty.size() == 1);
  CHECK(empty.at(Vec{0}).empty());

  auto r = four.nonneg_reach({{Int(3)}});
  REQUIRE(r.size() == 4);
  CHECK(r.at(Vec{0}) == std::vector<Int>{0});
  CHECK(r.at(Vec{3}) == std::vector<Int>{1});
  CHECK(r.at(Vec{2}) == std::vector<Int>{2});
  CHECK(r.at(Vec{1}) == std::vector<Int>{3});

  ResidueGroup diag(mat({{2, 0}, {0, 3}}));
  auto r6 = diag.nonneg_reach({{Int(1), Int(1)}});
  CHECK(r6.size() == 6);
  for (const auto& [lift, p] : r6) {
    REQUIRE(p.size() == 1);
    CHECK(p[0] >= 0);
    CHECK(p[0] <= 5);
  }
}

TEST_CASE("nonneg_reach covers the closure subgroup") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 25; ++it) {
    int n = sbtest::rand_range(rng, 1, 2);
    IntegerMatrix w = sbtest::rand_invertible(rng, n, -5, 5, Int(60));
    ResidueGroup g(w);
    int ngen = int(sbtest::rand_range(rng, 0, 2));
    std::vector<Vec> gens;
    for (int i = 0; i < ngen; ++i) gens.push_back(sbtest::rand_vec(rng, n, -10, 10));

    auto reach = g.nonneg_reach(gens);
    auto oracle = closure(g, gens);
    REQUIRE(reach.size() == oracle.size());
    for (const auto& [lift, p] : reach) {
      CHECK(oracle.count(lift) == 1);
      // p really reaches the element.
      Vec combo(n, Int(0));
      for (std::size_t j = 0; j < gens.size(); ++j) {
        CHECK(p[j] >= 0);
        for (int i = 0; i < n; ++i) combo[i] += p[j] * gens[j][i];
      }
      CHECK(g.residue(combo).vec == lift);
    }
  }
}

TEST_CASE("select_generators examples") {
  ResidueGroup four(mat({{4}}));
  CHECK(four.select_generators({{Int(1)}}) == std::vector<std::size_t>{0});
  auto sel2 = four.select_generators({{Int(2)}});
  CHECK(sel2 == std::vector<std::size_t>{0});
  CHECK(ResidueGroup(IntegerMatrix::identity(2))
            .select_generators({{Int(1), Int(0)}, {Int(0), Int(1)}})
            .empty());
}

TEST_CASE("select_generators chain bound and subgroup equality") {
  std::mt19937_64 rng(24);
  for (int it = 0; it < 25; ++it) {
    int n = sbtest::rand_range(rng, 1, 2);
    IntegerMatrix w = sbtest::rand_invertible(rng, n, -5, 5, Int(100));
    ResidueGroup g(w);
    int ncand = int(sbtest::rand_range(rng, 1, 4));
    std::vector<Vec> cands;
    for (int i = 0; i < ncand; ++i) cands.push_back(sbtest::rand_vec(rng, n, -10, 10));

    auto sel = g.select_generators(cands);
    CHECK(sel.size() <= omega(g.order()));
    std::vector<Vec> selected;
    for (std::size_t i : sel) selected.push_back(cands[i]);
    CHECK(closure(g, selected) == closure(g, cands));
  }
}
