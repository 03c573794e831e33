#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "selfloc/reference_checks.hpp"
#include "selfloc/simplex.hpp"

using namespace selfloc;

namespace {

bool satisfies(const std::vector<std::vector<Rat>>& A, const std::vector<Rat>& b,
               const std::vector<Rat>& x) {
  for (std::size_t i = 0; i < A.size(); ++i) {
    Rat dot = 0;
    for (std::size_t j = 0; j < x.size(); ++j) dot += A[i][j] * x[j];
    if (dot > b[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("empty system is trivially feasible", "[simplex]") {
  const LpResult r = feasible_point({}, {});
  CHECK(r.feasible);
  CHECK(r.x.empty());
}

TEST_CASE("interval constraints", "[simplex]") {
  // 3 <= x <= 5
  const LpResult r = feasible_point({{Rat(1)}, {Rat(-1)}}, {Rat(5), Rat(-3)});
  REQUIRE(r.feasible);
  REQUIRE(r.x.size() == 1);
  CHECK(r.x[0] >= 3);
  CHECK(r.x[0] <= 5);

  // x <= 1 and x >= 2 cannot both hold
  const LpResult bad = feasible_point({{Rat(1)}, {Rat(-1)}}, {Rat(1), Rat(-2)});
  CHECK_FALSE(bad.feasible);
  CHECK(bad.x.empty());
}

TEST_CASE("solutions may be negative", "[simplex]") {
  const LpResult r = feasible_point({{Rat(1)}}, {Rat(-5)});
  REQUIRE(r.feasible);
  CHECK(r.x[0] <= -5);
}

TEST_CASE("equalities encoded as inequality pairs", "[simplex]") {
  // x + y = 1 together with x = y forces x = y = 1/2
  const std::vector<std::vector<Rat>> A = {
      {Rat(1), Rat(1)}, {Rat(-1), Rat(-1)}, {Rat(1), Rat(-1)}, {Rat(-1), Rat(1)}};
  const std::vector<Rat> b = {Rat(1), Rat(-1), Rat(0), Rat(0)};
  const LpResult r = feasible_point(A, b);
  REQUIRE(r.feasible);
  CHECK(r.x[0] == Rat(1, 2));
  CHECK(r.x[1] == Rat(1, 2));
}

TEST_CASE("all-zero rows", "[simplex]") {
  CHECK(feasible_point({{Rat(0), Rat(0)}}, {Rat(0)}).feasible);
  CHECK_FALSE(feasible_point({{Rat(0), Rat(0)}}, {Rat(-1)}).feasible);
}

TEST_CASE("generated feasible systems get a certified point", "[simplex]") {
  checkgen::Gen gen(41);
  for (int i = 0; i < 150; ++i) {
    const auto lp = gen.feasible_lp();
    const LpResult r = feasible_point(lp.A, lp.b);
    REQUIRE(r.feasible);
    REQUIRE(satisfies(lp.A, lp.b, r.x));
  }
}

TEST_CASE("generated Farkas systems are rejected", "[simplex]") {
  checkgen::Gen gen(43);
  for (int i = 0; i < 150; ++i) {
    const auto lp = gen.infeasible_lp();
    CHECK_FALSE(feasible_point(lp.A, lp.b).feasible);
  }
}

TEST_CASE("tableau growth beyond the bit budget aborts", "[simplex]") {
  try {
    feasible_point({{Rat(3)}}, {Rat(-7)}, 2);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code == Errc::numeric_overflow);
  }
  // the same system fits comfortably in the default budget
  const LpResult r = feasible_point({{Rat(3)}}, {Rat(-7)});
  REQUIRE(r.feasible);
  CHECK(3 * r.x[0] <= -7);
}

TEST_CASE("malformed shapes are internal errors", "[simplex]") {
  try {
    feasible_point({{Rat(1)}}, {});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code == Errc::internal);
  }
  try {
    feasible_point({{Rat(1), Rat(2)}, {Rat(1)}}, {Rat(1), Rat(1)});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code == Errc::internal);
  }
}
