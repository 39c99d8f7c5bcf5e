#include <doctest.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "rigcheck/matrix_model.hpp"

using namespace rig;

namespace {
#include "oracle_values.inc"

const ObjTerm a = ObjTerm::gen("a"), b = ObjTerm::gen("b"), c = ObjTerm::gen("c"), d = ObjTerm::gen("d");
const ObjTerm one = ObjTerm::one(), zero = ObjTerm::zero();

SparseMat dense(const std::vector<std::vector<int>>& rows) {
  std::vector<std::vector<Rational>> r;
  for (const auto& row : rows) {
    r.emplace_back();
    for (int v : row) r.back().push_back(Rational(v));
  }
  return SparseMat::fromDense(r);
}

CMat unitMatrix(int n, int i, int j) {
  CMat m = CMat::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}
}  // namespace

TEST_CASE("structural matrices match the label oracle") {
  ModelAssign m;
  m.genDims = oracleDims();
  for (const auto& mc : matrixCases(a, b, c, d, one, zero)) {
    CAPTURE(mc.mor.str());
    const SparseMat got = evalMor(mc.mor, m);
    const SparseMat want = dense(mc.expected);
    CHECK(got.rows() == want.rows());
    CHECK(got.cols() == want.cols());
    CHECK(got == want);
  }
}

TEST_CASE("dimensions of objects") {
  ModelAssign m;
  m.genDims = {{"a", 2}, {"b", 3}};
  CHECK(dimOf((a + b) * (a + one), m) == 15);
  CHECK(dimOf(zero * a, m) == 0);
  CHECK_THROWS_AS(dimOf(c, m), Error);
}

TEST_CASE("sparse arithmetic") {
  const SparseMat x = dense({{1, 2}, {0, 3}});
  const SparseMat y = dense({{0, 1}, {1, 0}});
  CHECK(x * y == dense({{2, 1}, {3, 0}}));
  CHECK(x.transpose() == dense({{1, 0}, {2, 3}}));
  CHECK(x.nonZeros() == 3);
  CHECK(kron(y, SparseMat::identity(1)) == y);
  CHECK(kron(SparseMat::identity(2), y) == dense({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}));
  CHECK(blockDiag(x, SparseMat::identity(1)) == dense({{1, 2, 0}, {0, 3, 0}, {0, 0, 1}}));
  CHECK(x.maxAbsDiff(y) == doctest::Approx(3.0));
  CHECK_THROWS_AS(x * SparseMat::identity(3), Error);
  CHECK_THROWS_AS(SparseMat::fromDense({{Rational(1)}, {Rational(1), Rational(2)}}), Error);
}

TEST_CASE("setting entries to zero removes them") {
  SparseMat m(2, 2);
  m.set(0, 1, Rational(5));
  m.set(0, 0, Rational(-1, 2));
  CHECK(m.nonZeros() == 2);
  m.set(0, 1, Rational(0));
  CHECK(m.nonZeros() == 1);
  CHECK(m.get(0, 0) == Rational(-1, 2));
  CHECK_THROWS_AS(m.set(2, 0, Rational(1)), Error);
}

TEST_CASE("named morphisms need a matrix of the right shape") {
  const MorTerm f = MorTerm::named("f", a, b);
  ModelAssign m;
  m.genDims = {{"a", 1}, {"b", 2}};
  CHECK_THROWS_AS(evalMor(f, m), Error);
  m.genMors["f"] = dense({{1, 2}});
  CHECK_THROWS_AS(evalMor(f, m), Error);
  m.genMors["f"] = dense({{1}, {2}});
  CHECK(evalMor(mor::comp({mor::id(b), f}), m) == dense({{1}, {2}}));
}

TEST_CASE("random models are reproducible and honour fixed entries") {
  const MorTerm f = MorTerm::named("f", a, b * b);
  ModelAssign fixed;
  fixed.genDims["b"] = 1;
  const auto m1 = randomModels({"a", "b"}, 4, 3, 99, {f}, &fixed);
  const auto m2 = randomModels({"a", "b"}, 4, 3, 99, {f}, &fixed);
  REQUIRE(m1.size() == 4);
  for (std::size_t i = 0; i < m1.size(); ++i) {
    CHECK(m1[i].genDims == m2[i].genDims);
    CHECK(m1[i].genMors.at("f") == m2[i].genMors.at("f"));
    CHECK(m1[i].genDims.at("b") == 1);
    CHECK(m1[i].genMors.at("f").rows() == 1);
    CHECK(m1[i].genDims.at("a") >= 1);
    CHECK(m1[i].genDims.at("a") <= 3);
  }
  CHECK_THROWS_AS(randomModels({"a"}, 1, 0, 1), Error);
}

TEST_CASE("property: naturality of the symmetry holds in every model") {
  const MorTerm f = MorTerm::named("f", a, b), g = MorTerm::named("g", c, d);
  const MorTerm lhs = mor::comp({mor::xiT(b, d), mor::ten(f, g)});
  const MorTerm rhs = mor::comp({mor::ten(g, f), mor::xiT(a, c)});
  const MorTerm plusL = mor::comp({mor::xiP(b, d), mor::plus(f, g)});
  const MorTerm plusR = mor::comp({mor::plus(g, f), mor::xiP(a, c)});
  for (const auto& m : randomModels({"a", "b", "c", "d"}, 25, 4, 5, {f, g})) {
    CHECK(equalInModel(lhs, rhs, m));
    CHECK(equalInModel(plusL, plusR, m));
  }
}

TEST_CASE("matrix-unit *-homomorphism check") {
  // Corner embedding of M_2 into M_3 is a *-homomorphism.
  std::vector<std::vector<CMat>> img(2, std::vector<CMat>(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) img[i][j] = unitMatrix(3, i, j);
  CHECK(checkStarHom(2, img, 0.0));
  // Breaking the adjoint relation is detected.
  img[0][1] = 2.0 * unitMatrix(3, 0, 1);
  std::string why;
  CHECK_FALSE(checkStarHom(2, img, 1e-12, &why));
  CHECK_FALSE(why.empty());
  CHECK_THROWS_AS(checkStarHom(3, img, 0.0), Error);
}
