#include <doctest.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "rigcheck/free_bimon.hpp"
#include "rigcheck/matrix_model.hpp"

using namespace rig;

namespace {
#include "oracle_values.inc"

const ObjTerm a = ObjTerm::gen("a"), b = ObjTerm::gen("b"), c = ObjTerm::gen("c"), d = ObjTerm::gen("d");
const ObjTerm one = ObjTerm::one(), zero = ObjTerm::zero();
}  // namespace

TEST_CASE("decision procedure agrees with the oracle verdicts") {
  for (const auto& v : verdictCases(a, b, c, d, one, zero)) {
    CAPTURE(v.lhs.str());
    CAPTURE(v.rhs.str());
    CHECK(decideEqual(v.lhs, v.rhs) == (v.equal ? Verdict::Equal : Verdict::Unequal));
  }
}

TEST_CASE("construction type-checks") {
  CHECK_THROWS_AS(mor::comp({mor::xiT(a, b), mor::xiT(a, b)}), Error);
  CHECK_THROWS_AS(MorTerm::structural(StructKind::AlphaT, {a, b}), Error);
  CHECK_THROWS_AS(decideEqual(mor::xiT(a, b), mor::id(a * b)), Error);
  const MorTerm f = mor::alphaT(a, b, c);
  CHECK(f.src() == (a * b) * c);
  CHECK(f.tgt() == a * (b * c));
  CHECK(mor::inv(f).src() == f.tgt());
  CHECK(typeOf(mor::deltaR(a, b, c)).second == (a * c) + (b * c));
  CHECK(structArity(StructKind::DeltaL) == 3);
  CHECK_FALSE(structInvertible(StructKind::Diag));
  CHECK_THROWS_AS(mor::inv(mor::diag(a)), Error);
}

TEST_CASE("inverse pairs compose to identities") {
  const std::vector<MorTerm> isos = {mor::alphaT(a, b, c), mor::lambdaT(a),      mor::rhoT(b),
                                     mor::xiT(a, c),       mor::alphaP(a, b, c), mor::lambdaP(a),
                                     mor::rhoP(b),         mor::xiP(a, d),       mor::deltaL(a, b, c),
                                     mor::deltaR(a, b, c)};
  for (const auto& f : isos) {
    CAPTURE(f.str());
    CHECK(decideEqual(mor::comp({mor::inv(f), f}), mor::id(f.src())) == Verdict::Equal);
    CHECK(decideEqual(mor::comp({f, mor::inv(f)}), mor::id(f.tgt())) == Verdict::Equal);
  }
}

TEST_CASE("leaf map of the left distributor") {
  const LeafMap m = leafMap(mor::deltaL(a, b, c));
  CHECK(m.monoMap == std::vector<int>{0, 1});
  CHECK(m.posMap == std::vector<std::vector<int>>{{0, 1}, {0, 1}});
  CHECK(m.srcPoly == normalize(a * (b + c)));
  const LeafMap s = leafMap(mor::xiT(a, b));
  CHECK(s.posMap == std::vector<std::vector<int>>{{1, 0}});
}

TEST_CASE("named generators: layered comparison") {
  const MorTerm f = MorTerm::named("f", a, b);
  const MorTerm g = MorTerm::named("g", c, d);
  CHECK(containsNamed(mor::ten(f, g)));
  // Naturality of the symmetry moves the generators across the swap.
  const MorTerm lhs = mor::comp({mor::xiT(b, d), mor::ten(f, g)});
  const MorTerm rhs = mor::comp({mor::ten(g, f), mor::xiT(a, c)});
  CHECK(decideEqual(lhs, lhs) == Verdict::Equal);
  CHECK(decideEqual(mor::comp({mor::id(b), f}), mor::comp({f, mor::id(a)})) == Verdict::Equal);
  CHECK(decideEqual(lhs, rhs) == Verdict::Indeterminate);
  const LayeredForm lf = layeredForm(lhs);
  CHECK(lf.structural.size() == lf.generators.size() + 1);
}

TEST_CASE("quotient search closes a one-step relation") {
  const MorTerm f = MorTerm::named("f", a, a);
  const MorTerm g = MorTerm::named("g", a, a);
  Congruence rel;
  rel.add(mor::comp({f, g}), mor::comp({g, f}));
  CHECK(quotientEqual(mor::comp({f, g}), mor::comp({g, f}), rel, 2) == QVerdict::Equal);
  CHECK(quotientEqual(mor::comp({f, f}), mor::comp({g, g}), rel, 3) == QVerdict::Unknown);
}

TEST_CASE("monoidal normalization rejects other generators") {
  CHECK_THROWS_AS(normalizeMonoidal(mor::xiT(a, b)), Error);
  const MorTerm f = mor::comp({mor::alphaT(a, b, c), mor::ten(mor::rhoT(a * b), mor::id(c))});
  const MorTerm n = normalizeMonoidal(f);
  CHECK(n.src() == f.src());
  CHECK(n.tgt() == f.tgt());
  CHECK(decideEqual(n, f) == Verdict::Equal);
}

TEST_CASE("substitution into morphisms keeps them typed") {
  const MorTerm f = mor::comp({mor::xiT(b, a), mor::xiT(a, b)});
  const MorTerm s = substitute(f, "a", c + d);
  CHECK(s.src() == (c + d) * b);
  CHECK(decideEqual(s, mor::id((c + d) * b)) == Verdict::Equal);
}

TEST_CASE("property: random monoidal pairs are equal and agree with models") {
  std::mt19937_64 rng(424242);
  for (int k = 0; k < 150; ++k) {
    const auto [f, g] = randomMonoidalPair(rng);
    CAPTURE(f.str());
    CAPTURE(g.str());
    REQUIRE(f.src() == g.src());
    CHECK(decideEqual(f, g) == Verdict::Equal);
    CHECK(decideEqual(normalizeMonoidal(f), g) == Verdict::Equal);
    for (const auto& m : randomModels({"a", "b", "c", "d"}, 2, 3, 1000 + k)) CHECK(equalInModel(f, g, m));
  }
}

TEST_CASE("property: an Unequal verdict is witnessed by some model") {
  // Symmetries of equal factors are the canonical unequal pairs; dimension 2 separates them.
  const std::vector<std::pair<MorTerm, MorTerm>> pairs = {
      {mor::xiT(a, a), mor::id(a * a)},
      {mor::xiP(b, b), mor::id(b + b)},
      {mor::ten(mor::xiT(a, a), mor::id(c)), mor::id((a * a) * c)},
  };
  for (const auto& [f, g] : pairs) {
    REQUIRE(decideEqual(f, g) == Verdict::Unequal);
    ModelAssign m;
    m.genDims = {{"a", 2}, {"b", 2}, {"c", 1}};
    CHECK_FALSE(equalInModel(f, g, m));
  }
}
