#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "rigcheck/gm_monoid.hpp"

using namespace rig;

namespace {
#include "oracle_values.inc"

SuspElem oracleSusp() {
  std::vector<CMat> samples;
  for (double v : kSuspSamples) samples.push_back(CMat::Constant(1, 1, v));
  return makeSusp(kSuspGrid, samples);
}

EndoMor swapOf(const GenMor& g, bool forward) {
  const BrEndo t = BrEndo::single(g.functor.items()[0]), s = BrEndo::single(g.functor.items()[1]);
  return forward ? EndoMor(BrEndo::compose(t, s), BrEndo::compose(s, t), xiAt(t, s, endoVar()))
                 : EndoMor(BrEndo::compose(s, t), BrEndo::compose(t, s), xiAt(s, t, endoVar()));
}
}  // namespace

TEST_CASE("suspension sampling matches the oracle interpolation") {
  const SuspElem f = oracleSusp();
  const SuspElem r = invSusp(f);
  for (std::size_t k = 0; k < std::size(kSuspTimes); ++k) {
    CAPTURE(kSuspTimes[k]);
    CHECK(suspAt(f, kSuspTimes[k])(0, 0).real() == doctest::Approx(kSuspValues[k]).epsilon(1e-12));
    CHECK(suspAt(r, kSuspTimes[k])(0, 0).real() == doctest::Approx(kSuspReversedValues[k]).epsilon(1e-12));
  }
  CHECK(suspDistance(invSusp(r), f) == 0.0);
}

TEST_CASE("suspension elements vanish at the ends") {
  std::vector<CMat> bad(kSuspGrid + 1, CMat::Constant(1, 1, 1.0));
  CHECK_THROWS_AS(makeSusp(kSuspGrid, bad), Error);
  const SuspElem f = suspFromFunction(10, 2, [](double t) { return CMat::Identity(2, 2) * std::sin(M_PI * t); });
  CHECK(f.valueDim() == 2);
  CHECK(f.samples.front().isZero());
  CHECK(f.samples.back().isZero());
}

TEST_CASE("null-homotopy chain of a suspension element") {
  const SuspElem f = oracleSusp();
  const SuspChainReport r = suspensionChain(f, 40);
  CHECK(r.involution);
  CHECK(r.startError == 0.0);
  CHECK(r.junctionError == 0.0);
  CHECK(r.terminalNorm == 0.0);
  CHECK(r.interpolationError <= 1e-6);
  CHECK(r.pass);
  CHECK(blockNorm(nullStage(3, f, 1.0)) == 0.0);
}

TEST_CASE("identity representative and zero") {
  const GenMor id2 = iota00Rep(2);
  CHECK(isStarHom(id2, 0.0));
  CHECK(id2.srcDim == 2);
  const GenMor z = zeroGM(2, BrEndo::single(TTEndo::identity()), 3);
  CHECK(isStarHom(z, 0.0));
  CHECK(z.coeffDim() == 3);
  GenMor broken = id2;
  broken.images[0][1] = broken.images[0][1].scaled(2.0);
  std::string why;
  CHECK_FALSE(isStarHom(broken, 1e-12, &why));
  CHECK_FALSE(why.empty());
}

TEST_CASE("property: random representatives are *-homomorphisms and closed under the operations") {
  std::mt19937_64 rng(31);
  RandomGMOptions opt;
  for (int k = 0; k < 25; ++k) {
    const GenMor a = randomGenMor(rng, opt);
    CAPTURE(genMorToJson(a));
    REQUIRE(isStarHom(a, 1e-12));
    const GenMor b = randomGenMorOver(rng, a.srcDim, a.functor, a.tgtDim, opt);
    CHECK(isStarHom(addGM(a, b), 1e-12));
    CHECK_THROWS_AS(negateGM(a), Error);
    CHECK(gmDistance(genMorFromJson(genMorToJson(a)), a) == 0.0);
  }
}

TEST_CASE("negation over the suspension functor") {
  std::mt19937_64 rng(35);
  RandomGMOptions opt;
  opt.suspension = true;
  opt.grid = 12;
  for (int k = 0; k < 5; ++k) {
    const GenMor a = randomGenMor(rng, opt);
    REQUIRE(isStarHom(a, 1e-12));
    const GenMor n = negateGM(a);
    CHECK(isStarHom(n, 1e-12));
    CHECK(gmDistance(negateGM(n), a) == 0.0);
    const GMPathReport r = suspensionNullPath(a, {}, 20);
    CHECK(r.startError == 0.0);
    CHECK(r.terminalNorm == 0.0);
    CHECK(r.allStarHom);
  }
}

TEST_CASE("property: monoid laws have rotation witnesses") {
  std::mt19937_64 rng(32);
  RandomGMOptions opt;
  opt.window = 6;
  for (int k = 0; k < 8; ++k) {
    const GenMor a = randomGenMor(rng, opt);
    const GenMor b = randomGenMorOver(rng, a.srcDim, a.functor, a.tgtDim, opt);
    const GenMor c = randomGenMorOver(rng, a.srcDim, a.functor, a.tgtDim, opt);
    for (const auto& w : {witnessAddNeutral(a, true, {}, 50), witnessAddNeutral(a, false, {}, 50),
                          witnessAddComm(a, b, {}, 50), witnessAddAssoc(a, b, c, {}, 50),
                          witnessComposeNeutral(a, true, {}, 50), witnessComposeNeutral(a, false, {}, 50)}) {
      CAPTURE(gmLawName(w.law));
      CHECK(w.pass);
      CHECK(w.path.endpointError <= kEndpointTol);
      CHECK(w.path.allStarHom);
    }
  }
}

TEST_CASE("property: pushforward is additive and functorial") {
  std::mt19937_64 rng(33);
  RandomGMOptions opt;
  opt.functorItems = 2;
  for (int k = 0; k < 20; ++k) {
    const GenMor a = randomGenMor(rng, opt);
    const GenMor b = randomGenMorOver(rng, a.srcDim, a.functor, a.tgtDim, opt);
    const EndoMor ts = swapOf(a, true), st = swapOf(a, false);
    CHECK(gmDistance(pushforward(ts, addGM(a, b)), addGM(pushforward(ts, a), pushforward(ts, b))) == 0.0);
    CHECK(gmDistance(pushforward(vcompEndo(st, ts), a), pushforward(st, pushforward(ts, a))) == 0.0);
    // Swapping twice returns the original representative.
    CHECK(gmDistance(pushforward(st, pushforward(ts, a)), a) == 0.0);
  }
}

TEST_CASE("composition pairing respects signatures") {
  std::mt19937_64 rng(34);
  const GenMor a = randomGenMor(rng);
  const GenMor id = iota00Rep(a.tgtDim);
  const GenMor c = composeGM(id, a);
  CHECK(c.srcDim == a.srcDim);
  CHECK(c.tgtDim == a.tgtDim);
  CHECK(isStarHom(c, 1e-12));
  if (a.tgtDim != a.srcDim) CHECK_THROWS_AS(composeGM(a, a), Error);
}

TEST_CASE("type-level pipelines") {
  for (int n : {1, 2, 3}) {
    CAPTURE(n);
    CHECK(runVariant(wellTypedPhi(n), n) == 0);
    CHECK(runVariant(wellTypedPsi(n), n) == 0);
    const auto variants = typeCatalogue(n);
    CHECK(variants.size() == 12);
    for (const auto& v : variants) {
      CAPTURE(v.label);
      std::string msg;
      CHECK(runVariant(v, n, &msg) == v.expectedStage);
      CHECK_FALSE(msg.empty());
    }
  }
  const TypeVariant phi = wellTypedPhi(2);
  const Pipeline p = buildPhi(phi.mor, phi.eta, 2);
  CHECK(p.stages.size() == 2);
  CHECK(p.src() == algType("A"));
  CHECK(algType("A^2 K B") == algType("A A K B"));
}
