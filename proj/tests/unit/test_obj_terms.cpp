#include <doctest.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "rigcheck/free_bimon.hpp"
#include "rigcheck/obj_terms.hpp"

using namespace rig;

namespace {
#include "oracle_values.inc"

const ObjTerm a = ObjTerm::gen("a"), b = ObjTerm::gen("b"), c = ObjTerm::gen("c"), d = ObjTerm::gen("d");
const ObjTerm one = ObjTerm::one(), zero = ObjTerm::zero();

ObjTerm randomObject(std::mt19937_64& rng, int depth) {
  const int r = static_cast<int>(rng() % 9);
  if (depth == 0 || r < 3) {
    if (r == 0) return one;
    if (r == 1 && depth < 3) return zero;
    return ObjTerm::gen(std::string(1, static_cast<char>('a' + rng() % 4)));
  }
  const ObjTerm l = randomObject(rng, depth - 1), rt = randomObject(rng, depth - 1);
  return r % 2 ? l * rt : l + rt;
}
}  // namespace

TEST_CASE("normal form, rendering and leaf addresses match the oracle") {
  for (const auto& nf : normalFormCases(a, b, c, d, one, zero)) {
    CAPTURE(nf.term.str());
    const Poly p = normalize(nf.term);
    CHECK(p.str() == nf.poly);
    CHECK(render(p).str() == nf.rendered);
    CHECK(leafAddresses(nf.term) == nf.addresses);
    CHECK(p.shape() == nf.shape);
    CHECK(polyShape(nf.term) == nf.shape);
  }
}

TEST_CASE("structural equality and hashing") {
  CHECK(a * (b + c) == ObjTerm::tensor(a, ObjTerm::oplus(b, c)));
  CHECK(a * b != b * a);
  CHECK((a * b).hash() == ObjTerm::tensor(a, b).hash());
  CHECK(ObjTerm::gen("a", GenKind::ModelBound) == a);
  CHECK(ObjTerm::gen("a", GenKind::ModelBound).genKind() == GenKind::ModelBound);
  CHECK((a + one).str() == "(a + 1)");
  CHECK(zero.str() == "0");
}

TEST_CASE("accessors of the wrong kind return empty parts") {
  CHECK_FALSE(a.left().valid());
  CHECK((a * b).genId().empty());
  CHECK_FALSE(ObjTerm().valid());
}

TEST_CASE("words, bracketed objects and filling") {
  const Word h = Word::hole();
  const Word w = Word::tensor(h, Word::oplus(h, h));
  CHECK(length(w) == 3);
  CHECK(fillWord(w, {a, b, c}) == a * (b + c));
  CHECK_THROWS_AS(fillWord(w, {a, b}), Error);
  const BrObj br({a, b, c}, w);
  CHECK(underlying(br) == a * (b + c));
  CHECK_THROWS_AS(BrObj({a}, w), Error);
  CHECK(BrObj::single(a).shape() == h);
}

TEST_CASE("substitution and generator collection") {
  const ObjTerm t = (a * b) + a;
  CHECK(substitute(t, "a", c + one) == ((c + one) * b) + (c + one));
  std::vector<std::string> gens;
  collectGenerators(t, gens);
  CHECK(gens == std::vector<std::string>{"a", "b", "a"});
  CHECK(length(t) == 3);
}

TEST_CASE("property: rendering a normal form is a fixed point") {
  std::mt19937_64 rng(20261016);
  for (int k = 0; k < 300; ++k) {
    const ObjTerm t = randomObject(rng, 5);
    CAPTURE(t.str());
    const Poly p = normalize(t);
    const ObjTerm r = render(p);
    const Poly q = normalize(r);
    CHECK(q.shape() == p.shape());
    CHECK(render(q) == r);
    CHECK(polyShape(t) == p.shape());
    // Leaf occurrences appear in the order the generators are read.
    std::vector<std::string> gens;
    collectGenerators(t, gens);
    CHECK(leafAddresses(t).size() == gens.size());
  }
}

TEST_CASE("property: normal form is a homomorphism for sums") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const ObjTerm x = randomObject(rng, 3), y = randomObject(rng, 3);
    const auto px = polyShape(x), py = polyShape(y);
    std::vector<int> expect = px;
    expect.insert(expect.end(), py.begin(), py.end());
    CHECK(polyShape(x + y) == expect);
    CHECK(normalize(x * y).monomials.size() == px.size() * py.size());
  }
}
