#pragma once

// Formal morphisms of the free tight symmetric bimonoidal category, their
// leaf-map semantics and the equality procedures built on top of it.

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rigcheck/obj_terms.hpp"

namespace rig {

enum class MorKind { Id, Struct, Named, VComp, TensorM, OplusM };

// T = tensor structure, P = sum structure, Z = multiplicative zero.
enum class StructKind {
  AlphaT, LambdaT, RhoT, XiT,
  AlphaP, LambdaP, RhoP, XiP,
  DeltaL, DeltaR, LambdaZ, RhoZ,
  Diag, Bang,
};

enum class Dir { Fwd, Inv };

const char* structName(StructKind k);
int structArity(StructKind k);
bool structInvertible(StructKind k);

// Forward source and target of a structural generator.
std::pair<ObjTerm, ObjTerm> structType(StructKind k, const std::vector<ObjTerm>& params);

// Immutable morphism term. Construction type-checks, so every value is a
// typed morphism with a cached source and target.
class MorTerm {
 public:
  MorTerm() = default;

  static MorTerm id(const ObjTerm& x);
  static MorTerm structural(StructKind k, std::vector<ObjTerm> params, Dir d = Dir::Fwd);
  static MorTerm named(const std::string& name, const ObjTerm& src, const ObjTerm& tgt);
  static MorTerm vcomp(const MorTerm& after, const MorTerm& before);
  static MorTerm tensor(const MorTerm& f, const MorTerm& g);
  static MorTerm oplus(const MorTerm& f, const MorTerm& g);

  bool valid() const { return node_ != nullptr; }
  MorKind kind() const;
  StructKind structKind() const;
  Dir dir() const;
  const std::vector<ObjTerm>& params() const;
  const std::string& name() const;
  const MorTerm& after() const;   // VComp: the map applied second
  const MorTerm& before() const;  // VComp: the map applied first
  const MorTerm& left() const;    // TensorM / OplusM
  const MorTerm& right() const;
  const ObjTerm& src() const;
  const ObjTerm& tgt() const;
  std::size_t hash() const;

  std::string str() const;

  friend bool operator==(const MorTerm& a, const MorTerm& b);
  friend bool operator!=(const MorTerm& a, const MorTerm& b) { return !(a == b); }

 private:
  struct Node;
  explicit MorTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using TypedMor = MorTerm;

std::pair<ObjTerm, ObjTerm> typeOf(const MorTerm& m);

namespace mor {
MorTerm id(const ObjTerm& x);
MorTerm alphaT(const ObjTerm& x, const ObjTerm& y, const ObjTerm& z);
MorTerm lambdaT(const ObjTerm& x);
MorTerm rhoT(const ObjTerm& x);
MorTerm xiT(const ObjTerm& x, const ObjTerm& y);
MorTerm alphaP(const ObjTerm& x, const ObjTerm& y, const ObjTerm& z);
MorTerm lambdaP(const ObjTerm& x);
MorTerm rhoP(const ObjTerm& x);
MorTerm xiP(const ObjTerm& x, const ObjTerm& y);
MorTerm deltaL(const ObjTerm& a, const ObjTerm& b, const ObjTerm& c);
MorTerm deltaR(const ObjTerm& a, const ObjTerm& b, const ObjTerm& c);
MorTerm lambdaZ(const ObjTerm& a);
MorTerm rhoZ(const ObjTerm& a);
MorTerm diag(const ObjTerm& a);
MorTerm bang(const ObjTerm& a);
MorTerm inv(const MorTerm& m);
MorTerm ten(const MorTerm& f, const MorTerm& g);
MorTerm plus(const MorTerm& f, const MorTerm& g);
// comp({h, g, f}) = h after g after f.
MorTerm comp(const std::vector<MorTerm>& chain);
}  // namespace mor

bool containsNamed(const MorTerm& m);

// Substitute a generator by an object throughout parameters and named types.
MorTerm substitute(const MorTerm& m, const std::string& genId, const ObjTerm& by);

// Distributive-normal-form semantics: target monomial j comes from source
// monomial monoMap[j], and its position p from source position posMap[j][p].
struct LeafMap {
  Poly srcPoly;
  Poly tgtPoly;
  std::vector<int> monoMap;
  std::vector<std::vector<int>> posMap;
  // Target leaf occurrence -> source leaf occurrence (-1 if none).
  std::vector<int> leafPerm;

  friend bool operator==(const LeafMap& a, const LeafMap& b) {
    return a.monoMap == b.monoMap && a.posMap == b.posMap;
  }
};

LeafMap leafMap(const MorTerm& f);

// Leaf-map core only, without the polynomials.
struct LeafCore {
  std::vector<int> mono;
  std::vector<std::vector<int>> pos;
  friend bool operator==(const LeafCore& a, const LeafCore& b) { return a.mono == b.mono && a.pos == b.pos; }
};
LeafCore leafCore(const MorTerm& f);

enum class Verdict { Equal, Unequal, Indeterminate };
const char* verdictName(Verdict v);

Verdict decideEqual(const MorTerm& f, const MorTerm& g);

// Alternating layers S0 G1 S1 ... Gk Sk; structural layers may be empty.
struct LayeredForm {
  std::vector<MorTerm> structural;  // k + 1 entries, invalid MorTerm means identity
  std::vector<MorTerm> generators;  // k entries
};
LayeredForm layeredForm(const MorTerm& m);

MorTerm normalizeMonoidal(const MorTerm& f);

struct Congruence {
  std::vector<std::pair<MorTerm, MorTerm>> relations;
  void add(const MorTerm& a, const MorTerm& b);
};

enum class QVerdict { Equal, Unknown };
QVerdict quotientEqual(const MorTerm& f, const MorTerm& g, const Congruence& rel, int depth);

class BrMor {
 public:
  BrMor(BrObj src, BrObj tgt, MorTerm body);
  const BrObj& src() const { return src_; }
  const BrObj& tgt() const { return tgt_; }
  const MorTerm& body() const { return body_; }

 private:
  BrObj src_, tgt_;
  MorTerm body_;
};

// Random parallel pair in the monoidal fragment over generators {a,b,c,d}.
struct RandomPairOptions {
  int maxDepth = 6;
  int maxLeaves = 5;
  int maxDetours = 2;
};
std::pair<MorTerm, MorTerm> randomMonoidalPair(std::mt19937_64& rng, const RandomPairOptions& opt = {});
ObjTerm randomMonoidalObject(std::mt19937_64& rng, int maxDepth, int maxLeaves);

}  // namespace rig
