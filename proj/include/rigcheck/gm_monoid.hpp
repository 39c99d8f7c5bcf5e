#pragma once

// Representatives of generalized morphisms A -> F K B between matrix
// algebras: block addition, the composition pairing, pushforwards, the
// suspension inversion with its null-homotopy chain, and the type-level
// pipelines of the suspension/asymptotic isomorphism.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rigcheck/endo_calc.hpp"
#include "rigcheck/stable_compacts.hpp"

namespace rig {

// Dimensions used when evaluating functor items and natural transformations.
ModelAssign defaultGmModel();

// Coefficient dimension of a composite-only functor: product of item sizes.
int functorDim(const BrEndo& f, const ModelAssign& model);

// phi: M_srcDim -> F K M_tgtDim. images[i][j] is the image of the matrix unit
// e_ij; its coefficient index is f * tgtDim + b (functor part major).
struct GenMor {
  int srcDim = 1;
  BrEndo functor = BrEndo::single(TTEndo::identity());
  int fDim = 1;
  int tgtDim = 1;
  std::vector<std::vector<StableMat>> images;

  int coeffDim() const { return fDim * tgtDim; }
};

GenMor zeroGM(int srcDim, const BrEndo& functor, int tgtDim, const ModelAssign& model = defaultGmModel());
// Corner representative of the identity of M_n: e_ij -> eps_00 (x) e_ij.
GenMor iota00Rep(int n);
// Checks shapes and the *-homomorphism relations on all units.
bool isStarHom(const GenMor& g, double tol, std::string* why = nullptr);
double gmDistance(const GenMor& a, const GenMor& b);

struct RandomGMOptions {
  int maxSrcDim = 3;
  int window = 8;
  int maxSummands = 2;
  bool suspension = false;  // functor is the suspension on a grid of size M
  int grid = 96;
  int functorItems = 0;  // 1 or 2; 0 picks at random
};
GenMor randomGenMor(std::mt19937_64& rng, const RandomGMOptions& opt = {}, const ModelAssign& model = defaultGmModel());
// Random representative with a prescribed signature.
GenMor randomGenMorOver(std::mt19937_64& rng, int srcDim, const BrEndo& functor, int tgtDim,
                        const RandomGMOptions& opt = {}, const ModelAssign& model = defaultGmModel());

GenMor addGM(const GenMor& a, const GenMor& b, const Pairing& p = {});
// psi over (B, G, C) after phi over (A, F, B); result over (A, F.G, C).
GenMor composeGM(const GenMor& psi, const GenMor& phi, const Pairing& p = {});
// Conjugation of coefficients by the permutation evaluating alpha's body.
GenMor pushforward(const EndoMor& alpha, const GenMor& phi, const ModelAssign& model = defaultGmModel());
// Grid reversal of the suspension coordinate.
GenMor negateGM(const GenMor& phi);

// Units e_{i,0} as a homotopy snapshot.
HomSnapshot gmSnapshot(const GenMor& g);

enum class GMLaw { AddLeftNeutral, AddRightNeutral, AddComm, AddAssoc, ComposeLeftNeutral, ComposeRightNeutral };
const char* gmLawName(GMLaw law);

struct LawWitness {
  GMLaw law;
  HomPath path;
  bool pass = false;
};

// Builds both legs of the law and a rotation witness between them.
LawWitness witnessAddNeutral(const GenMor& phi, bool left, const Pairing& p = {}, int steps = 100);
LawWitness witnessAddComm(const GenMor& phi, const GenMor& psi, const Pairing& p = {}, int steps = 100);
LawWitness witnessAddAssoc(const GenMor& a, const GenMor& b, const GenMor& c, const Pairing& p = {}, int steps = 100);
// left: iota00 of the target after phi; right: phi after iota00 of the source.
LawWitness witnessComposeNeutral(const GenMor& phi, bool left, const Pairing& p = {}, int steps = 100);

// Suspension elements: samples f(k/M), k = 0..M, with f(0) = f(1) = 0.
struct SuspElem {
  int grid = 96;
  std::vector<CMat> samples;
  int valueDim() const { return samples.empty() ? 0 : static_cast<int>(samples[0].rows()); }
};

SuspElem makeSusp(int grid, const std::vector<CMat>& samples);
SuspElem suspFromFunction(int grid, int dim, const std::function<CMat(double)>& f);
// Piecewise-linear value at t in [0,1]; exact on grid points.
CMat suspAt(const SuspElem& f, double t);
SuspElem invSusp(const SuspElem& f);
double suspDistance(const SuspElem& a, const SuspElem& b);

// 2 x 2 matrix of suspension elements.
struct SuspBlock {
  SuspElem m[2][2];
};
double blockDistance(const SuspBlock& a, const SuspBlock& b);
double blockNorm(const SuspBlock& a);

// The three stages of the null-homotopy of f -> diag(f, inv f), s in [0,1].
SuspBlock nullStage(int stage, const SuspElem& f, double s);

struct SuspChainReport {
  double startError = 0.0;      // stage 1 at s=0 versus diag(f, inv f)
  double junctionError = 0.0;   // max over stage ends versus next stage starts
  double terminalNorm = 0.0;    // stage 3 at s=1
  double maxStepJump = 0.0;     // largest distance between consecutive samples
  double interpolationError = 0.0;  // endpoint snapshots: interpolating versus grid-index evaluation
  bool involution = false;
  bool pass = false;
};

SuspChainReport suspensionChain(const SuspElem& f, int stepsPerStage = 100);

// Null-homotopy witness for addGM(phi, negateGM(phi)) with phi over the
// suspension functor alone; the path ends at zero.
struct GMPathReport {
  double startError = 0.0;
  double terminalNorm = 0.0;
  double maxStepJump = 0.0;
  bool allStarHom = true;
  bool pass = false;
};
GMPathReport suspensionNullPath(const GenMor& phi, const Pairing& p = {}, int stepsPerStage = 60);

// Type-level pipelines. Letters: S suspension, N the asymptotic functor,
// A the asymptotic algebra functor, K stabilization.
struct AlgType {
  std::vector<std::string> letters;
  std::string base;
  std::string str() const;
  friend bool operator==(const AlgType& a, const AlgType& b) { return a.letters == b.letters && a.base == b.base; }
};
AlgType algType(const std::string& text);  // e.g. "N S A" or "A^n K B"

struct FormalMor {
  std::string name;
  AlgType src, tgt;
};
// Natural transformation between letter strings.
struct FormalNat {
  std::string name;
  std::vector<std::string> src, tgt;
};
FormalNat formalNat(const std::string& name, const std::string& src, const std::string& tgt);

struct Stage {
  std::string name;
  AlgType src, tgt;
};
struct Pipeline {
  std::vector<Stage> stages;
  AlgType src() const { return stages.front().src; }
  AlgType tgt() const { return stages.back().tgt; }
  std::string str() const;
};

// phi: S A -> A^n K B, eta: Id => N S. Result A -> N S A -> N A^n K B.
Pipeline buildPhi(const FormalMor& phi, const FormalNat& eta, int n);
// psi: A -> N A^n K B, eps: S N => A K, swap: K A^n => A^n K, merge: K K => K.
// Result S A -> S N A^n K B -> A K A^n K B -> A^{n+1} K K B -> A^{n+1} K B.
Pipeline buildPsi(const FormalMor& psi, const FormalNat& eps, const FormalNat& swap, const FormalNat& merge, int n);

struct TypeVariant {
  std::string label;
  bool phiSide = true;
  FormalMor mor;
  FormalNat eta, eps, swap, merge;
  int expectedStage = 0;  // 1-based stage expected to reject
};
// The well-typed inputs and twelve mistyped variants.
std::vector<TypeVariant> typeCatalogue(int n);
TypeVariant wellTypedPhi(int n);
TypeVariant wellTypedPsi(int n);
// Runs a variant; returns 0 when it type-checks, else the failing stage.
int runVariant(const TypeVariant& v, int n, std::string* message = nullptr);

std::string genMorToJson(const GenMor& g);
GenMor genMorFromJson(const std::string& text, const ModelAssign& model = defaultGmModel());

}  // namespace rig
