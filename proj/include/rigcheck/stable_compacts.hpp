#pragma once

// Finite-support model of the stabilization rig: matrices over tensor powers
// of l2(N) with matrix coefficients, the pairing relabelings, and homotopy
// paths of *-homomorphisms built from unitary rotations.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rigcheck/matrix_model.hpp"

namespace rig {

using Index = long long;
using MultiIndex = std::vector<Index>;

// Pairing bijections {0,1} x N -> N and N x N -> N.
struct Pairing {
  enum class Two { Interleave, Blocks };  // 2n+i, or 2n+(1-i)
  enum class Square { Cantor, Szudzik };
  Two two = Two::Interleave;
  Square square = Square::Cantor;

  Index pair2(int i, Index n) const;
  std::pair<int, Index> unpair2(Index k) const;
  Index pairNN(Index a, Index b) const;
  std::pair<Index, Index> unpairNN(Index k) const;
};

// Finitely supported matrix over a tensor product of `factors` copies of
// l2(N), each entry a d x d coefficient block. Absent entries are zero, so
// zero-padding never changes equality.
class StableMat {
 public:
  StableMat() = default;
  StableMat(int factors, int d);
  static StableMat unit(const MultiIndex& row, const MultiIndex& col, const CMat& coeff);
  static StableMat unit(Index row, Index col, const CMat& coeff);

  int factors() const { return factors_; }
  int coeffDim() const { return d_; }
  using Key = std::pair<MultiIndex, MultiIndex>;
  const std::map<Key, CMat>& entries() const { return entries_; }
  bool isZero(double tol = 0.0) const;

  void add(const MultiIndex& row, const MultiIndex& col, const CMat& block);
  StableMat operator+(const StableMat& o) const;
  StableMat operator*(const StableMat& o) const;
  StableMat scaled(std::complex<double> s) const;
  StableMat adjoint() const;
  // Largest entrywise modulus of the difference; shapes must agree.
  double maxAbsDiff(const StableMat& o) const;

  // Relabel every index tuple.
  StableMat relabel(const std::function<MultiIndex(const MultiIndex&)>& f, int newFactors) const;
  // Replace the coefficient block of every entry.
  StableMat mapCoeff(const std::function<CMat(const CMat&)>& f, int newDim) const;

  std::string str() const;

 private:
  int factors_ = 1;
  int d_ = 1;
  std::map<Key, CMat> entries_;
};

StableMat iota00(const CMat& b);
// Block-diagonal pair in M2 (x) K: a leading coordinate 0 for k1 and 1 for k2.
StableMat dMap(const StableMat& k1, const StableMat& k2);
// d-hat as the composite of the unitor inverses, the inverse distributor and
// the diagonal embedding, each step applied to explicit data.
StableMat dMapFactored(const StableMat& k1, const StableMat& k2);
// Outer product: indices concatenate, coefficients multiply.
StableMat kron(const StableMat& a, const StableMat& b);
// Merge factors `at` and `at+1` along pair2 (first factor in {0,1}) or pairNN.
StableMat mergePair2(const Pairing& p, const StableMat& x, int at = 0);
StableMat mergeNN(const Pairing& p, const StableMat& x, int at = 0);
StableMat theta2(const Pairing& p, const StableMat& x);
StableMat thetaMap(const Pairing& p, const StableMat& x);
StableMat muMap(const Pairing& p, const StableMat& k1, const StableMat& k2);
// Reorder factors: result factor j is source factor perm[j].
StableMat permuteFactors(const StableMat& x, const std::vector<int>& perm);

// A source generator eps_{m,0} of a direct sum of matrix-unit algebras.
struct GenLabel {
  int summand = 0;
  MultiIndex idx;
};

// Images of the generators of a *-homomorphism.
struct HomSnapshot {
  std::vector<GenLabel> gens;
  std::vector<StableMat> images;
};

// Generators eps_{m,0} of the summands; ranges[s][k] bounds coordinate k.
std::vector<GenLabel> windowGenerators(const std::vector<std::vector<int>>& ranges);

// Snapshot whose generator images are computed by `leg` from eps_{m,0}, given
// as a (summand, one StableMat per coordinate) family.
HomSnapshot buildLeg(const std::vector<GenLabel>& gens,
                     const std::function<StableMat(const GenLabel&)>& leg);

// Multiplicativity and *-preservation on the generators: V_m* V_n = delta P,
// V_m P = V_m, P = V_0, and orthogonality across summands.
bool checkSnapshotStarHom(const HomSnapshot& s, double tol, std::string* why = nullptr);
double snapshotDistance(const HomSnapshot& a, const HomSnapshot& b);

struct HomPath {
  // All snapshots, or only the two endpoints when built without keepAll.
  std::vector<HomSnapshot> steps;
  int stepCount = 0;
  double continuityBound = 0.0;
  double endpointError = 0.0;
  // continuityBound * (stepCount - 1)
  double rateConstant = 0.0;
  bool allStarHom = true;
};

using IndexHint = std::function<std::optional<Index>(Index)>;

// Path t -> Ad(U(t)) o legA with U(1) the permutation carrying legA to legB.
// The permutation is read from single-entry images, or from `hint` when given.
HomPath rotationPath(const HomSnapshot& legA, const HomSnapshot& legB, int steps,
                     const IndexHint& hint = nullptr, bool keepAll = false);

// Recompute continuity, endpoint and *-hom data of a supplied path.
void validatePath(HomPath& path, const HomSnapshot& legA, const HomSnapshot& legB, double tol = 1e-9);

struct SubCheck {
  std::string name;
  bool homotopy = false;
  double maxError = 0.0;
  double continuityBound = 0.0;
  double endpointError = 0.0;
  int steps = 0;
  bool pass = false;
  std::string note;
};

struct RigReport {
  std::string diagram;
  std::string mode;
  int truncation = 8;
  double maxError = 0.0;
  bool pass = false;
  std::vector<SubCheck> checks;
  // Constructed witnesses by sub-check name, filled when keepSnapshots is set.
  std::map<std::string, HomPath> paths;
};

struct RigOptions {
  int truncation = 8;
  Pairing pairing;
  int steps = 100;
  bool construct = true;
  // Supplied witnesses keyed by sub-check name; used when present.
  std::map<std::string, HomPath> witnesses;
  bool keepSnapshots = false;
};

// Acceptance thresholds for witnesses.
constexpr double kEndpointTol = 1e-9;
constexpr double kContinuityRate = 10.0;

const std::vector<std::string>& rigCatalogue();
RigReport verifyRigDiagram(const std::string& name, const RigOptions& opt = {});
std::string rigReportJson(const RigReport& r);

// JSON round trips.
std::string stableMatToJson(const StableMat& m);
StableMat stableMatFromJson(const std::string& text);
std::string homPathToJson(const HomPath& p);
HomPath homPathFromJson(const std::string& text);

}  // namespace rig
