#pragma once

// Tensor-type endofunctors represented through their values at the unit,
// the labelings omega, the swaps kappa, and bracket strictification of
// unitary bimonoidal functors.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "rigcheck/free_bimon.hpp"

namespace rig {

enum class EndoTag { IdF, DA, KF, MnF, CXF };

// Names of the distinguished generators for compacts, matrices and functions.
ObjTerm compactsObj();
ObjTerm matrixObj(int n);
ObjTerm functionsObj(int grid);

class TTEndo {
 public:
  static TTEndo identity();
  static TTEndo tensorBy(const ObjTerm& a);
  static TTEndo compacts();
  static TTEndo matrices(int n);
  static TTEndo functions(int grid);

  EndoTag tag() const { return tag_; }
  int size() const { return n_; }
  bool isIdentity() const { return tag_ == EndoTag::IdF; }
  // The object tensored on the left; the unit for the identity.
  ObjTerm coefficient() const;
  // Literal value at the unit: 1 for the identity, coefficient * 1 otherwise.
  ObjTerm evObj() const;
  // Value at the unit with the trailing unit removed.
  ObjTerm evReduced() const { return coefficient(); }
  ObjTerm apply(const ObjTerm& x) const;
  MorTerm applyMor(const MorTerm& m) const;
  std::string str() const;
  friend bool operator==(const TTEndo& a, const TTEndo& b) {
    return a.tag_ == b.tag_ && a.n_ == b.n_ && a.obj_ == b.obj_;
  }

 private:
  EndoTag tag_ = EndoTag::IdF;
  ObjTerm obj_;
  int n_ = 0;
};

// Bracketed endofunctor; TensorW is composition (left applied last), OplusW is pointwise sum.
class BrEndo {
 public:
  BrEndo(std::vector<TTEndo> items, Word shape);
  static BrEndo single(const TTEndo& t) { return BrEndo({t}, Word::hole()); }
  static BrEndo compose(const BrEndo& outer, const BrEndo& inner);
  static BrEndo sum(const BrEndo& a, const BrEndo& b);

  const std::vector<TTEndo>& items() const { return items_; }
  const Word& shape() const { return shape_; }
  bool isSingle() const { return shape_.kind() == WordKind::Hole; }
  BrEndo leftPart() const;
  BrEndo rightPart() const;

  ObjTerm apply(const ObjTerm& x) const;
  MorTerm applyMor(const MorTerm& m) const;
  // Underlying object of the item-wise evaluation at the unit.
  ObjTerm uev() const;
  BrObj ev() const;
  BrObj evReduced() const;
  std::string str() const;
  friend bool operator==(const BrEndo& a, const BrEndo& b) { return a.items_ == b.items_ && a.shape_ == b.shape_; }

 private:
  std::vector<TTEndo> items_;
  Word shape_;
};

// Generic object used for natural-transformation components.
extern const char* const kEndoVar;
ObjTerm endoVar();

// omega_T(X): T(X) -> T(1) * X.
MorTerm omega(const BrEndo& t, const ObjTerm& x);
// Lambda_T(X): T(X) -> uev(T) * X.
MorTerm lambdaAt(const BrEndo& t, const ObjTerm& x);
// uev(T) -> T(1).
MorTerm omegaEV(const BrEndo& t);
// kappa^{A,F}(X): A * F(X) -> F(A * X).
MorTerm kappaObj(const ObjTerm& a, const BrEndo& f, const ObjTerm& x);
// kappa^{T,F}(X): T(F(X)) -> F(T(X)).
MorTerm kappaAt(const BrEndo& t, const BrEndo& f, const ObjTerm& x);
// lc_F(Y1, Y2): F(Y1 + Y2) -> F(Y1) + F(Y2).
MorTerm leftCanonical(const BrEndo& f, const ObjTerm& y1, const ObjTerm& y2);
// rc: (T + S)(F X) -> T(F X) + S(F X), an identity.
MorTerm rightCanonical(const BrEndo& t, const BrEndo& s, const BrEndo& f, const ObjTerm& x);
// Natural transformation T S => S T built from omega and the symmetry.
MorTerm xiAt(const BrEndo& t, const BrEndo& s, const ObjTerm& x);

class EndoMor {
 public:
  EndoMor(BrEndo src, BrEndo tgt, MorTerm atVar);
  const BrEndo& src() const { return src_; }
  const BrEndo& tgt() const { return tgt_; }
  // Component at the generic object.
  const MorTerm& atVar() const { return atVar_; }
  MorTerm at(const ObjTerm& x) const;
  // Morphism uev(src) -> uev(tgt).
  MorTerm body() const;

 private:
  BrEndo src_, tgt_;
  MorTerm atVar_;
};

// after o before; before.tgt() must equal after.src().
EndoMor vcompEndo(const EndoMor& after, const EndoMor& before);

EndoMor lambdaOf(const BrEndo& t);
EndoMor evPreimage(const MorTerm& phi, const BrEndo& t, const BrEndo& s);
EndoMor xiTT(const TTEndo& t, const TTEndo& s);
EndoMor kappa(const BrEndo& t, const BrEndo& f);
EndoMor composeLabel(const TTEndo& t, const TTEndo& s);
EndoMor oplusLabel(const TTEndo& t, const TTEndo& s);
// omega at the unit compared with the inverse right unitor.
bool unitConditionHolds(const BrEndo& t);

// Unitary bimonoidal functors on the free category.
enum class TensorRule { Plain, Swap, PadR, PadL };
enum class OplusRule { Plain, Swap, PadR };

struct BimonFunctorDescr {
  std::map<std::string, ObjTerm> objectMap;
  std::map<std::string, MorTerm> morMap;
  TensorRule tensorRule = TensorRule::Plain;
  OplusRule oplusRule = OplusRule::Plain;
  ObjTerm unitImage = ObjTerm::one();
  ObjTerm zeroImage = ObjTerm::zero();
};

ObjTerm functorObj(const BimonFunctorDescr& f, const ObjTerm& x);
// F(X) * F(Y) -> F(X * Y) and F(X) + F(Y) -> F(X + Y).
MorTerm functorTensor2(const BimonFunctorDescr& f, const ObjTerm& x, const ObjTerm& y);
MorTerm functorOplus2(const BimonFunctorDescr& f, const ObjTerm& x, const ObjTerm& y);
MorTerm functorMor(const BimonFunctorDescr& f, const MorTerm& m);
// w[F S] -> F(w[S]).
MorTerm omegaFunctor(const BimonFunctorDescr& f, const BrObj& b);
BrMor strictify(const BimonFunctorDescr& f, const BrMor& phi);

BimonFunctorDescr randomFunctorDescr(std::mt19937_64& rng, const std::vector<std::string>& gens);

}  // namespace rig
