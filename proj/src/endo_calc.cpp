#include "rigcheck/endo_calc.hpp"

namespace rig {

using namespace mor;

ObjTerm compactsObj() { return ObjTerm::gen("K", GenKind::ModelBound); }
ObjTerm matrixObj(int n) { return ObjTerm::gen("M" + std::to_string(n), GenKind::ModelBound); }
ObjTerm functionsObj(int grid) { return ObjTerm::gen("C0_" + std::to_string(grid), GenKind::ModelBound); }

TTEndo TTEndo::identity() { return TTEndo(); }

TTEndo TTEndo::tensorBy(const ObjTerm& a) {
  if (!a.valid()) fail(ErrorCode::BadParams, "tensoring endofunctor needs an object");
  TTEndo t;
  t.tag_ = EndoTag::DA;
  t.obj_ = a;
  return t;
}

TTEndo TTEndo::compacts() {
  TTEndo t;
  t.tag_ = EndoTag::KF;
  t.obj_ = compactsObj();
  return t;
}

TTEndo TTEndo::matrices(int n) {
  if (n < 1) fail(ErrorCode::BadParams, "matrix size must be positive");
  TTEndo t;
  t.tag_ = EndoTag::MnF;
  t.n_ = n;
  t.obj_ = matrixObj(n);
  return t;
}

TTEndo TTEndo::functions(int grid) {
  if (grid < 2) fail(ErrorCode::BadParams, "function grid needs at least two intervals");
  TTEndo t;
  t.tag_ = EndoTag::CXF;
  t.n_ = grid;
  t.obj_ = functionsObj(grid);
  return t;
}

ObjTerm TTEndo::coefficient() const { return tag_ == EndoTag::IdF ? ObjTerm::one() : obj_; }

ObjTerm TTEndo::evObj() const { return tag_ == EndoTag::IdF ? ObjTerm::one() : obj_ * ObjTerm::one(); }

ObjTerm TTEndo::apply(const ObjTerm& x) const { return tag_ == EndoTag::IdF ? x : obj_ * x; }

MorTerm TTEndo::applyMor(const MorTerm& m) const { return tag_ == EndoTag::IdF ? m : ten(id(obj_), m); }

std::string TTEndo::str() const {
  switch (tag_) {
    case EndoTag::IdF: return "Id";
    case EndoTag::DA: return "DA " + obj_.str();
    case EndoTag::KF: return "K";
    case EndoTag::MnF: return "Mn " + std::to_string(n_);
    case EndoTag::CXF: return "C0 " + std::to_string(n_);
  }
  return "?";
}

BrEndo::BrEndo(std::vector<TTEndo> items, Word shape) : items_(std::move(items)), shape_(std::move(shape)) {
  if (items_.empty() || length(shape_) != items_.size())
    fail(ErrorCode::LengthMismatch, "bracketed endofunctor: word length differs from item count");
}

BrEndo BrEndo::compose(const BrEndo& outer, const BrEndo& inner) {
  std::vector<TTEndo> items = outer.items_;
  items.insert(items.end(), inner.items_.begin(), inner.items_.end());
  return BrEndo(std::move(items), Word::tensor(outer.shape_, inner.shape_));
}

BrEndo BrEndo::sum(const BrEndo& a, const BrEndo& b) {
  std::vector<TTEndo> items = a.items_;
  items.insert(items.end(), b.items_.begin(), b.items_.end());
  return BrEndo(std::move(items), Word::oplus(a.shape_, b.shape_));
}

BrEndo BrEndo::leftPart() const {
  if (isSingle()) fail(ErrorCode::BadParams, "single endofunctor has no parts");
  const std::size_t n = length(shape_.left());
  return BrEndo(std::vector<TTEndo>(items_.begin(), items_.begin() + n), shape_.left());
}

BrEndo BrEndo::rightPart() const {
  if (isSingle()) fail(ErrorCode::BadParams, "single endofunctor has no parts");
  const std::size_t n = length(shape_.left());
  return BrEndo(std::vector<TTEndo>(items_.begin() + n, items_.end()), shape_.right());
}

ObjTerm BrEndo::apply(const ObjTerm& x) const {
  if (isSingle()) return items_[0].apply(x);
  if (shape_.kind() == WordKind::TensorW) return leftPart().apply(rightPart().apply(x));
  return leftPart().apply(x) + rightPart().apply(x);
}

MorTerm BrEndo::applyMor(const MorTerm& m) const {
  if (isSingle()) return items_[0].applyMor(m);
  if (shape_.kind() == WordKind::TensorW) return leftPart().applyMor(rightPart().applyMor(m));
  return plus(leftPart().applyMor(m), rightPart().applyMor(m));
}

ObjTerm BrEndo::uev() const { return underlying(ev()); }

BrObj BrEndo::ev() const {
  std::vector<ObjTerm> objs;
  for (const auto& t : items_) objs.push_back(t.evObj());
  return BrObj(std::move(objs), shape_);
}

BrObj BrEndo::evReduced() const {
  std::vector<ObjTerm> objs;
  for (const auto& t : items_) objs.push_back(t.evReduced());
  return BrObj(std::move(objs), shape_);
}

std::string BrEndo::str() const {
  if (isSingle()) return items_[0].str();
  const char* op = shape_.kind() == WordKind::TensorW ? " . " : " + ";
  return "(" + leftPart().str() + op + rightPart().str() + ")";
}

const char* const kEndoVar = "X@";
ObjTerm endoVar() { return ObjTerm::gen(kEndoVar); }

static ObjTerm unitObj() { return ObjTerm::one(); }

MorTerm omega(const BrEndo& t, const ObjTerm& x) {
  if (t.isSingle()) {
    const TTEndo& e = t.items()[0];
    if (e.isIdentity()) return inv(lambdaT(x));
    return ten(inv(rhoT(e.coefficient())), id(x));
  }
  const BrEndo l = t.leftPart(), r = t.rightPart();
  const ObjTerm l1 = l.apply(unitObj()), r1 = r.apply(unitObj());
  if (t.shape().kind() == WordKind::TensorW) {
    return comp({ten(inv(omega(l, r1)), id(x)), inv(alphaT(l1, r1, x)), ten(id(l1), omega(r, x)),
                 omega(l, r.apply(x))});
  }
  return comp({inv(deltaR(l1, r1, x)), plus(omega(l, x), omega(r, x))});
}

MorTerm lambdaAt(const BrEndo& t, const ObjTerm& x) {
  if (t.isSingle()) return omega(t, x);
  const BrEndo l = t.leftPart(), r = t.rightPart();
  const ObjTerm ul = l.uev(), ur = r.uev();
  if (t.shape().kind() == WordKind::TensorW)
    return comp({inv(alphaT(ul, ur, x)), ten(id(ul), lambdaAt(r, x)), lambdaAt(l, r.apply(x))});
  return comp({inv(deltaR(ul, ur, x)), plus(lambdaAt(l, x), lambdaAt(r, x))});
}

MorTerm omegaEV(const BrEndo& t) {
  if (t.isSingle()) return id(t.items()[0].evObj());
  const BrEndo l = t.leftPart(), r = t.rightPart();
  if (t.shape().kind() == WordKind::TensorW)
    return comp({inv(omega(l, r.apply(unitObj()))), ten(omegaEV(l), omegaEV(r))});
  return plus(omegaEV(l), omegaEV(r));
}

MorTerm kappaObj(const ObjTerm& a, const BrEndo& f, const ObjTerm& x) {
  if (f.isSingle()) {
    const TTEndo& e = f.items()[0];
    if (e.isIdentity()) return id(a * x);
    const ObjTerm d = e.coefficient();
    return comp({alphaT(d, a, x), ten(xiT(a, d), id(x)), inv(alphaT(a, d, x))});
  }
  const BrEndo l = f.leftPart(), r = f.rightPart();
  if (f.shape().kind() == WordKind::TensorW)
    return comp({l.applyMor(kappaObj(a, r, x)), kappaObj(a, l, r.apply(x))});
  return comp({plus(kappaObj(a, l, x), kappaObj(a, r, x)), deltaL(a, l.apply(x), r.apply(x))});
}

MorTerm kappaAt(const BrEndo& t, const BrEndo& f, const ObjTerm& x) {
  return comp({f.applyMor(inv(omega(t, x))), kappaObj(t.apply(unitObj()), f, x), omega(t, f.apply(x))});
}

static MorTerm middleFour(const ObjTerm& a, const ObjTerm& b, const ObjTerm& c, const ObjTerm& d) {
  return comp({inv(alphaP(a, c, b + d)), plus(id(a), alphaP(c, b, d)), plus(id(a), plus(xiP(b, c), id(d))),
               plus(id(a), inv(alphaP(b, c, d))), alphaP(a, b, c + d)});
}

MorTerm leftCanonical(const BrEndo& f, const ObjTerm& y1, const ObjTerm& y2) {
  if (f.isSingle()) {
    const TTEndo& e = f.items()[0];
    if (e.isIdentity()) return id(y1 + y2);
    return deltaL(e.coefficient(), y1, y2);
  }
  const BrEndo l = f.leftPart(), r = f.rightPart();
  if (f.shape().kind() == WordKind::TensorW)
    return comp({leftCanonical(l, r.apply(y1), r.apply(y2)), l.applyMor(leftCanonical(r, y1, y2))});
  return comp({middleFour(l.apply(y1), l.apply(y2), r.apply(y1), r.apply(y2)),
               plus(leftCanonical(l, y1, y2), leftCanonical(r, y1, y2))});
}

MorTerm rightCanonical(const BrEndo& t, const BrEndo& s, const BrEndo& f, const ObjTerm& x) {
  const ObjTerm fx = f.apply(x);
  return id(t.apply(fx) + s.apply(fx));
}

MorTerm xiAt(const BrEndo& t, const BrEndo& s, const ObjTerm& x) {
  const ObjTerm t1 = t.apply(unitObj()), s1 = s.apply(unitObj());
  return comp({inv(omega(s, t.apply(x))), ten(id(s1), inv(omega(t, x))), alphaT(s1, t1, x), ten(xiT(t1, s1), id(x)),
               inv(alphaT(t1, s1, x)), ten(id(t1), omega(s, x)), omega(t, s.apply(x))});
}

EndoMor::EndoMor(BrEndo src, BrEndo tgt, MorTerm atVar)
    : src_(std::move(src)), tgt_(std::move(tgt)), atVar_(std::move(atVar)) {
  const ObjTerm v = endoVar();
  if (atVar_.src() != src_.apply(v) || atVar_.tgt() != tgt_.apply(v))
    fail(ErrorCode::TypeMismatch, "component " + atVar_.str() + " does not go from " + src_.str() + " to " +
                                      tgt_.str());
}

MorTerm EndoMor::at(const ObjTerm& x) const { return substitute(atVar_, kEndoVar, x); }

MorTerm EndoMor::body() const {
  return comp({inv(omegaEV(tgt_)), at(ObjTerm::one()), omegaEV(src_)});
}

EndoMor vcompEndo(const EndoMor& after, const EndoMor& before) {
  if (!(before.tgt() == after.src()))
    fail(ErrorCode::TypeMismatch, "cannot compose " + after.src().str() + " after " + before.tgt().str());
  return EndoMor(before.src(), after.tgt(), MorTerm::vcomp(after.atVar(), before.atVar()));
}

EndoMor lambdaOf(const BrEndo& t) {
  return EndoMor(t, BrEndo::single(TTEndo::tensorBy(t.uev())), lambdaAt(t, endoVar()));
}

EndoMor evPreimage(const MorTerm& phi, const BrEndo& t, const BrEndo& s) {
  if (phi.src() != t.uev() || phi.tgt() != s.uev())
    fail(ErrorCode::NotParallel, phi.str() + " does not go from " + t.uev().str() + " to " + s.uev().str());
  const ObjTerm x = endoVar();
  return EndoMor(t, s, comp({inv(lambdaAt(s, x)), ten(phi, id(x)), lambdaAt(t, x)}));
}

EndoMor xiTT(const TTEndo& t, const TTEndo& s) {
  const BrEndo bt = BrEndo::single(t), bs = BrEndo::single(s);
  return EndoMor(BrEndo::compose(bt, bs), BrEndo::compose(bs, bt), xiAt(bt, bs, endoVar()));
}

EndoMor kappa(const BrEndo& t, const BrEndo& f) {
  return EndoMor(BrEndo::compose(t, f), BrEndo::compose(f, t), kappaAt(t, f, endoVar()));
}

EndoMor composeLabel(const TTEndo& t, const TTEndo& s) {
  const BrEndo ts = BrEndo::compose(BrEndo::single(t), BrEndo::single(s));
  return EndoMor(ts, BrEndo::single(TTEndo::tensorBy(ts.apply(ObjTerm::one()))), omega(ts, endoVar()));
}

EndoMor oplusLabel(const TTEndo& t, const TTEndo& s) {
  const BrEndo ts = BrEndo::sum(BrEndo::single(t), BrEndo::single(s));
  return EndoMor(ts, BrEndo::single(TTEndo::tensorBy(ts.apply(ObjTerm::one()))), omega(ts, endoVar()));
}

bool unitConditionHolds(const BrEndo& t) {
  const ObjTerm t1 = t.apply(ObjTerm::one());
  return decideEqual(omega(t, ObjTerm::one()), inv(rhoT(t1))) == Verdict::Equal;
}

// Bimonoidal functors.

ObjTerm functorObj(const BimonFunctorDescr& f, const ObjTerm& x) {
  switch (x.kind()) {
    case ObjKind::Gen: {
      auto it = f.objectMap.find(x.genId());
      return it == f.objectMap.end() ? x : it->second;
    }
    case ObjKind::One: return f.unitImage;
    case ObjKind::Zero: return f.zeroImage;
    case ObjKind::Tensor: {
      const ObjTerm a = functorObj(f, x.left()), b = functorObj(f, x.right());
      switch (f.tensorRule) {
        case TensorRule::Plain: return a * b;
        case TensorRule::Swap: return b * a;
        case TensorRule::PadR: return (a * b) * ObjTerm::one();
        case TensorRule::PadL: return ObjTerm::one() * (a * b);
      }
      break;
    }
    case ObjKind::Oplus: {
      const ObjTerm a = functorObj(f, x.left()), b = functorObj(f, x.right());
      switch (f.oplusRule) {
        case OplusRule::Plain: return a + b;
        case OplusRule::Swap: return b + a;
        case OplusRule::PadR: return (a + b) + ObjTerm::zero();
      }
      break;
    }
  }
  return x;
}

MorTerm functorTensor2(const BimonFunctorDescr& f, const ObjTerm& x, const ObjTerm& y) {
  const ObjTerm a = functorObj(f, x), b = functorObj(f, y);
  switch (f.tensorRule) {
    case TensorRule::Plain: return id(a * b);
    case TensorRule::Swap: return xiT(a, b);
    case TensorRule::PadR: return inv(rhoT(a * b));
    case TensorRule::PadL: return inv(lambdaT(a * b));
  }
  return id(a * b);
}

MorTerm functorOplus2(const BimonFunctorDescr& f, const ObjTerm& x, const ObjTerm& y) {
  const ObjTerm a = functorObj(f, x), b = functorObj(f, y);
  switch (f.oplusRule) {
    case OplusRule::Plain: return id(a + b);
    case OplusRule::Swap: return xiP(a, b);
    case OplusRule::PadR: return inv(rhoP(a + b));
  }
  return id(a + b);
}

static void requireUnitary(const BimonFunctorDescr& f) {
  if (f.unitImage != ObjTerm::one() || f.zeroImage != ObjTerm::zero())
    fail(ErrorCode::NonUnitaryFunctor, "functor must send units to units");
}

static MorTerm functorStructForward(const BimonFunctorDescr& f, StructKind k, const std::vector<ObjTerm>& p) {
  auto F = [&](const ObjTerm& o) { return functorObj(f, o); };
  auto T2 = [&](const ObjTerm& a, const ObjTerm& b) { return functorTensor2(f, a, b); };
  auto O2 = [&](const ObjTerm& a, const ObjTerm& b) { return functorOplus2(f, a, b); };
  const ObjTerm one = ObjTerm::one(), zero = ObjTerm::zero();
  switch (k) {
    case StructKind::AlphaT:
      return comp({T2(p[0], p[1] * p[2]), ten(id(F(p[0])), T2(p[1], p[2])), alphaT(F(p[0]), F(p[1]), F(p[2])),
                   inv(ten(T2(p[0], p[1]), id(F(p[2])))), inv(T2(p[0] * p[1], p[2]))});
    case StructKind::LambdaT: return comp({lambdaT(F(p[0])), inv(T2(one, p[0]))});
    case StructKind::RhoT: return comp({rhoT(F(p[0])), inv(T2(p[0], one))});
    case StructKind::XiT: return comp({T2(p[1], p[0]), xiT(F(p[0]), F(p[1])), inv(T2(p[0], p[1]))});
    case StructKind::AlphaP:
      return comp({O2(p[0], p[1] + p[2]), plus(id(F(p[0])), O2(p[1], p[2])), alphaP(F(p[0]), F(p[1]), F(p[2])),
                   inv(plus(O2(p[0], p[1]), id(F(p[2])))), inv(O2(p[0] + p[1], p[2]))});
    case StructKind::LambdaP: return comp({lambdaP(F(p[0])), inv(O2(zero, p[0]))});
    case StructKind::RhoP: return comp({rhoP(F(p[0])), inv(O2(p[0], zero))});
    case StructKind::XiP: return comp({O2(p[1], p[0]), xiP(F(p[0]), F(p[1])), inv(O2(p[0], p[1]))});
    case StructKind::DeltaL:
      return comp({O2(p[0] * p[1], p[0] * p[2]), plus(T2(p[0], p[1]), T2(p[0], p[2])),
                   deltaL(F(p[0]), F(p[1]), F(p[2])), inv(ten(id(F(p[0])), O2(p[1], p[2]))),
                   inv(T2(p[0], p[1] + p[2]))});
    case StructKind::DeltaR:
      return comp({O2(p[0] * p[2], p[1] * p[2]), plus(T2(p[0], p[2]), T2(p[1], p[2])),
                   deltaR(F(p[0]), F(p[1]), F(p[2])), inv(ten(O2(p[0], p[1]), id(F(p[2])))),
                   inv(T2(p[0] + p[1], p[2]))});
    case StructKind::LambdaZ: return comp({lambdaZ(F(p[0])), inv(T2(zero, p[0]))});
    case StructKind::RhoZ: return comp({rhoZ(F(p[0])), inv(T2(p[0], zero))});
    case StructKind::Diag: return comp({O2(p[0], p[0]), diag(F(p[0]))});
    case StructKind::Bang: return bang(F(p[0]));
  }
  fail(ErrorCode::BadParams, "unknown structural kind");
}

MorTerm functorMor(const BimonFunctorDescr& f, const MorTerm& m) {
  requireUnitary(f);
  switch (m.kind()) {
    case MorKind::Id: return id(functorObj(f, m.src()));
    case MorKind::Struct: {
      MorTerm fwd = functorStructForward(f, m.structKind(), m.params());
      return m.dir() == Dir::Fwd ? fwd : inv(fwd);
    }
    case MorKind::Named: {
      const ObjTerm s = functorObj(f, m.src()), t = functorObj(f, m.tgt());
      auto it = f.morMap.find(m.name());
      if (it == f.morMap.end()) return MorTerm::named("F(" + m.name() + ")", s, t);
      if (it->second.src() != s || it->second.tgt() != t)
        fail(ErrorCode::TypeMismatch, "image of " + m.name() + " has the wrong type");
      return it->second;
    }
    case MorKind::VComp: return MorTerm::vcomp(functorMor(f, m.after()), functorMor(f, m.before()));
    case MorKind::TensorM: {
      const MorTerm& a = m.left();
      const MorTerm& b = m.right();
      return comp({functorTensor2(f, a.tgt(), b.tgt()), ten(functorMor(f, a), functorMor(f, b)),
                   inv(functorTensor2(f, a.src(), b.src()))});
    }
    case MorKind::OplusM: {
      const MorTerm& a = m.left();
      const MorTerm& b = m.right();
      return comp({functorOplus2(f, a.tgt(), b.tgt()), plus(functorMor(f, a), functorMor(f, b)),
                   inv(functorOplus2(f, a.src(), b.src()))});
    }
  }
  return m;
}

static MorTerm omegaRec(const BimonFunctorDescr& f, const Word& w, const std::vector<ObjTerm>& items,
                        std::size_t& pos, ObjTerm& under) {
  if (w.kind() == WordKind::Hole) {
    under = items.at(pos++);
    return id(functorObj(f, under));
  }
  ObjTerm u1, u2;
  MorTerm m1 = omegaRec(f, w.left(), items, pos, u1);
  MorTerm m2 = omegaRec(f, w.right(), items, pos, u2);
  if (w.kind() == WordKind::TensorW) {
    under = u1 * u2;
    return comp({functorTensor2(f, u1, u2), ten(m1, m2)});
  }
  under = u1 + u2;
  return comp({functorOplus2(f, u1, u2), plus(m1, m2)});
}

MorTerm omegaFunctor(const BimonFunctorDescr& f, const BrObj& b) {
  requireUnitary(f);
  std::size_t pos = 0;
  ObjTerm under;
  return omegaRec(f, b.shape(), b.items(), pos, under);
}

BrMor strictify(const BimonFunctorDescr& f, const BrMor& phi) {
  requireUnitary(f);
  auto mapItems = [&](const BrObj& b) {
    std::vector<ObjTerm> out;
    for (const auto& o : b.items()) out.push_back(functorObj(f, o));
    return BrObj(std::move(out), b.shape());
  };
  MorTerm body = comp({inv(omegaFunctor(f, phi.tgt())), functorMor(f, phi.body()), omegaFunctor(f, phi.src())});
  return BrMor(mapItems(phi.src()), mapItems(phi.tgt()), body);
}

static ObjTerm randomImage(std::mt19937_64& rng, int depth) {
  static const char* gens[] = {"a", "b", "c", "d"};
  const int r = static_cast<int>(rng() % 10);
  if (depth <= 0 || r < 5) return r == 0 ? ObjTerm::one() : ObjTerm::gen(gens[rng() % 4]);
  ObjTerm l = randomImage(rng, depth - 1), rr = randomImage(rng, depth - 1);
  return r < 8 ? l * rr : l + rr;
}

BimonFunctorDescr randomFunctorDescr(std::mt19937_64& rng, const std::vector<std::string>& gens) {
  BimonFunctorDescr f;
  for (const auto& g : gens) f.objectMap[g] = randomImage(rng, 2);
  f.tensorRule = static_cast<TensorRule>(rng() % 4);
  f.oplusRule = static_cast<OplusRule>(rng() % 3);
  return f;
}

}  // namespace rig
