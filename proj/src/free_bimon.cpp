#include "rigcheck/free_bimon.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace rig {

namespace {

std::size_t mixHash(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

const char* structName(StructKind k) {
  switch (k) {
    case StructKind::AlphaT: return "alphaT";
    case StructKind::LambdaT: return "lambdaT";
    case StructKind::RhoT: return "rhoT";
    case StructKind::XiT: return "xiT";
    case StructKind::AlphaP: return "alphaP";
    case StructKind::LambdaP: return "lambdaP";
    case StructKind::RhoP: return "rhoP";
    case StructKind::XiP: return "xiP";
    case StructKind::DeltaL: return "deltaL";
    case StructKind::DeltaR: return "deltaR";
    case StructKind::LambdaZ: return "lambdaZ";
    case StructKind::RhoZ: return "rhoZ";
    case StructKind::Diag: return "delta";
    case StructKind::Bang: return "bang";
  }
  return "?";
}

int structArity(StructKind k) {
  switch (k) {
    case StructKind::AlphaT:
    case StructKind::AlphaP:
    case StructKind::DeltaL:
    case StructKind::DeltaR: return 3;
    case StructKind::XiT:
    case StructKind::XiP: return 2;
    default: return 1;
  }
}

bool structInvertible(StructKind k) { return k != StructKind::Diag && k != StructKind::Bang; }

std::pair<ObjTerm, ObjTerm> structType(StructKind k, const std::vector<ObjTerm>& p) {
  if (static_cast<int>(p.size()) != structArity(k))
    fail(ErrorCode::BadParams, std::string(structName(k)) + " expects " + std::to_string(structArity(k)) +
                                   " parameters, got " + std::to_string(p.size()));
  for (const auto& o : p)
    if (!o.valid()) fail(ErrorCode::BadParams, "null parameter");
  const ObjTerm one = ObjTerm::one(), zero = ObjTerm::zero();
  switch (k) {
    case StructKind::AlphaT: return {(p[0] * p[1]) * p[2], p[0] * (p[1] * p[2])};
    case StructKind::LambdaT: return {one * p[0], p[0]};
    case StructKind::RhoT: return {p[0] * one, p[0]};
    case StructKind::XiT: return {p[0] * p[1], p[1] * p[0]};
    case StructKind::AlphaP: return {(p[0] + p[1]) + p[2], p[0] + (p[1] + p[2])};
    case StructKind::LambdaP: return {zero + p[0], p[0]};
    case StructKind::RhoP: return {p[0] + zero, p[0]};
    case StructKind::XiP: return {p[0] + p[1], p[1] + p[0]};
    case StructKind::DeltaL: return {p[0] * (p[1] + p[2]), (p[0] * p[1]) + (p[0] * p[2])};
    case StructKind::DeltaR: return {(p[0] + p[1]) * p[2], (p[0] * p[2]) + (p[1] * p[2])};
    case StructKind::LambdaZ: return {zero * p[0], zero};
    case StructKind::RhoZ: return {p[0] * zero, zero};
    case StructKind::Diag: return {p[0], p[0] + p[0]};
    case StructKind::Bang: return {p[0], zero};
  }
  fail(ErrorCode::BadParams, "unknown structural kind");
}

struct MorTerm::Node {
  MorKind kind;
  StructKind sk = StructKind::AlphaT;
  Dir dir = Dir::Fwd;
  std::vector<ObjTerm> params;
  std::string name;
  MorTerm c0, c1;
  ObjTerm src, tgt;
  std::size_t hash = 0;
};

MorTerm MorTerm::id(const ObjTerm& x) {
  if (!x.valid()) fail(ErrorCode::BadParams, "id of null object");
  auto n = std::make_shared<Node>();
  n->kind = MorKind::Id;
  n->src = n->tgt = x;
  n->hash = mixHash(11, x.hash());
  return MorTerm(std::move(n));
}

MorTerm MorTerm::structural(StructKind k, std::vector<ObjTerm> params, Dir d) {
  if (d == Dir::Inv && !structInvertible(k))
    fail(ErrorCode::BadParams, std::string(structName(k)) + " has no inverse");
  auto [s, t] = structType(k, params);
  auto n = std::make_shared<Node>();
  n->kind = MorKind::Struct;
  n->sk = k;
  n->dir = d;
  n->params = std::move(params);
  n->src = d == Dir::Fwd ? s : t;
  n->tgt = d == Dir::Fwd ? t : s;
  std::size_t h = mixHash(13 + static_cast<std::size_t>(k), d == Dir::Fwd ? 1 : 2);
  for (const auto& p : n->params) h = mixHash(h, p.hash());
  n->hash = h;
  return MorTerm(std::move(n));
}

MorTerm MorTerm::named(const std::string& name, const ObjTerm& src, const ObjTerm& tgt) {
  if (name.empty() || !src.valid() || !tgt.valid()) fail(ErrorCode::BadParams, "malformed named generator");
  auto n = std::make_shared<Node>();
  n->kind = MorKind::Named;
  n->name = name;
  n->src = src;
  n->tgt = tgt;
  n->hash = mixHash(mixHash(mixHash(17, std::hash<std::string>{}(name)), src.hash()), tgt.hash());
  return MorTerm(std::move(n));
}

MorTerm MorTerm::vcomp(const MorTerm& after, const MorTerm& before) {
  if (!after.valid() || !before.valid()) fail(ErrorCode::BadParams, "null operand");
  if (before.tgt() != after.src())
    fail(ErrorCode::TypeMismatch, "cannot compose " + after.str() + " after " + before.str() + ": target " +
                                      before.tgt().str() + " differs from source " + after.src().str());
  auto n = std::make_shared<Node>();
  n->kind = MorKind::VComp;
  n->c0 = after;
  n->c1 = before;
  n->src = before.src();
  n->tgt = after.tgt();
  n->hash = mixHash(mixHash(19, after.hash()), before.hash());
  return MorTerm(std::move(n));
}

MorTerm MorTerm::tensor(const MorTerm& f, const MorTerm& g) {
  if (!f.valid() || !g.valid()) fail(ErrorCode::BadParams, "null operand");
  auto n = std::make_shared<Node>();
  n->kind = MorKind::TensorM;
  n->c0 = f;
  n->c1 = g;
  n->src = f.src() * g.src();
  n->tgt = f.tgt() * g.tgt();
  n->hash = mixHash(mixHash(23, f.hash()), g.hash());
  return MorTerm(std::move(n));
}

MorTerm MorTerm::oplus(const MorTerm& f, const MorTerm& g) {
  if (!f.valid() || !g.valid()) fail(ErrorCode::BadParams, "null operand");
  auto n = std::make_shared<Node>();
  n->kind = MorKind::OplusM;
  n->c0 = f;
  n->c1 = g;
  n->src = f.src() + g.src();
  n->tgt = f.tgt() + g.tgt();
  n->hash = mixHash(mixHash(29, f.hash()), g.hash());
  return MorTerm(std::move(n));
}

MorKind MorTerm::kind() const { return node_->kind; }
StructKind MorTerm::structKind() const { return node_->sk; }
Dir MorTerm::dir() const { return node_->dir; }
const std::vector<ObjTerm>& MorTerm::params() const { return node_->params; }
const std::string& MorTerm::name() const { return node_->name; }
const MorTerm& MorTerm::after() const { return node_->c0; }
const MorTerm& MorTerm::before() const { return node_->c1; }
const MorTerm& MorTerm::left() const { return node_->c0; }
const MorTerm& MorTerm::right() const { return node_->c1; }
const ObjTerm& MorTerm::src() const { return node_->src; }
const ObjTerm& MorTerm::tgt() const { return node_->tgt; }
std::size_t MorTerm::hash() const { return node_ ? node_->hash : 0; }

bool operator==(const MorTerm& a, const MorTerm& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind) return false;
  switch (x.kind) {
    case MorKind::Id: return x.src == y.src;
    case MorKind::Struct: return x.sk == y.sk && x.dir == y.dir && x.params == y.params;
    case MorKind::Named: return x.name == y.name && x.src == y.src && x.tgt == y.tgt;
    default: return x.c0 == y.c0 && x.c1 == y.c1;
  }
}

std::string MorTerm::str() const {
  if (!node_) return "<null>";
  const auto& n = *node_;
  switch (n.kind) {
    case MorKind::Id: return "id[" + n.src.str() + "]";
    case MorKind::Struct: {
      std::string s = std::string(structName(n.sk)) + "[";
      for (std::size_t i = 0; i < n.params.size(); ++i) s += (i ? "," : "") + n.params[i].str();
      s += "]";
      return n.dir == Dir::Fwd ? s : "inv(" + s + ")";
    }
    case MorKind::Named: return n.name;
    case MorKind::VComp: return "comp(" + n.c0.str() + "," + n.c1.str() + ")";
    case MorKind::TensorM: return "ten(" + n.c0.str() + "," + n.c1.str() + ")";
    case MorKind::OplusM: return "plus(" + n.c0.str() + "," + n.c1.str() + ")";
  }
  return "?";
}

std::pair<ObjTerm, ObjTerm> typeOf(const MorTerm& m) { return {m.src(), m.tgt()}; }

namespace mor {
MorTerm id(const ObjTerm& x) { return MorTerm::id(x); }
MorTerm alphaT(const ObjTerm& x, const ObjTerm& y, const ObjTerm& z) { return MorTerm::structural(StructKind::AlphaT, {x, y, z}); }
MorTerm lambdaT(const ObjTerm& x) { return MorTerm::structural(StructKind::LambdaT, {x}); }
MorTerm rhoT(const ObjTerm& x) { return MorTerm::structural(StructKind::RhoT, {x}); }
MorTerm xiT(const ObjTerm& x, const ObjTerm& y) { return MorTerm::structural(StructKind::XiT, {x, y}); }
MorTerm alphaP(const ObjTerm& x, const ObjTerm& y, const ObjTerm& z) { return MorTerm::structural(StructKind::AlphaP, {x, y, z}); }
MorTerm lambdaP(const ObjTerm& x) { return MorTerm::structural(StructKind::LambdaP, {x}); }
MorTerm rhoP(const ObjTerm& x) { return MorTerm::structural(StructKind::RhoP, {x}); }
MorTerm xiP(const ObjTerm& x, const ObjTerm& y) { return MorTerm::structural(StructKind::XiP, {x, y}); }
MorTerm deltaL(const ObjTerm& a, const ObjTerm& b, const ObjTerm& c) { return MorTerm::structural(StructKind::DeltaL, {a, b, c}); }
MorTerm deltaR(const ObjTerm& a, const ObjTerm& b, const ObjTerm& c) { return MorTerm::structural(StructKind::DeltaR, {a, b, c}); }
MorTerm lambdaZ(const ObjTerm& a) { return MorTerm::structural(StructKind::LambdaZ, {a}); }
MorTerm rhoZ(const ObjTerm& a) { return MorTerm::structural(StructKind::RhoZ, {a}); }
MorTerm diag(const ObjTerm& a) { return MorTerm::structural(StructKind::Diag, {a}); }
MorTerm bang(const ObjTerm& a) { return MorTerm::structural(StructKind::Bang, {a}); }

MorTerm inv(const MorTerm& m) {
  switch (m.kind()) {
    case MorKind::Id: return m;
    case MorKind::Struct:
      return MorTerm::structural(m.structKind(), m.params(), m.dir() == Dir::Fwd ? Dir::Inv : Dir::Fwd);
    case MorKind::Named: fail(ErrorCode::BadParams, "named generator " + m.name() + " has no formal inverse");
    case MorKind::VComp: return MorTerm::vcomp(inv(m.before()), inv(m.after()));
    case MorKind::TensorM: return MorTerm::tensor(inv(m.left()), inv(m.right()));
    case MorKind::OplusM: return MorTerm::oplus(inv(m.left()), inv(m.right()));
  }
  fail(ErrorCode::BadParams, "inv: unknown term");
}

MorTerm ten(const MorTerm& f, const MorTerm& g) { return MorTerm::tensor(f, g); }
MorTerm plus(const MorTerm& f, const MorTerm& g) { return MorTerm::oplus(f, g); }

MorTerm comp(const std::vector<MorTerm>& chain) {
  if (chain.empty()) fail(ErrorCode::BadParams, "empty composite");
  MorTerm acc = chain.back();
  for (std::size_t i = chain.size() - 1; i-- > 0;) acc = MorTerm::vcomp(chain[i], acc);
  return acc;
}
}  // namespace mor

bool containsNamed(const MorTerm& m) {
  switch (m.kind()) {
    case MorKind::Named: return true;
    case MorKind::Id:
    case MorKind::Struct: return false;
    default: return containsNamed(m.left()) || containsNamed(m.right());
  }
}

MorTerm substitute(const MorTerm& m, const std::string& g, const ObjTerm& by) {
  switch (m.kind()) {
    case MorKind::Id: return MorTerm::id(substitute(m.src(), g, by));
    case MorKind::Struct: {
      std::vector<ObjTerm> p;
      for (const auto& o : m.params()) p.push_back(substitute(o, g, by));
      return MorTerm::structural(m.structKind(), std::move(p), m.dir());
    }
    case MorKind::Named: return MorTerm::named(m.name(), substitute(m.src(), g, by), substitute(m.tgt(), g, by));
    case MorKind::VComp: return MorTerm::vcomp(substitute(m.after(), g, by), substitute(m.before(), g, by));
    case MorKind::TensorM: return MorTerm::tensor(substitute(m.left(), g, by), substitute(m.right(), g, by));
    case MorKind::OplusM: return MorTerm::oplus(substitute(m.left(), g, by), substitute(m.right(), g, by));
  }
  return m;
}

// Leaf maps.

namespace {

LeafCore identityCore(const std::vector<int>& shape) {
  LeafCore c;
  c.mono.resize(shape.size());
  c.pos.resize(shape.size());
  for (std::size_t j = 0; j < shape.size(); ++j) {
    c.mono[j] = static_cast<int>(j);
    c.pos[j].resize(shape[j]);
    for (int p = 0; p < shape[j]; ++p) c.pos[j][p] = p;
  }
  return c;
}

LeafCore invertCore(const LeafCore& f) {
  LeafCore c;
  c.mono.assign(f.mono.size(), -1);
  c.pos.resize(f.mono.size());
  for (std::size_t j = 0; j < f.mono.size(); ++j) {
    int s = f.mono[j];
    c.mono[s] = static_cast<int>(j);
    c.pos[s].assign(f.pos[j].size(), -1);
    for (std::size_t p = 0; p < f.pos[j].size(); ++p) c.pos[s][f.pos[j][p]] = static_cast<int>(p);
  }
  return c;
}

LeafCore structForwardCore(StructKind k, const std::vector<ObjTerm>& params, const std::vector<int>& tgtShape) {
  switch (k) {
    case StructKind::XiT: {
      auto sx = polyShape(params[0]);
      auto sy = polyShape(params[1]);
      const int nx = static_cast<int>(sx.size()), ny = static_cast<int>(sy.size());
      LeafCore c;
      c.mono.resize(nx * ny);
      c.pos.resize(nx * ny);
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const int t = j * nx + i;
          c.mono[t] = i * ny + j;
          const int lx = sx[i], ly = sy[j];
          c.pos[t].resize(lx + ly);
          for (int p = 0; p < lx + ly; ++p) c.pos[t][p] = p < ly ? lx + p : p - ly;
        }
      return c;
    }
    case StructKind::XiP: {
      auto sx = polyShape(params[0]);
      auto sy = polyShape(params[1]);
      const int nx = static_cast<int>(sx.size()), ny = static_cast<int>(sy.size());
      LeafCore c = identityCore(tgtShape);
      for (int j = 0; j < nx + ny; ++j) c.mono[j] = j < ny ? nx + j : j - ny;
      return c;
    }
    case StructKind::DeltaL: {
      const int na = static_cast<int>(polyShape(params[0]).size());
      const int nb = static_cast<int>(polyShape(params[1]).size());
      const int nc = static_cast<int>(polyShape(params[2]).size());
      LeafCore c = identityCore(tgtShape);
      for (int a = 0; a < na; ++a) {
        for (int b = 0; b < nb; ++b) c.mono[a * nb + b] = a * (nb + nc) + b;
        for (int x = 0; x < nc; ++x) c.mono[na * nb + a * nc + x] = a * (nb + nc) + nb + x;
      }
      return c;
    }
    case StructKind::Diag: {
      const int na = static_cast<int>(polyShape(params[0]).size());
      LeafCore c = identityCore(tgtShape);
      for (int j = 0; j < 2 * na; ++j) c.mono[j] = j % na;
      return c;
    }
    case StructKind::LambdaZ:
    case StructKind::RhoZ:
    case StructKind::Bang: return LeafCore{};
    default: return identityCore(tgtShape);
  }
}

LeafCore coreRec(const MorTerm& m) {
  switch (m.kind()) {
    case MorKind::Id: return identityCore(polyShape(m.src()));
    case MorKind::Named: fail(ErrorCode::NamedGeneratorPresent, "leaf map undefined for named generator " + m.name());
    case MorKind::Struct: {
      if (m.dir() == Dir::Fwd) return structForwardCore(m.structKind(), m.params(), polyShape(m.tgt()));
      return invertCore(structForwardCore(m.structKind(), m.params(), polyShape(m.src())));
    }
    case MorKind::VComp: {
      LeafCore f = coreRec(m.before());
      LeafCore g = coreRec(m.after());
      LeafCore c;
      c.mono.resize(g.mono.size());
      c.pos.resize(g.mono.size());
      for (std::size_t j = 0; j < g.mono.size(); ++j) {
        const int mid = g.mono[j];
        c.mono[j] = f.mono[mid];
        c.pos[j].resize(g.pos[j].size());
        for (std::size_t p = 0; p < g.pos[j].size(); ++p) c.pos[j][p] = f.pos[mid][g.pos[j][p]];
      }
      return c;
    }
    case MorKind::TensorM: {
      const MorTerm& fm = m.left();
      const MorTerm& gm = m.right();
      LeafCore f = coreRec(fm);
      LeafCore g = coreRec(gm);
      auto sx = polyShape(fm.src());
      auto sy = polyShape(gm.src());
      auto sx2 = polyShape(fm.tgt());
      auto sy2 = polyShape(gm.tgt());
      const int ny = static_cast<int>(sy.size());
      const int nx2 = static_cast<int>(sx2.size()), ny2 = static_cast<int>(sy2.size());
      LeafCore c;
      c.mono.resize(nx2 * ny2);
      c.pos.resize(nx2 * ny2);
      for (int i = 0; i < nx2; ++i)
        for (int j = 0; j < ny2; ++j) {
          const int t = i * ny2 + j;
          const int si = f.mono[i], sj = g.mono[j];
          c.mono[t] = si * ny + sj;
          const int lx2 = sx2[i], ly2 = sy2[j];
          c.pos[t].resize(lx2 + ly2);
          for (int p = 0; p < lx2; ++p) c.pos[t][p] = f.pos[i][p];
          for (int p = 0; p < ly2; ++p) c.pos[t][lx2 + p] = sx[si] + g.pos[j][p];
        }
      return c;
    }
    case MorKind::OplusM: {
      LeafCore f = coreRec(m.left());
      LeafCore g = coreRec(m.right());
      const int nx = static_cast<int>(polyShape(m.left().src()).size());
      LeafCore c = f;
      for (std::size_t j = 0; j < g.mono.size(); ++j) {
        c.mono.push_back(nx + g.mono[j]);
        c.pos.push_back(g.pos[j]);
      }
      return c;
    }
  }
  return {};
}

}  // namespace

LeafCore leafCore(const MorTerm& f) { return coreRec(f); }

LeafMap leafMap(const MorTerm& f) {
  LeafCore c = coreRec(f);
  LeafMap lm;
  lm.srcPoly = normalize(f.src());
  lm.tgtPoly = normalize(f.tgt());
  lm.monoMap = std::move(c.mono);
  lm.posMap = std::move(c.pos);
  std::size_t tgtLeaves = leafAddresses(f.tgt()).size();
  lm.leafPerm.assign(tgtLeaves, -1);
  for (std::size_t j = 0; j < lm.tgtPoly.monomials.size(); ++j) {
    const auto& tm = lm.tgtPoly.monomials[j];
    const auto& sm = lm.srcPoly.monomials[lm.monoMap[j]];
    for (std::size_t p = 0; p < tm.size(); ++p) {
      const Leaf& sl = sm[lm.posMap[j][p]];
      if (sl.gen != tm[p].gen)
        fail(ErrorCode::TypeMismatch, "leaf map does not preserve generator ids (internal)");
      lm.leafPerm[tm[p].occ] = sl.occ;
    }
  }
  return lm;
}

const char* verdictName(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "Equal";
    case Verdict::Unequal: return "Unequal";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

// Layered form.

namespace {

void collectLayers(const MorTerm& m, std::vector<MorTerm>& out) {
  switch (m.kind()) {
    case MorKind::Id: return;
    case MorKind::Struct:
    case MorKind::Named: out.push_back(m); return;
    case MorKind::VComp:
      collectLayers(m.before(), out);
      collectLayers(m.after(), out);
      return;
    case MorKind::TensorM:
    case MorKind::OplusM: {
      if (!containsNamed(m)) {
        out.push_back(m);
        return;
      }
      const bool isTensor = m.kind() == MorKind::TensorM;
      auto wrap = [&](const MorTerm& a, const MorTerm& b) {
        return isTensor ? MorTerm::tensor(a, b) : MorTerm::oplus(a, b);
      };
      std::vector<MorTerm> lf, lg;
      collectLayers(m.left(), lf);
      collectLayers(m.right(), lg);
      for (const auto& l : lf) out.push_back(wrap(l, MorTerm::id(m.right().src())));
      for (const auto& l : lg) out.push_back(wrap(MorTerm::id(m.left().tgt()), l));
      return;
    }
  }
}

}  // namespace

LayeredForm layeredForm(const MorTerm& m) {
  std::vector<MorTerm> layers;
  collectLayers(m, layers);
  LayeredForm lf;
  MorTerm current;
  for (const auto& l : layers) {
    if (containsNamed(l)) {
      lf.structural.push_back(current);
      lf.generators.push_back(l);
      current = MorTerm();
    } else {
      current = current.valid() ? MorTerm::vcomp(l, current) : l;
    }
  }
  lf.structural.push_back(current);
  return lf;
}

Verdict decideEqual(const MorTerm& f, const MorTerm& g) {
  if (f.src() != g.src() || f.tgt() != g.tgt())
    fail(ErrorCode::NotParallel, f.str() + " : " + f.src().str() + " -> " + f.tgt().str() + " vs " + g.str() +
                                     " : " + g.src().str() + " -> " + g.tgt().str());
  if (f == g) return Verdict::Equal;
  if (!containsNamed(f) && !containsNamed(g)) return leafCore(f) == leafCore(g) ? Verdict::Equal : Verdict::Unequal;

  LayeredForm a = layeredForm(f);
  LayeredForm b = layeredForm(g);
  if (a.generators.size() != b.generators.size()) return Verdict::Indeterminate;
  for (std::size_t i = 0; i < a.generators.size(); ++i)
    if (a.generators[i] != b.generators[i]) return Verdict::Indeterminate;
  const std::size_t k = a.generators.size();
  for (std::size_t i = 0; i <= k; ++i) {
    ObjTerm from = i == 0 ? f.src() : a.generators[i - 1].tgt();
    MorTerm sa = a.structural[i].valid() ? a.structural[i] : MorTerm::id(from);
    MorTerm sb = b.structural[i].valid() ? b.structural[i] : MorTerm::id(from);
    if (sa.src() != sb.src() || sa.tgt() != sb.tgt()) return Verdict::Indeterminate;
    if (!(leafCore(sa) == leafCore(sb))) return Verdict::Indeterminate;
  }
  return Verdict::Equal;
}

// Monoidal normalization.

namespace {

void requireMonoidal(const MorTerm& m) {
  switch (m.kind()) {
    case MorKind::Id: return;
    case MorKind::Struct:
      if (m.structKind() == StructKind::AlphaT || m.structKind() == StructKind::LambdaT ||
          m.structKind() == StructKind::RhoT)
        return;
      fail(ErrorCode::UnsupportedGenerator, std::string(structName(m.structKind())) + " outside the monoidal fragment");
    case MorKind::VComp:
    case MorKind::TensorM:
      requireMonoidal(m.left());
      requireMonoidal(m.right());
      return;
    case MorKind::Named: fail(ErrorCode::UnsupportedGenerator, "named generator " + m.name());
    case MorKind::OplusM: fail(ErrorCode::UnsupportedGenerator, "sum of morphisms outside the monoidal fragment");
  }
}

bool isTensorObj(const ObjTerm& o) { return o.kind() == ObjKind::Tensor; }

// Steps from P * Q (both normal) to the normal form; returns the normal form.
ObjTerm mergeSteps(const ObjTerm& p, const ObjTerm& q, std::vector<MorTerm>& steps) {
  if (p.kind() == ObjKind::One) {
    steps.push_back(mor::lambdaT(q));
    return q;
  }
  if (q.kind() == ObjKind::One) {
    steps.push_back(mor::rhoT(p));
    return p;
  }
  if (!isTensorObj(p)) return p * q;
  const ObjTerm& a = p.left();
  const ObjTerm& rest = p.right();
  steps.push_back(mor::alphaT(a, rest, q));
  std::vector<MorTerm> sub;
  ObjTerm nf = mergeSteps(rest, q, sub);
  for (const auto& s : sub) steps.push_back(MorTerm::tensor(MorTerm::id(a), s));
  return a * nf;
}

ObjTerm rnfSteps(const ObjTerm& x, std::vector<MorTerm>& steps) {
  if (!isTensorObj(x)) return x;
  std::vector<MorTerm> ls, rs;
  ObjTerm p = rnfSteps(x.left(), ls);
  ObjTerm q = rnfSteps(x.right(), rs);
  for (const auto& s : ls) steps.push_back(MorTerm::tensor(s, MorTerm::id(x.right())));
  for (const auto& s : rs) steps.push_back(MorTerm::tensor(MorTerm::id(p), s));
  return mergeSteps(p, q, steps);
}

bool isIdentityTerm(const MorTerm& m) {
  switch (m.kind()) {
    case MorKind::Id: return true;
    case MorKind::TensorM:
    case MorKind::OplusM: return isIdentityTerm(m.left()) && isIdentityTerm(m.right());
    case MorKind::VComp: return isIdentityTerm(m.after()) && isIdentityTerm(m.before());
    default: return false;
  }
}

bool syntacticInverse(const MorTerm& a, const MorTerm& b) {
  if (containsNamed(a) || containsNamed(b)) return false;
  return mor::inv(a) == b;
}

}  // namespace

MorTerm normalizeMonoidal(const MorTerm& f) {
  requireMonoidal(f);
  std::vector<MorTerm> srcSteps, tgtSteps;
  ObjTerm nfs = rnfSteps(f.src(), srcSteps);
  ObjTerm nft = rnfSteps(f.tgt(), tgtSteps);
  if (nfs != nft)
    fail(ErrorCode::TypeMismatch, "source and target have different normal forms: " + nfs.str() + " vs " + nft.str());
  std::vector<MorTerm> chain;  // application order
  auto push = [&](const MorTerm& s) {
    if (isIdentityTerm(s)) return;
    if (!chain.empty() && syntacticInverse(chain.back(), s)) {
      chain.pop_back();
      return;
    }
    chain.push_back(s);
  };
  for (const auto& s : srcSteps) push(s);
  for (auto it = tgtSteps.rbegin(); it != tgtSteps.rend(); ++it) push(mor::inv(*it));
  if (chain.empty()) return MorTerm::id(f.src());
  MorTerm acc = chain.front();
  for (std::size_t i = 1; i < chain.size(); ++i) acc = MorTerm::vcomp(chain[i], acc);
  return acc;
}

// Bounded congruence closure.

void Congruence::add(const MorTerm& a, const MorTerm& b) {
  if (a.src() != b.src() || a.tgt() != b.tgt())
    fail(ErrorCode::NotParallel, "congruence pair is not parallel: " + a.str() + " vs " + b.str());
  relations.emplace_back(a, b);
}

namespace {

MorTerm canonical(const MorTerm& m);

void flattenChain(const MorTerm& m, std::vector<MorTerm>& out) {
  switch (m.kind()) {
    case MorKind::Id: return;
    case MorKind::VComp:
      flattenChain(m.before(), out);
      flattenChain(m.after(), out);
      return;
    case MorKind::TensorM:
    case MorKind::OplusM: {
      MorTerm l = canonical(m.left());
      MorTerm r = canonical(m.right());
      if (l.kind() == MorKind::Id && r.kind() == MorKind::Id) return;
      out.push_back(m.kind() == MorKind::TensorM ? MorTerm::tensor(l, r) : MorTerm::oplus(l, r));
      return;
    }
    default: out.push_back(m);
  }
}

MorTerm rebuild(const ObjTerm& src, const std::vector<MorTerm>& chain) {
  if (chain.empty()) return MorTerm::id(src);
  MorTerm acc = chain.front();
  for (std::size_t i = 1; i < chain.size(); ++i) acc = MorTerm::vcomp(chain[i], acc);
  return acc;
}

MorTerm canonical(const MorTerm& m) {
  std::vector<MorTerm> chain;
  flattenChain(m, chain);
  return rebuild(m.src(), chain);
}

struct RewriteRule {
  std::vector<MorTerm> lhs;
  MorTerm rhs;  // canonical
};

// One-step rewrites of a canonical term.
void rewritesOf(const MorTerm& m, const std::vector<RewriteRule>& rules, std::vector<MorTerm>& out) {
  std::vector<MorTerm> chain;
  flattenChain(m, chain);
  for (const auto& rule : rules) {
    const std::size_t n = rule.lhs.size();
    if (n == 0) {
      // Identity side: insert the other side wherever the object matches.
      for (std::size_t i = 0; i <= chain.size(); ++i) {
        ObjTerm at = i == 0 ? m.src() : chain[i - 1].tgt();
        if (at != rule.rhs.src()) continue;
        std::vector<MorTerm> c(chain.begin(), chain.begin() + i);
        flattenChain(rule.rhs, c);
        c.insert(c.end(), chain.begin() + i, chain.end());
        out.push_back(rebuild(m.src(), c));
      }
      continue;
    }
    if (chain.size() < n) continue;
    for (std::size_t i = 0; i + n <= chain.size(); ++i) {
      if (!std::equal(rule.lhs.begin(), rule.lhs.end(), chain.begin() + i)) continue;
      std::vector<MorTerm> c(chain.begin(), chain.begin() + i);
      flattenChain(rule.rhs, c);
      c.insert(c.end(), chain.begin() + i + n, chain.end());
      out.push_back(rebuild(m.src(), c));
    }
  }
  // Rewrites inside tensor and sum factors.
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const MorTerm& fac = chain[i];
    if (fac.kind() != MorKind::TensorM && fac.kind() != MorKind::OplusM) continue;
    const bool t = fac.kind() == MorKind::TensorM;
    std::vector<MorTerm> inner;
    rewritesOf(fac.left(), rules, inner);
    std::vector<MorTerm> variants;
    for (const auto& l : inner) variants.push_back(t ? MorTerm::tensor(l, fac.right()) : MorTerm::oplus(l, fac.right()));
    inner.clear();
    rewritesOf(fac.right(), rules, inner);
    for (const auto& r : inner) variants.push_back(t ? MorTerm::tensor(fac.left(), r) : MorTerm::oplus(fac.left(), r));
    for (const auto& v : variants) {
      std::vector<MorTerm> c(chain.begin(), chain.begin() + i);
      flattenChain(v, c);
      c.insert(c.end(), chain.begin() + i + 1, chain.end());
      out.push_back(rebuild(m.src(), c));
    }
  }
}

}  // namespace

QVerdict quotientEqual(const MorTerm& f, const MorTerm& g, const Congruence& rel, int depth) {
  if (f.src() != g.src() || f.tgt() != g.tgt())
    fail(ErrorCode::NotParallel, "quotientEqual on non-parallel pair");
  const MorTerm target = canonical(g);
  auto sameAsTarget = [&](const MorTerm& m) {
    if (m == target) return true;
    return decideEqual(m, target) == Verdict::Equal;
  };
  MorTerm start = canonical(f);
  if (sameAsTarget(start)) return QVerdict::Equal;

  std::vector<RewriteRule> rules;
  for (const auto& [a, b] : rel.relations) {
    MorTerm ca = canonical(a), cb = canonical(b);
    std::vector<MorTerm> la, lb;
    flattenChain(ca, la);
    flattenChain(cb, lb);
    rules.push_back({la, cb});
    rules.push_back({lb, ca});
  }
  constexpr std::size_t kStateCap = 20000;
  std::unordered_set<std::string> seen{start.str()};
  std::deque<std::pair<MorTerm, int>> queue{{start, 0}};
  while (!queue.empty()) {
    auto [cur, d] = queue.front();
    queue.pop_front();
    if (d >= depth) continue;
    std::vector<MorTerm> next;
    rewritesOf(cur, rules, next);
    for (const auto& n : next) {
      if (!seen.insert(n.str()).second) continue;
      if (sameAsTarget(n)) return QVerdict::Equal;
      if (seen.size() > kStateCap) return QVerdict::Unknown;
      queue.emplace_back(n, d + 1);
    }
  }
  return QVerdict::Unknown;
}

BrMor::BrMor(BrObj src, BrObj tgt, MorTerm body) : src_(std::move(src)), tgt_(std::move(tgt)), body_(std::move(body)) {
  if (body_.src() != underlying(src_) || body_.tgt() != underlying(tgt_))
    fail(ErrorCode::TypeMismatch, "bracketed morphism body does not match the underlying objects");
}

// Random parallel pairs in the monoidal fragment.

namespace {

const char* kGens[] = {"a", "b", "c", "d"};

ObjTerm randomObjRec(std::mt19937_64& rng, int depth, int& leaves) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (depth <= 0 || leaves <= 0 || u(rng) < 0.3) {
    if (leaves <= 0 || u(rng) < 0.2) return ObjTerm::one();
    --leaves;
    return ObjTerm::gen(kGens[rng() % 4]);
  }
  ObjTerm l = randomObjRec(rng, depth - 1, leaves);
  ObjTerm r = randomObjRec(rng, depth - 1, leaves);
  return l * r;
}

struct Redex {
  std::string path;
  int kind;  // 0 alpha, 1 lambda, 2 rho, 3 alpha inverse, 4 lambda inverse, 5 rho inverse
};

void findRedexes(const ObjTerm& x, const std::string& path, bool expand, std::vector<Redex>& out) {
  if (expand) {
    if (x.kind() == ObjKind::Tensor && x.right().kind() == ObjKind::Tensor) out.push_back({path, 3});
    if (path.size() < 3) {
      out.push_back({path, 4});
      out.push_back({path, 5});
    }
  } else if (x.kind() == ObjKind::Tensor) {
    if (x.left().kind() == ObjKind::Tensor) out.push_back({path, 0});
    if (x.left().kind() == ObjKind::One) out.push_back({path, 1});
    if (x.right().kind() == ObjKind::One) out.push_back({path, 2});
  }
  if (x.kind() == ObjKind::Tensor) {
    findRedexes(x.left(), path + "L", expand, out);
    findRedexes(x.right(), path + "R", expand, out);
  }
}

// Apply a redex at a path, returning the whiskered step.
MorTerm applyAt(const ObjTerm& x, const std::string& path, std::size_t i, int kind) {
  if (i < path.size()) {
    if (path[i] == 'L') return MorTerm::tensor(applyAt(x.left(), path, i + 1, kind), MorTerm::id(x.right()));
    return MorTerm::tensor(MorTerm::id(x.left()), applyAt(x.right(), path, i + 1, kind));
  }
  switch (kind) {
    case 0: return mor::alphaT(x.left().left(), x.left().right(), x.right());
    case 1: return mor::lambdaT(x.right());
    case 2: return mor::rhoT(x.left());
    case 3: return mor::inv(mor::alphaT(x.left(), x.right().left(), x.right().right()));
    case 4: return mor::inv(mor::lambdaT(x));
    default: return mor::inv(mor::rhoT(x));
  }
}

// Random path from x to its normal form, with a few bounded expansions.
MorTerm randomPathToNormal(std::mt19937_64& rng, const ObjTerm& x, int detours) {
  std::vector<MorTerm> steps;
  ObjTerm cur = x;
  for (int guard = 0; guard < 500; ++guard) {
    std::vector<Redex> red;
    if (detours > 0 && rng() % 6 == 0) {
      findRedexes(cur, "", true, red);
      if (!red.empty()) {
        --detours;
        const Redex& r = red[rng() % red.size()];
        MorTerm s = applyAt(cur, r.path, 0, r.kind);
        steps.push_back(s);
        cur = s.tgt();
        continue;
      }
    }
    findRedexes(cur, "", false, red);
    if (red.empty()) break;
    const Redex& r = red[rng() % red.size()];
    MorTerm s = applyAt(cur, r.path, 0, r.kind);
    steps.push_back(s);
    cur = s.tgt();
  }
  if (steps.empty()) return MorTerm::id(x);
  MorTerm acc = steps.front();
  for (std::size_t i = 1; i < steps.size(); ++i) acc = MorTerm::vcomp(steps[i], acc);
  return acc;
}

}  // namespace

ObjTerm randomMonoidalObject(std::mt19937_64& rng, int maxDepth, int maxLeaves) {
  int leaves = maxLeaves;
  return randomObjRec(rng, maxDepth, leaves);
}

std::pair<MorTerm, MorTerm> randomMonoidalPair(std::mt19937_64& rng, const RandomPairOptions& opt) {
  ObjTerm x = randomMonoidalObject(rng, opt.maxDepth, opt.maxLeaves);
  std::vector<MorTerm> tmp;
  ObjTerm nf = rnfSteps(x, tmp);
  // A second object with the same normal form, reached by random expansions.
  ObjTerm y = nf;
  const int expansions = static_cast<int>(rng() % 4);
  for (int e = 0; e < expansions; ++e) {
    std::vector<Redex> red;
    findRedexes(y, "", true, red);
    if (red.empty()) break;
    const Redex& r = red[rng() % red.size()];
    y = applyAt(y, r.path, 0, r.kind).tgt();
  }
  MorTerm px1 = randomPathToNormal(rng, x, opt.maxDetours);
  MorTerm px2 = randomPathToNormal(rng, x, opt.maxDetours);
  MorTerm py1 = randomPathToNormal(rng, y, opt.maxDetours);
  MorTerm py2 = randomPathToNormal(rng, y, opt.maxDetours);
  return {MorTerm::vcomp(mor::inv(py1), px1), MorTerm::vcomp(mor::inv(py2), px2)};
}

}  // namespace rig
