#include "rigcheck/obj_terms.hpp"

#include <functional>

namespace rig {

struct ObjTerm::Node {
  ObjKind kind;
  std::string id;
  GenKind genKind = GenKind::Abstract;
  ObjTerm l, r;
  std::size_t hash = 0;
};

namespace {

std::size_t mixHash(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

ObjTerm ObjTerm::gen(const std::string& id, GenKind kind) {
  if (id.empty()) fail(ErrorCode::BadParams, "empty generator id");
  auto n = std::make_shared<Node>();
  n->kind = ObjKind::Gen;
  n->id = id;
  n->genKind = kind;
  n->hash = mixHash(1, std::hash<std::string>{}(id));
  return ObjTerm(std::move(n));
}

ObjTerm ObjTerm::one() {
  static const ObjTerm t = [] {
    auto n = std::make_shared<Node>();
    n->kind = ObjKind::One;
    n->hash = 0x1111;
    return ObjTerm(std::move(n));
  }();
  return t;
}

ObjTerm ObjTerm::zero() {
  static const ObjTerm t = [] {
    auto n = std::make_shared<Node>();
    n->kind = ObjKind::Zero;
    n->hash = 0x2222;
    return ObjTerm(std::move(n));
  }();
  return t;
}

ObjTerm ObjTerm::tensor(const ObjTerm& l, const ObjTerm& r) { return binary(ObjKind::Tensor, l, r); }
ObjTerm ObjTerm::oplus(const ObjTerm& l, const ObjTerm& r) { return binary(ObjKind::Oplus, l, r); }

ObjKind ObjTerm::kind() const { return node_->kind; }
const std::string& ObjTerm::genId() const { return node_->id; }
GenKind ObjTerm::genKind() const { return node_->genKind; }
const ObjTerm& ObjTerm::left() const { return node_->l; }
const ObjTerm& ObjTerm::right() const { return node_->r; }
std::size_t ObjTerm::hash() const { return node_ ? node_->hash : 0; }

bool operator==(const ObjTerm& a, const ObjTerm& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case ObjKind::Gen: return a.node_->id == b.node_->id;
    case ObjKind::One:
    case ObjKind::Zero: return true;
    default: return a.node_->l == b.node_->l && a.node_->r == b.node_->r;
  }
}

std::string ObjTerm::str() const {
  if (!node_) return "<null>";
  switch (node_->kind) {
    case ObjKind::Gen: return node_->id;
    case ObjKind::One: return "1";
    case ObjKind::Zero: return "0";
    case ObjKind::Tensor: return "(" + node_->l.str() + " * " + node_->r.str() + ")";
    case ObjKind::Oplus: return "(" + node_->l.str() + " + " + node_->r.str() + ")";
  }
  return "?";
}

ObjTerm ObjTerm::binary(ObjKind k, const ObjTerm& l, const ObjTerm& r) {
  if (!l.valid() || !r.valid()) fail(ErrorCode::BadParams, "null operand");
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->l = l;
  n->r = r;
  n->hash = mixHash(mixHash(k == ObjKind::Tensor ? 3 : 5, l.hash()), r.hash());
  return ObjTerm(std::move(n));
}

// Words.

struct Word::Node {
  WordKind kind;
  Word l, r;
};

Word Word::hole() {
  static const Word w = [] {
    auto n = std::make_shared<Node>();
    n->kind = WordKind::Hole;
    return Word(std::move(n));
  }();
  return w;
}

Word Word::tensor(const Word& l, const Word& r) {
  auto n = std::make_shared<Node>();
  n->kind = WordKind::TensorW;
  n->l = l;
  n->r = r;
  return Word(std::move(n));
}

Word Word::oplus(const Word& l, const Word& r) {
  auto n = std::make_shared<Node>();
  n->kind = WordKind::OplusW;
  n->l = l;
  n->r = r;
  return Word(std::move(n));
}

WordKind Word::kind() const { return node_->kind; }
const Word& Word::left() const { return node_->l; }
const Word& Word::right() const { return node_->r; }

std::string Word::str() const {
  switch (node_->kind) {
    case WordKind::Hole: return "_";
    case WordKind::TensorW: return "(" + node_->l.str() + " * " + node_->r.str() + ")";
    case WordKind::OplusW: return "(" + node_->l.str() + " + " + node_->r.str() + ")";
  }
  return "?";
}

bool operator==(const Word& a, const Word& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->kind != b.node_->kind) return false;
  if (a.node_->kind == WordKind::Hole) return true;
  return a.node_->l == b.node_->l && a.node_->r == b.node_->r;
}

BrObj::BrObj(std::vector<ObjTerm> items, Word shape) : items_(std::move(items)), shape_(std::move(shape)) {
  if (items_.empty()) fail(ErrorCode::LengthMismatch, "bracketed object needs at least one item");
  if (length(shape_) != items_.size())
    fail(ErrorCode::LengthMismatch, "word length " + std::to_string(length(shape_)) + " but " +
                                        std::to_string(items_.size()) + " items");
}

std::string BrObj::str() const {
  std::string s = "((";
  for (std::size_t i = 0; i < items_.size(); ++i) s += (i ? ", " : "") + items_[i].str();
  return s + "), " + shape_.str() + ")";
}

std::size_t length(const ObjTerm& t) {
  switch (t.kind()) {
    case ObjKind::Tensor:
    case ObjKind::Oplus: return length(t.left()) + length(t.right());
    default: return 1;
  }
}

std::size_t length(const Word& w) {
  if (w.kind() == WordKind::Hole) return 1;
  return length(w.left()) + length(w.right());
}

static ObjTerm fillRec(const Word& w, const std::vector<ObjTerm>& items, std::size_t& pos) {
  switch (w.kind()) {
    case WordKind::Hole: return items.at(pos++);
    case WordKind::TensorW: {
      ObjTerm l = fillRec(w.left(), items, pos);
      return ObjTerm::tensor(l, fillRec(w.right(), items, pos));
    }
    case WordKind::OplusW: {
      ObjTerm l = fillRec(w.left(), items, pos);
      return ObjTerm::oplus(l, fillRec(w.right(), items, pos));
    }
  }
  return {};
}

ObjTerm fillWord(const Word& w, const std::vector<ObjTerm>& items) {
  if (length(w) != items.size()) fail(ErrorCode::LengthMismatch, "fillWord: length mismatch");
  std::size_t pos = 0;
  return fillRec(w, items, pos);
}

ObjTerm underlying(const BrObj& b) { return fillWord(b.shape(), b.items()); }

// Normal form.

std::size_t Poly::leafCount() const {
  std::size_t n = 0;
  for (const auto& m : monomials) n += m.size();
  return n;
}

std::vector<int> Poly::shape() const {
  std::vector<int> s;
  s.reserve(monomials.size());
  for (const auto& m : monomials) s.push_back(static_cast<int>(m.size()));
  return s;
}

std::string Poly::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < monomials[i].size(); ++j)
      s += (j ? "," : "") + monomials[i][j].gen + "#" + std::to_string(monomials[i][j].occ);
    s += "]";
  }
  return s + "]";
}

static std::vector<Monomial> normRec(const ObjTerm& t, int& occ) {
  switch (t.kind()) {
    case ObjKind::Gen: return {Monomial{Leaf{t.genId(), occ++}}};
    case ObjKind::One: return {Monomial{}};
    case ObjKind::Zero: return {};
    case ObjKind::Oplus: {
      auto l = normRec(t.left(), occ);
      auto r = normRec(t.right(), occ);
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
    case ObjKind::Tensor: {
      // Both sides are traversed so that occurrence indices follow the source term.
      auto l = normRec(t.left(), occ);
      auto r = normRec(t.right(), occ);
      std::vector<Monomial> out;
      out.reserve(l.size() * r.size());
      for (const auto& a : l)
        for (const auto& b : r) {
          Monomial m = a;
          m.insert(m.end(), b.begin(), b.end());
          out.push_back(std::move(m));
        }
      return out;
    }
  }
  return {};
}

Poly normalize(const ObjTerm& t) {
  int occ = 0;
  return Poly{normRec(t, occ)};
}

std::vector<int> polyShape(const ObjTerm& t) {
  switch (t.kind()) {
    case ObjKind::Gen: return {1};
    case ObjKind::One: return {0};
    case ObjKind::Zero: return {};
    case ObjKind::Oplus: {
      auto l = polyShape(t.left());
      auto r = polyShape(t.right());
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
    case ObjKind::Tensor: {
      auto l = polyShape(t.left());
      auto r = polyShape(t.right());
      std::vector<int> out;
      out.reserve(l.size() * r.size());
      for (int a : l)
        for (int b : r) out.push_back(a + b);
      return out;
    }
  }
  return {};
}

static void addrRec(const ObjTerm& t, const std::string& path, std::vector<std::string>& out) {
  switch (t.kind()) {
    case ObjKind::Gen: out.push_back(path); break;
    case ObjKind::One:
    case ObjKind::Zero: break;
    default:
      addrRec(t.left(), path + "L", out);
      addrRec(t.right(), path + "R", out);
  }
}

std::vector<std::string> leafAddresses(const ObjTerm& t) {
  std::vector<std::string> out;
  addrRec(t, "", out);
  return out;
}

static ObjTerm renderMono(const Monomial& m, std::size_t from) {
  if (from >= m.size()) return ObjTerm::one();
  ObjTerm g = ObjTerm::gen(m[from].gen);
  if (from + 1 == m.size()) return g;
  return ObjTerm::tensor(g, renderMono(m, from + 1));
}

ObjTerm render(const Poly& p) {
  if (p.monomials.empty()) return ObjTerm::zero();
  ObjTerm acc = renderMono(p.monomials.back(), 0);
  for (std::size_t i = p.monomials.size() - 1; i-- > 0;) acc = ObjTerm::oplus(renderMono(p.monomials[i], 0), acc);
  return acc;
}

ObjTerm substitute(const ObjTerm& t, const std::string& id, const ObjTerm& by) {
  switch (t.kind()) {
    case ObjKind::Gen: return t.genId() == id ? by : t;
    case ObjKind::One:
    case ObjKind::Zero: return t;
    case ObjKind::Tensor: return ObjTerm::tensor(substitute(t.left(), id, by), substitute(t.right(), id, by));
    case ObjKind::Oplus: return ObjTerm::oplus(substitute(t.left(), id, by), substitute(t.right(), id, by));
  }
  return t;
}

void collectGenerators(const ObjTerm& t, std::vector<std::string>& out) {
  switch (t.kind()) {
    case ObjKind::Gen: out.push_back(t.genId()); break;
    case ObjKind::One:
    case ObjKind::Zero: break;
    default:
      collectGenerators(t.left(), out);
      collectGenerators(t.right(), out);
  }
}

}  // namespace rig
