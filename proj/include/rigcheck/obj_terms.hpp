#pragma once

// Object terms of the free {+, *}-algebra, bracketing words and the
// distributive sum-of-products normal form.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "rigcheck/errors.hpp"

namespace rig {

enum class GenKind { Abstract, ModelBound };

struct Generator {
  std::string id;
  GenKind kind = GenKind::Abstract;
};

enum class ObjKind { Gen, One, Zero, Tensor, Oplus };

// Immutable, structurally shared term. Equality ignores generator kind.
class ObjTerm {
 public:
  ObjTerm() = default;

  static ObjTerm gen(const std::string& id, GenKind kind = GenKind::Abstract);
  static ObjTerm gen(const Generator& g) { return gen(g.id, g.kind); }
  static ObjTerm one();
  static ObjTerm zero();
  static ObjTerm tensor(const ObjTerm& l, const ObjTerm& r);
  static ObjTerm oplus(const ObjTerm& l, const ObjTerm& r);

  bool valid() const { return node_ != nullptr; }
  ObjKind kind() const;
  const std::string& genId() const;
  GenKind genKind() const;
  const ObjTerm& left() const;
  const ObjTerm& right() const;
  std::size_t hash() const;
  bool isGen() const { return kind() == ObjKind::Gen; }

  std::string str() const;

  friend bool operator==(const ObjTerm& a, const ObjTerm& b);
  friend bool operator!=(const ObjTerm& a, const ObjTerm& b) { return !(a == b); }

 private:
  struct Node;
  explicit ObjTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static ObjTerm binary(ObjKind k, const ObjTerm& l, const ObjTerm& r);
  std::shared_ptr<const Node> node_;
};

struct ObjTermHash {
  std::size_t operator()(const ObjTerm& t) const { return t.hash(); }
};

inline ObjTerm operator*(const ObjTerm& a, const ObjTerm& b) { return ObjTerm::tensor(a, b); }
inline ObjTerm operator+(const ObjTerm& a, const ObjTerm& b) { return ObjTerm::oplus(a, b); }

// Placeholder words.
enum class WordKind { Hole, TensorW, OplusW };

class Word {
 public:
  Word() = default;
  static Word hole();
  static Word tensor(const Word& l, const Word& r);
  static Word oplus(const Word& l, const Word& r);

  bool valid() const { return node_ != nullptr; }
  WordKind kind() const;
  const Word& left() const;
  const Word& right() const;
  std::string str() const;

  friend bool operator==(const Word& a, const Word& b);

 private:
  struct Node;
  explicit Word(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Bracketed object: items substituted left to right into the holes of shape.
class BrObj {
 public:
  BrObj(std::vector<ObjTerm> items, Word shape);
  static BrObj single(const ObjTerm& t) { return BrObj({t}, Word::hole()); }
  const std::vector<ObjTerm>& items() const { return items_; }
  const Word& shape() const { return shape_; }
  std::string str() const;
  friend bool operator==(const BrObj& a, const BrObj& b) {
    return a.items_ == b.items_ && a.shape_ == b.shape_;
  }

 private:
  std::vector<ObjTerm> items_;
  Word shape_;
};

std::size_t length(const ObjTerm& t);
std::size_t length(const Word& w);
ObjTerm underlying(const BrObj& b);

// Substitute items into the word; items.size() must equal length(w).
ObjTerm fillWord(const Word& w, const std::vector<ObjTerm>& items);

struct Leaf {
  std::string gen;
  int occ = 0;
  friend bool operator==(const Leaf& a, const Leaf& b) { return a.gen == b.gen && a.occ == b.occ; }
};

using Monomial = std::vector<Leaf>;

struct Poly {
  std::vector<Monomial> monomials;
  friend bool operator==(const Poly& a, const Poly& b) { return a.monomials == b.monomials; }
  std::size_t leafCount() const;
  std::vector<int> shape() const;  // monomial lengths
  std::string str() const;
};

Poly normalize(const ObjTerm& t);

// Monomial lengths of normalize(t), computed without building leaves.
std::vector<int> polyShape(const ObjTerm& t);

std::vector<std::string> leafAddresses(const ObjTerm& t);

// Right-nested sum of right-nested products.
ObjTerm render(const Poly& p);

// Replace every occurrence of generator id by the given term.
ObjTerm substitute(const ObjTerm& t, const std::string& id, const ObjTerm& by);

// Generator ids in left-to-right order (with repeats).
void collectGenerators(const ObjTerm& t, std::vector<std::string>& out);

}  // namespace rig
