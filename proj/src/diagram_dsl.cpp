#include <cctype>
#include <set>
#include <sstream>

#include "rigcheck/diagram.hpp"

namespace rig {

namespace {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1, col = 1;
};

[[noreturn]] void parseError(int line, int col, const std::string& what) {
  fail(ErrorCode::ParseError, std::to_string(line) + ":" + std::to_string(col) + ": " + what);
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto isIdentChar = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    std::size_t j = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      // Hyphens join identifier parts, as in catalogue names.
      while (j < src.size() && (isIdentChar(src[j]) || (src[j] == '-' && j + 1 < src.size() &&
                                                         isIdentChar(src[j + 1]) && src[j + 1] != '>')))
        ++j;
      t.kind = Tok::Ident;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      ++j;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.' && j + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '-' || src[k] == '+')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      if (j < src.size() && src[j] == '/') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      t.kind = Tok::Number;
    } else if (c == '"') {
      ++j;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '"') parseError(line, col, "unterminated string");
      t.kind = Tok::String;
      t.text = src.substr(i + 1, j - i - 1);
      advance(j + 1 - i);
      out.push_back(t);
      continue;
    } else {
      static const char* two[] = {"->", "=="};
      t.kind = Tok::Punct;
      j = i + 1;
      for (const char* p : two)
        if (src.compare(i, 2, p) == 0) j = i + 2;
      if (j == i + 1 && std::string("{}[]();:,=*+.").find(c) == std::string::npos)
        parseError(line, col, std::string("unexpected character '") + c + "'");
    }
    if (t.text.empty()) t.text = src.substr(i, j - i);
    advance(j - i);
    out.push_back(t);
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string file) : toks_(std::move(toks)), file_(std::move(file)) {}

  std::vector<DiagramDecl> file() {
    std::vector<DiagramDecl> out;
    while (peek().kind != Tok::End) out.push_back(diagram());
    return out;
  }

  MorTerm standaloneMor(DiagramDecl& scope) {
    decl_ = &scope;
    MorTerm m = mor();
    expectEnd();
    return m;
  }

  ObjTerm standaloneObj(DiagramDecl& scope) {
    decl_ = &scope;
    ObjTerm o = obj();
    expectEnd();
    return o;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string file_;
  DiagramDecl* decl_ = nullptr;

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  [[noreturn]] void errorAt(const Token& t, const std::string& what) {
    parseError(t.line, t.col, what + (t.kind == Tok::End ? " at end of input" : " near '" + t.text + "'"));
  }
  bool isPunct(const std::string& p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text == p;
  }
  bool isWord(const std::string& w) const { return peek().kind == Tok::Ident && peek().text == w; }
  void expect(const std::string& p) {
    if (!isPunct(p)) errorAt(peek(), "expected '" + p + "'");
    next();
  }
  void expectEnd() {
    if (peek().kind != Tok::End) errorAt(peek(), "unexpected trailing input");
  }
  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident) errorAt(peek(), std::string("expected ") + what);
    return next().text;
  }
  int integer() {
    const Token& t = peek();
    if (t.kind != Tok::Number) errorAt(t, "expected an integer");
    try {
      std::size_t used = 0;
      const int v = std::stoi(t.text, &used);
      if (used != t.text.size()) errorAt(t, "expected an integer");
      next();
      return v;
    } catch (const std::logic_error&) {
      errorAt(t, "expected an integer");
    }
  }
  Rational rational() {
    const Token& t = peek();
    if (t.kind != Tok::Number) errorAt(t, "expected a rational entry");
    const auto slash = t.text.find('/');
    try {
      std::size_t used = 0;
      const long long num = std::stoll(t.text.substr(0, slash), &used);
      if (used != (slash == std::string::npos ? t.text.size() : slash)) errorAt(t, "expected a rational entry");
      long long den = 1;
      if (slash != std::string::npos) den = std::stoll(t.text.substr(slash + 1));
      if (den == 0) errorAt(t, "zero denominator");
      next();
      return Rational(num, den);
    } catch (const std::logic_error&) {
      errorAt(t, "expected a rational entry");
    }
  }

  // Wrap construction errors from the term layer as located type errors.
  template <class F>
  auto typed(const Token& at, F&& build) -> decltype(build()) {
    try {
      return build();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      fail(ErrorCode::TypeError, std::to_string(at.line) + ":" + std::to_string(at.col) + ": " + e.what());
    }
  }

  DiagramDecl diagram() {
    if (!isWord("diagram")) errorAt(peek(), "expected 'diagram'");
    next();
    DiagramDecl decl;
    decl.file = file_;
    decl.name = ident("a diagram name");
    decl_ = &decl;
    expect("{");
    Mode defaultMode;
    bool haveDefault = false;
    while (!isPunct("}")) {
      if (peek().kind == Tok::End) errorAt(peek(), "missing '}'");
      const Token& kw = peek();
      if (kw.kind != Tok::Ident) errorAt(kw, "expected a statement");
      next();
      if (kw.text == "obj") {
        do {
          const std::string name = ident("an object name");
          if (std::find(decl.objects.begin(), decl.objects.end(), name) == decl.objects.end()) decl.objects.push_back(name);
        } while (peek().kind == Tok::Ident);
      } else if (kw.text == "dim") {
        const std::string name = ident("an object name");
        if (std::find(decl.objects.begin(), decl.objects.end(), name) == decl.objects.end()) decl.objects.push_back(name);
        const int d = integer();
        if (d < 0) errorAt(kw, "dimension must be non-negative");
        decl.pinnedDims[name] = d;
      } else if (kw.text == "gen") {
        genDecl(kw);
      } else if (kw.text == "endo") {
        const std::string name = ident("an endofunctor name");
        expect("=");
        decl.endos.insert_or_assign(name, endo());
      } else if (kw.text == "mode") {
        defaultMode = mode();
        haveDefault = true;
      } else if (kw.text == "assert") {
        Statement st;
        st.line = kw.line;
        st.left = mor();
        const Token& eq = peek();
        expect("==");
        st.right = mor();
        if (st.left.src() != st.right.src() || st.left.tgt() != st.right.tgt())
          fail(ErrorCode::TypeError, std::to_string(eq.line) + ":" + std::to_string(eq.col) +
                                         ": sides are not parallel: " + st.left.src().str() + " -> " +
                                         st.left.tgt().str() + " versus " + st.right.src().str() + " -> " +
                                         st.right.tgt().str());
        trailingMode(st, defaultMode, haveDefault);
        decl.statements.push_back(st);
      } else if (kw.text == "check") {
        Statement st;
        st.kind = Statement::Kind::Check;
        st.line = kw.line;
        st.check = ident("a catalogue name");
        const auto& cat = checkCatalogue();
        if (std::find(cat.begin(), cat.end(), st.check) == cat.end()) errorAt(toks_[pos_ - 1], "unknown catalogue check");
        while (peek().kind == Tok::Ident && !isWord("mode")) {
          const std::string key = next().text;
          const Token& v = peek();
          if (v.kind != Tok::Number && v.kind != Tok::Ident && v.kind != Tok::String) errorAt(v, "expected a value");
          st.params[key] = next().text;
        }
        trailingMode(st, defaultMode, haveDefault);
        decl.statements.push_back(st);
      } else {
        errorAt(kw, "unknown statement");
      }
      expect(";");
    }
    expect("}");
    if (decl.statements.empty()) errorAt(toks_[pos_ - 1], "diagram has no assert or check");
    decl_ = nullptr;
    return decl;
  }

  void trailingMode(Statement& st, const Mode& def, bool haveDefault) {
    if (isWord("mode")) {
      next();
      st.mode = mode();
      st.modeDeclared = true;
    } else {
      st.mode = def;
      st.modeDeclared = haveDefault;
    }
  }

  void genDecl(const Token& kw) {
    const std::string name = ident("a generator name");
    if (decl_->named.count(name)) errorAt(kw, "generator declared twice");
    expect(":");
    const ObjTerm src = obj();
    expect("->");
    const ObjTerm tgt = obj();
    decl_->named.insert_or_assign(name, MorTerm::named(name, src, tgt));
    if (!isPunct("=")) return;
    const Token& at = next();
    ModelAssign pins;
    pins.genDims = decl_->pinnedDims;
    long long rows = 0, cols = 0;
    try {
      rows = dimOf(tgt, pins);
      cols = dimOf(src, pins);
    } catch (const Error&) {
      errorAt(at, "a fixed matrix needs pinned dimensions for every object in its type");
    }
    SparseMat m(static_cast<int>(rows), static_cast<int>(cols));
    expect("[");
    int r = 0;
    while (!isPunct("]")) {
      if (r > 0) expect(",");
      expect("[");
      int c = 0;
      while (!isPunct("]")) {
        if (c > 0) expect(",");
        const Token& e = peek();
        const Rational v = rational();
        if (r >= rows || c >= cols) errorAt(e, "matrix entry outside " + std::to_string(rows) + " x " + std::to_string(cols));
        m.set(r, c, v);
        ++c;
      }
      expect("]");
      if (c != cols) errorAt(peek(), "matrix row has " + std::to_string(c) + " entries, expected " + std::to_string(cols));
      ++r;
    }
    expect("]");
    if (r != rows) errorAt(peek(), "matrix has " + std::to_string(r) + " rows, expected " + std::to_string(rows));
    decl_->fixed.insert_or_assign(name, m);
  }

  Mode mode() {
    Mode m;
    const std::string kind = ident("a mode");
    if (kind == "exact") {
      m.kind = ModeKind::Exact;
    } else if (kind == "model") {
      m.kind = ModeKind::Model;
      if (isPunct("(")) {
        next();
        bool first = true;
        while (!isPunct(")")) {
          if (!first) expect(",");
          first = false;
          const Token& key = peek();
          const std::string k = ident("a model parameter");
          expect("=");
          const Token& v = peek();
          if (v.kind != Tok::Number) errorAt(v, "expected a number");
          try {
            if (k == "count") m.count = std::stoi(v.text);
            else if (k == "maxdim") m.maxDim = std::stoi(v.text);
            else if (k == "seed") m.seed = std::stoull(v.text);
            else if (k == "tol") m.tol = std::stod(v.text);
            else errorAt(key, "unknown model parameter");
          } catch (const std::logic_error&) {
            errorAt(v, "bad number");
          }
          next();
        }
        next();
      }
    } else if (kind == "homotopy") {
      m.kind = ModeKind::Homotopy;
      expect("(");
      const std::string how = ident("construct or witness");
      expect(":");
      if (how == "construct") {
        const Token& t = peek();
        const std::string what = ident("a construction");
        if (what == "rotation") m.source = HomotopySource::Rotation;
        else if (what == "suspension-null") m.source = HomotopySource::SuspensionNull;
        else errorAt(t, "unknown construction");
      } else if (how == "witness") {
        if (peek().kind != Tok::String) errorAt(peek(), "expected a quoted witness path");
        m.source = HomotopySource::Witness;
        m.witnessPath = next().text;
      } else {
        errorAt(toks_[pos_ - 1], "expected construct or witness");
      }
      expect(")");
    } else {
      errorAt(toks_[pos_ - 1], "unknown mode");
    }
    return m;
  }

  ObjTerm obj() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      if (t.text == "1") return ObjTerm::one();
      if (t.text == "0") return ObjTerm::zero();
      errorAt(t, "only 0 and 1 are object constants");
    }
    if (isPunct("(")) {
      next();
      const ObjTerm l = obj();
      if (isPunct("*")) {
        next();
        const ObjTerm r = obj();
        expect(")");
        return l * r;
      }
      if (isPunct("+")) {
        next();
        const ObjTerm r = obj();
        expect(")");
        return l + r;
      }
      errorAt(peek(), "expected '*' or '+'");
    }
    if (t.kind != Tok::Ident) errorAt(t, "expected an object");
    const std::string w = t.text;
    if ((w == "ten" || w == "plus") && isPunct("(", 1)) {
      next();
      next();
      const ObjTerm l = obj();
      expect(",");
      const ObjTerm r = obj();
      expect(")");
      return w == "ten" ? l * r : l + r;
    }
    if ((w == "app" || w == "ev" || w == "uev") && isPunct("(", 1)) {
      next();
      next();
      const BrEndo e = endo();
      ObjTerm out;
      if (w == "app") {
        expect(",");
        const ObjTerm x = obj();
        out = e.apply(x);
      } else {
        out = w == "ev" ? e.apply(ObjTerm::one()) : e.uev();
      }
      expect(")");
      return out;
    }
    next();
    const auto& objs = decl_->objects;
    if (std::find(objs.begin(), objs.end(), w) == objs.end()) errorAt(t, "undeclared object");
    return ObjTerm::gen(w);
  }

  BrEndo endo() {
    const Token& t = peek();
    if (isPunct("(")) {
      next();
      const BrEndo l = endo();
      if (isPunct(".")) {
        next();
        const BrEndo r = endo();
        expect(")");
        return BrEndo::compose(l, r);
      }
      if (isPunct("+")) {
        next();
        const BrEndo r = endo();
        expect(")");
        return BrEndo::sum(l, r);
      }
      errorAt(peek(), "expected '.' or '+'");
    }
    const std::string w = ident("an endofunctor");
    if (w == "Id") return BrEndo::single(TTEndo::identity());
    if (w == "K") return BrEndo::single(TTEndo::compacts());
    if (w == "Mn") return BrEndo::single(TTEndo::matrices(positive(t)));
    if (w == "C0") return BrEndo::single(TTEndo::functions(positive(t)));
    if (w == "DA") return BrEndo::single(TTEndo::tensorBy(obj()));
    auto it = decl_->endos.find(w);
    if (it == decl_->endos.end()) errorAt(t, "undeclared endofunctor");
    return it->second;
  }

  int positive(const Token& at) {
    const int n = integer();
    if (n < 1) errorAt(at, "size must be positive");
    return n;
  }

  std::vector<ObjTerm> objList() {
    std::vector<ObjTerm> v;
    expect("[");
    if (!isPunct("]")) {
      v.push_back(obj());
      while (isPunct(",")) {
        next();
        v.push_back(obj());
      }
    }
    expect("]");
    return v;
  }

  MorTerm mor() {
    const Token& t = peek();
    const std::string w = ident("a morphism");
    static const std::map<std::string, StructKind> structs = {
        {"alphaT", StructKind::AlphaT}, {"lambdaT", StructKind::LambdaT}, {"rhoT", StructKind::RhoT},
        {"xiT", StructKind::XiT},       {"alphaP", StructKind::AlphaP},   {"lambdaP", StructKind::LambdaP},
        {"rhoP", StructKind::RhoP},     {"xiP", StructKind::XiP},         {"deltaL", StructKind::DeltaL},
        {"deltaR", StructKind::DeltaR}, {"lambdaZ", StructKind::LambdaZ}, {"rhoZ", StructKind::RhoZ},
        {"delta", StructKind::Diag},    {"bang", StructKind::Bang}};
    if (auto it = structs.find(w); it != structs.end() && isPunct("[")) {
      auto params = objList();
      return typed(t, [&] { return MorTerm::structural(it->second, params); });
    }
    if (w == "id" && isPunct("[")) {
      auto params = objList();
      if (params.size() != 1) errorAt(t, "id takes one object");
      return MorTerm::id(params[0]);
    }
    if (w == "inv" || w == "ten" || w == "plus" || w == "comp" || w == "fmap" || w == "evpre") {
      expect("(");
      if (w == "fmap") {
        const BrEndo e = endo();
        expect(",");
        const MorTerm m = mor();
        expect(")");
        return typed(t, [&] { return e.applyMor(m); });
      }
      if (w == "evpre") {
        const MorTerm phi = mor();
        expect(",");
        const BrEndo a = endo();
        expect(",");
        const BrEndo b = endo();
        std::optional<ObjTerm> at;
        if (isPunct(";")) {
          next();
          at = obj();
        }
        expect(")");
        return typed(t, [&] {
          const EndoMor e = evPreimage(phi, a, b);
          return at ? e.at(*at) : e.body();
        });
      }
      std::vector<MorTerm> args{mor()};
      while (isPunct(",")) {
        next();
        args.push_back(mor());
      }
      expect(")");
      if (w == "inv") {
        if (args.size() != 1) errorAt(t, "inv takes one morphism");
        return typed(t, [&] { return mor::inv(args[0]); });
      }
      if (w == "comp") return typed(t, [&] { return mor::comp(args); });
      if (args.size() != 2) errorAt(t, w + " takes two morphisms");
      return typed(t, [&] { return w == "ten" ? mor::ten(args[0], args[1]) : mor::plus(args[0], args[1]); });
    }
    if (w == "kappa" || w == "xiE" || w == "Lambda" || w == "omega" || w == "omegaEV" || w == "lc" || w == "rc" ||
        w == "kappaA") {
      return endoMor(t, w);
    }
    auto it = decl_->named.find(w);
    if (it == decl_->named.end()) errorAt(t, "unknown morphism");
    return it->second;
  }

  // Endofunctor-level morphisms: NAME[endos ; objects]. Without objects the
  // value at the unit is returned.
  MorTerm endoMor(const Token& t, const std::string& w) {
    expect("[");
    std::vector<BrEndo> es;
    ObjTerm lead;
    if (w == "kappaA") {
      lead = obj();
      expect(",");
    }
    if (!isPunct(";") && !isPunct("]")) {
      es.push_back(endo());
      while (isPunct(",")) {
        next();
        es.push_back(endo());
      }
    }
    std::vector<ObjTerm> xs;
    if (isPunct(";")) {
      next();
      xs.push_back(obj());
      while (isPunct(",")) {
        next();
        xs.push_back(obj());
      }
    }
    expect("]");
    auto need = [&](std::size_t e, std::size_t lo, std::size_t hi) {
      if (es.size() != e || xs.size() < lo || xs.size() > hi) errorAt(t, "wrong number of arguments for " + w);
    };
    return typed(t, [&]() -> MorTerm {
      if (w == "kappa") {
        need(2, 0, 1);
        const EndoMor k = kappa(es[0], es[1]);
        return xs.empty() ? k.body() : k.at(xs[0]);
      }
      if (w == "kappaA") {
        need(1, 1, 1);
        return kappaObj(lead, es[0], xs[0]);
      }
      if (w == "xiE") {
        need(2, 0, 1);
        const EndoMor x(BrEndo::compose(es[0], es[1]), BrEndo::compose(es[1], es[0]), xiAt(es[0], es[1], endoVar()));
        return xs.empty() ? x.body() : x.at(xs[0]);
      }
      if (w == "Lambda") {
        need(1, 0, 1);
        return xs.empty() ? lambdaOf(es[0]).body() : lambdaAt(es[0], xs[0]);
      }
      if (w == "omega") {
        need(1, 1, 1);
        return omega(es[0], xs[0]);
      }
      if (w == "omegaEV") {
        need(1, 0, 0);
        return omegaEV(es[0]);
      }
      if (w == "lc") {
        need(1, 2, 2);
        return leftCanonical(es[0], xs[0], xs[1]);
      }
      need(3, 1, 1);
      return rightCanonical(es[0], es[1], es[2], xs[0]);
    });
  }
};

}  // namespace

std::string Mode::str() const {
  switch (kind) {
    case ModeKind::Exact: return "exact";
    case ModeKind::Model: return "model";
    case ModeKind::Homotopy:
      if (source == HomotopySource::Witness) return "homotopy(witness)";
      return source == HomotopySource::Rotation ? "homotopy(rotation)" : "homotopy(suspension-null)";
  }
  return "?";
}

std::vector<DiagramDecl> parseDiagrams(const std::string& text, const std::string& file) {
  Parser p(lex(text), file);
  return p.file();
}

DiagramDecl parseDiagram(const std::string& text, const std::string& file) {
  auto decls = parseDiagrams(text, file);
  if (decls.size() != 1) fail(ErrorCode::ParseError, "1:1: expected exactly one diagram, found " + std::to_string(decls.size()));
  return decls[0];
}

MorTerm parseMorphism(const std::string& text, const DiagramDecl& scope) {
  DiagramDecl copy = scope;
  Parser p(lex(text), "<expr>");
  return p.standaloneMor(copy);
}

ObjTerm parseObject(const std::string& text, const DiagramDecl& scope) {
  DiagramDecl copy = scope;
  Parser p(lex(text), "<expr>");
  return p.standaloneObj(copy);
}

}  // namespace rig
