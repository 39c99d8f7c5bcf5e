#include "rigcheck/stable_compacts.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include <json.hpp>

namespace rig {

using cd = std::complex<double>;

// Pairings.

Index Pairing::pair2(int i, Index n) const {
  if (i != 0 && i != 1) fail(ErrorCode::BadParams, "pair2 tag must be 0 or 1");
  if (n < 0) fail(ErrorCode::BadParams, "negative index");
  return two == Two::Interleave ? 2 * n + i : 2 * n + (1 - i);
}

std::pair<int, Index> Pairing::unpair2(Index k) const {
  if (k < 0) fail(ErrorCode::BadParams, "negative index");
  const int low = static_cast<int>(k % 2);
  return {two == Two::Interleave ? low : 1 - low, k / 2};
}

Index Pairing::pairNN(Index a, Index b) const {
  if (a < 0 || b < 0) fail(ErrorCode::BadParams, "negative index");
  if (square == Square::Cantor) return (a + b) * (a + b + 1) / 2 + b;
  return a < b ? b * b + a : a * a + a + b;
}

static Index isqrt(Index k) {
  Index s = static_cast<Index>(std::sqrt(static_cast<double>(k)));
  while (s * s > k) --s;
  while ((s + 1) * (s + 1) <= k) ++s;
  return s;
}

std::pair<Index, Index> Pairing::unpairNN(Index k) const {
  if (k < 0) fail(ErrorCode::BadParams, "negative index");
  if (square == Square::Cantor) {
    Index w = (isqrt(8 * k + 1) - 1) / 2;
    const Index b = k - w * (w + 1) / 2;
    return {w - b, b};
  }
  const Index s = isqrt(k);
  const Index r = k - s * s;
  return r < s ? std::pair<Index, Index>{r, s} : std::pair<Index, Index>{s, r - s};
}

// StableMat.

StableMat::StableMat(int factors, int d) : factors_(factors), d_(d) {
  if (factors < 0 || d < 1) fail(ErrorCode::BadParams, "bad stable matrix shape");
}

StableMat StableMat::unit(const MultiIndex& row, const MultiIndex& col, const CMat& coeff) {
  if (row.size() != col.size()) fail(ErrorCode::BadParams, "row and column tuples differ in length");
  if (coeff.rows() != coeff.cols() || coeff.rows() < 1) fail(ErrorCode::BadParams, "coefficient must be square");
  StableMat m(static_cast<int>(row.size()), static_cast<int>(coeff.rows()));
  m.add(row, col, coeff);
  return m;
}

StableMat StableMat::unit(Index row, Index col, const CMat& coeff) { return unit(MultiIndex{row}, MultiIndex{col}, coeff); }

bool StableMat::isZero(double tol) const {
  for (const auto& [k, b] : entries_)
    if (b.cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

void StableMat::add(const MultiIndex& row, const MultiIndex& col, const CMat& block) {
  if (static_cast<int>(row.size()) != factors_ || static_cast<int>(col.size()) != factors_)
    fail(ErrorCode::BadParams, "index tuple has the wrong number of factors");
  if (block.rows() != d_ || block.cols() != d_) fail(ErrorCode::CoefficientMismatch, "coefficient block size differs");
  auto it = entries_.find({row, col});
  if (it == entries_.end()) {
    if (block.isZero(0.0)) return;
    entries_.emplace(Key{row, col}, block);
  } else {
    it->second += block;
    if (it->second.isZero(0.0)) entries_.erase(it);
  }
}

static void requireSameShape(const StableMat& a, const StableMat& b) {
  if (a.coeffDim() != b.coeffDim()) fail(ErrorCode::CoefficientMismatch, "coefficient algebras differ");
  if (a.factors() != b.factors()) fail(ErrorCode::BadParams, "factor counts differ");
}

StableMat StableMat::operator+(const StableMat& o) const {
  requireSameShape(*this, o);
  StableMat r = *this;
  for (const auto& [k, b] : o.entries_) r.add(k.first, k.second, b);
  return r;
}

StableMat StableMat::operator*(const StableMat& o) const {
  requireSameShape(*this, o);
  std::map<MultiIndex, std::vector<const std::pair<const Key, CMat>*>> byRow;
  for (const auto& e : o.entries_) byRow[e.first.first].push_back(&e);
  StableMat r(factors_, d_);
  for (const auto& [k, a] : entries_) {
    auto it = byRow.find(k.second);
    if (it == byRow.end()) continue;
    for (const auto* e : it->second) r.add(k.first, e->first.second, a * e->second);
  }
  return r;
}

StableMat StableMat::scaled(cd s) const {
  StableMat r(factors_, d_);
  if (s == cd(0)) return r;
  for (const auto& [k, b] : entries_) r.entries_.emplace(k, b * s);
  return r;
}

StableMat StableMat::adjoint() const {
  StableMat r(factors_, d_);
  for (const auto& [k, b] : entries_) r.entries_.emplace(Key{k.second, k.first}, b.adjoint());
  return r;
}

double StableMat::maxAbsDiff(const StableMat& o) const {
  requireSameShape(*this, o);
  double m = 0.0;
  for (const auto& [k, b] : entries_) {
    auto it = o.entries_.find(k);
    const double v = it == o.entries_.end() ? b.cwiseAbs().maxCoeff() : (b - it->second).cwiseAbs().maxCoeff();
    m = std::max(m, v);
  }
  for (const auto& [k, b] : o.entries_)
    if (!entries_.count(k)) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

StableMat StableMat::relabel(const std::function<MultiIndex(const MultiIndex&)>& f, int newFactors) const {
  StableMat r(newFactors, d_);
  for (const auto& [k, b] : entries_) r.add(f(k.first), f(k.second), b);
  return r;
}

StableMat StableMat::mapCoeff(const std::function<CMat(const CMat&)>& f, int newDim) const {
  StableMat r(factors_, newDim);
  for (const auto& [k, b] : entries_) r.add(k.first, k.second, f(b));
  return r;
}

std::string StableMat::str() const {
  std::string s = "{";
  bool first = true;
  auto tup = [](const MultiIndex& t) {
    std::string o = "(";
    for (std::size_t i = 0; i < t.size(); ++i) o += (i ? "," : "") + std::to_string(t[i]);
    return o + ")";
  };
  for (const auto& [k, b] : entries_) {
    if (!first) s += ", ";
    first = false;
    s += tup(k.first) + tup(k.second);
    if (d_ == 1) {
      const cd v = b(0, 0);
      s += ":" + std::to_string(v.real());
      if (v.imag() != 0.0) s += (v.imag() > 0 ? "+" : "") + std::to_string(v.imag()) + "i";
    } else {
      s += ":[" + std::to_string(d_) + "x" + std::to_string(d_) + "]";
    }
  }
  return s + "}";
}

// Rig structure maps.

StableMat iota00(const CMat& b) { return StableMat::unit(Index{0}, Index{0}, b); }

StableMat dMap(const StableMat& k1, const StableMat& k2) {
  if (k1.coeffDim() != k2.coeffDim() || k1.factors() != k2.factors())
    fail(ErrorCode::CoefficientMismatch, "block pair needs a common coefficient algebra");
  StableMat r(k1.factors() + 1, k1.coeffDim());
  for (int s = 0; s < 2; ++s) {
    for (const auto& [k, b] : (s == 0 ? k1 : k2).entries()) {
      MultiIndex row{s}, col{s};
      row.insert(row.end(), k.first.begin(), k.first.end());
      col.insert(col.end(), k.second.begin(), k.second.end());
      r.add(row, col, b);
    }
  }
  return r;
}

StableMat dMapFactored(const StableMat& k1, const StableMat& k2) {
  if (k1.coeffDim() != k2.coeffDim() || k1.factors() != k2.factors())
    fail(ErrorCode::CoefficientMismatch, "block pair needs a common coefficient algebra");
  // Unitor inverses: k -> 1 (x) k, a scalar factor with no index.
  const StableMat scalarOne = StableMat::unit(MultiIndex{}, MultiIndex{}, CMat::Identity(1, 1));
  const StableMat a = kron(scalarOne, k1), b = kron(scalarOne, k2);
  // Inverse distributor: the pair becomes one element of (C + C) (x) K with a
  // summand tag in front; the diagonal embedding reads the tag as the diagonal
  // position of M2.
  StableMat tagged(k1.factors() + 1, k1.coeffDim());
  const StableMat* parts[2] = {&a, &b};
  for (Index s = 0; s < 2; ++s) {
    for (const auto& [k, blk] : parts[s]->entries()) {
      MultiIndex row{s}, col{s};
      row.insert(row.end(), k.first.begin(), k.first.end());
      col.insert(col.end(), k.second.begin(), k.second.end());
      tagged.add(row, col, blk);
    }
  }
  return tagged;
}

static CMat kronCoeff(const CMat& a, const CMat& b) {
  CMat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

StableMat kron(const StableMat& a, const StableMat& b) {
  StableMat r(a.factors() + b.factors(), a.coeffDim() * b.coeffDim());
  for (const auto& [ka, ba] : a.entries()) {
    for (const auto& [kb, bb] : b.entries()) {
      MultiIndex row = ka.first, col = ka.second;
      row.insert(row.end(), kb.first.begin(), kb.first.end());
      col.insert(col.end(), kb.second.begin(), kb.second.end());
      r.add(row, col, kronCoeff(ba, bb));
    }
  }
  return r;
}

static StableMat mergeWith(const StableMat& x, int at, const std::function<Index(Index, Index)>& pair) {
  if (at < 0 || at + 1 >= x.factors()) fail(ErrorCode::BadParams, "merge position out of range");
  return x.relabel(
      [&](const MultiIndex& t) {
        MultiIndex o(t.begin(), t.begin() + at);
        o.push_back(pair(t[at], t[at + 1]));
        o.insert(o.end(), t.begin() + at + 2, t.end());
        return o;
      },
      x.factors() - 1);
}

StableMat mergePair2(const Pairing& p, const StableMat& x, int at) {
  return mergeWith(x, at, [&](Index i, Index n) {
    if (i != 0 && i != 1) fail(ErrorCode::BadParams, "M2 coordinate must be 0 or 1");
    return p.pair2(static_cast<int>(i), n);
  });
}

StableMat mergeNN(const Pairing& p, const StableMat& x, int at) {
  return mergeWith(x, at, [&](Index a, Index b) { return p.pairNN(a, b); });
}

StableMat theta2(const Pairing& p, const StableMat& x) { return mergePair2(p, x, 0); }
StableMat thetaMap(const Pairing& p, const StableMat& x) { return mergeNN(p, x, 0); }
StableMat muMap(const Pairing& p, const StableMat& k1, const StableMat& k2) { return theta2(p, dMap(k1, k2)); }

StableMat permuteFactors(const StableMat& x, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != x.factors()) fail(ErrorCode::BadParams, "permutation size differs");
  return x.relabel(
      [&](const MultiIndex& t) {
        MultiIndex o(t.size());
        for (std::size_t j = 0; j < perm.size(); ++j) o[j] = t.at(perm[j]);
        return o;
      },
      x.factors());
}

// Snapshots.

std::vector<GenLabel> windowGenerators(const std::vector<std::vector<int>>& ranges) {
  std::vector<GenLabel> out;
  for (std::size_t s = 0; s < ranges.size(); ++s) {
    const auto& r = ranges[s];
    MultiIndex idx(r.size(), 0);
    bool empty = false;
    for (int v : r) empty = empty || v <= 0;
    if (empty) continue;
    while (true) {
      out.push_back({static_cast<int>(s), idx});
      int k = static_cast<int>(r.size()) - 1;
      while (k >= 0 && ++idx[k] == r[k]) idx[k--] = 0;
      if (k < 0) break;
    }
  }
  return out;
}

HomSnapshot buildLeg(const std::vector<GenLabel>& gens, const std::function<StableMat(const GenLabel&)>& leg) {
  HomSnapshot s;
  s.gens = gens;
  s.images.reserve(gens.size());
  for (const auto& g : gens) s.images.push_back(leg(g));
  return s;
}

static bool isBase(const GenLabel& g) {
  return std::all_of(g.idx.begin(), g.idx.end(), [](Index v) { return v == 0; });
}

bool checkSnapshotStarHom(const HomSnapshot& s, double tol, std::string* why) {
  auto bad = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  const std::size_t n = s.images.size();
  if (s.gens.size() != n) return bad("generator and image counts differ");
  if (n == 0) return true;
  std::map<int, std::size_t> base;
  for (std::size_t i = 0; i < n; ++i)
    if (isBase(s.gens[i])) base[s.gens[i].summand] = i;
  for (const auto& g : s.gens)
    if (!base.count(g.summand)) return bad("summand " + std::to_string(g.summand) + " has no base generator");
  for (const auto& [sum, bi] : base) {
    const StableMat& p = s.images[bi];
    if ((p * p).maxAbsDiff(p) > tol || p.adjoint().maxAbsDiff(p) > tol)
      return bad("image of the base unit is not a projection");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const StableMat& v = s.images[i];
    if ((v * s.images[base[s.gens[i].summand]]).maxAbsDiff(v) > tol)
      return bad("generator " + std::to_string(i) + " is not fixed by the base projection");
  }
  // Sparse Gram matrix V_i* V_j grouped by shared rows.
  struct RowEntry {
    std::size_t gen;
    const MultiIndex* col;
    const CMat* blk;
  };
  std::map<MultiIndex, std::vector<RowEntry>> rows;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [k, b] : s.images[i].entries()) rows[k.first].push_back({i, &k.second, &b});
  std::unordered_map<std::uint64_t, std::map<std::pair<MultiIndex, MultiIndex>, CMat>> gram;
  for (const auto& [r, list] : rows) {
    for (const auto& a : list) {
      for (const auto& b : list) {
        auto& g = gram[static_cast<std::uint64_t>(a.gen) * n + b.gen];
        const CMat prod = a.blk->adjoint() * (*b.blk);
        auto it = g.find({*a.col, *b.col});
        if (it == g.end()) g.emplace(std::make_pair(*a.col, *b.col), prod);
        else it->second += prod;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const StableMat& p = s.images[base[s.gens[i].summand]];
    auto it = gram.find(static_cast<std::uint64_t>(i) * n + i);
    StableMat gm(p.factors(), p.coeffDim());
    if (it != gram.end())
      for (const auto& [k, b] : it->second) gm.add(k.first, k.second, b);
    if (gm.maxAbsDiff(p) > tol) return bad("generator " + std::to_string(i) + " is not a partial isometry onto the base");
  }
  for (const auto& [key, entries] : gram) {
    if (key / n == key % n) continue;
    for (const auto& [k, b] : entries)
      if (b.cwiseAbs().maxCoeff() > tol)
        return bad("generators " + std::to_string(key / n) + " and " + std::to_string(key % n) +
                   " are not orthogonal");
  }
  return true;
}

double snapshotDistance(const HomSnapshot& a, const HomSnapshot& b) {
  if (a.images.size() != b.images.size()) fail(ErrorCode::BadParams, "snapshots have different generator sets");
  double m = 0.0;
  for (std::size_t i = 0; i < a.images.size(); ++i) m = std::max(m, a.images[i].maxAbsDiff(b.images[i]));
  return m;
}

// Rotation paths.

namespace {

struct Permutation {
  std::map<Index, Index> map;
  Index operator()(Index x) const {
    auto it = map.find(x);
    return it == map.end() ? x : it->second;
  }
};

[[noreturn]] void notRelated(const std::string& m) { fail(ErrorCode::LegsNotRotationRelated, m); }

Permutation inferPermutation(const HomSnapshot& a, const HomSnapshot& b, const IndexHint& hint) {
  if (a.images.size() != b.images.size()) notRelated("legs have different generator sets");
  std::map<Index, Index> sigma;
  std::set<Index> domain;
  for (const auto& img : a.images) {
    if (img.factors() != 1) notRelated("legs must land in a single stable factor");
    for (const auto& [k, blk] : img.entries()) {
      domain.insert(k.first[0]);
      domain.insert(k.second[0]);
    }
  }
  for (const auto& img : b.images)
    if (img.factors() != 1) notRelated("legs must land in a single stable factor");
  auto bind = [&](Index x, Index y) {
    auto [it, fresh] = sigma.emplace(x, y);
    if (!fresh && it->second != y) notRelated("index " + std::to_string(x) + " has two images");
  };
  if (hint) {
    for (Index x : domain) {
      auto y = hint(x);
      if (!y) notRelated("relabeling hint is undefined at " + std::to_string(x));
      bind(x, *y);
    }
  } else {
    for (std::size_t i = 0; i < a.images.size(); ++i) {
      const auto& ea = a.images[i].entries();
      const auto& eb = b.images[i].entries();
      if (ea.size() != eb.size() || ea.size() > 1) notRelated("images are not single matrix units");
      if (ea.empty()) continue;
      if ((ea.begin()->second - eb.begin()->second).cwiseAbs().maxCoeff() != 0.0)
        notRelated("coefficient blocks differ");
      bind(ea.begin()->first.first[0], eb.begin()->first.first[0]);
      bind(ea.begin()->first.second[0], eb.begin()->first.second[0]);
    }
  }
  std::set<Index> image;
  for (const auto& [x, y] : sigma)
    if (!image.insert(y).second) notRelated("relabeling is not injective");
  // Extend to a permutation of domain union image.
  std::vector<Index> freeDom, freeImg;
  for (Index y : image)
    if (!sigma.count(y)) freeDom.push_back(y);
  for (Index x : domain)
    if (!image.count(x)) freeImg.push_back(x);
  Permutation p;
  p.map = sigma;
  for (std::size_t i = 0; i < freeDom.size(); ++i) p.map[freeDom[i]] = freeImg[i];
  for (auto it = p.map.begin(); it != p.map.end();) {
    if (it->first == it->second) it = p.map.erase(it);
    else ++it;
  }
  return p;
}

StableMat relabelBy(const StableMat& m, const Permutation& p) {
  return m.relabel([&](const MultiIndex& t) { return MultiIndex{p(t[0])}; }, 1);
}

// pi = tau2 o tau1 with both involutions, built cycle by cycle.
void splitReflections(const Permutation& p, std::map<Index, Index>& tau1, std::map<Index, Index>& tau2) {
  std::set<Index> seen;
  for (const auto& [start, unused] : p.map) {
    if (seen.count(start)) continue;
    std::vector<Index> cyc;
    for (Index x = start; !seen.count(x); x = p(x)) {
      seen.insert(x);
      cyc.push_back(x);
    }
    const long L = static_cast<long>(cyc.size());
    for (long j = 0; j < L; ++j) {
      const Index a = cyc[j];
      const Index b1 = cyc[((-j) % L + L) % L];
      const Index b2 = cyc[((1 - j) % L + L) % L];
      if (a != b1) tau1[a] = b1;
      if (a != b2) tau2[a] = b2;
    }
  }
}

using Column = std::vector<std::pair<Index, cd>>;

Column applyReflection(const std::map<Index, Index>& tau, const Column& v, cd c, cd s) {
  Column out;
  for (const auto& [x, w] : v) {
    auto it = tau.find(x);
    if (it == tau.end()) {
      out.push_back({x, w});
    } else {
      out.push_back({x, w * c});
      out.push_back({it->second, w * s});
    }
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
  Column merged;
  for (const auto& e : out) {
    if (!merged.empty() && merged.back().first == e.first) merged.back().second += e.second;
    else merged.push_back(e);
  }
  return merged;
}

}  // namespace

HomPath rotationPath(const HomSnapshot& legA, const HomSnapshot& legB, int steps, const IndexHint& hint,
                     bool keepAll) {
  if (steps < 2) fail(ErrorCode::BadParams, "a path needs at least two steps");
  const Permutation pi = inferPermutation(legA, legB, hint);
  HomSnapshot end = legA;
  for (auto& img : end.images) img = relabelBy(img, pi);
  const double mismatch = snapshotDistance(end, legB);
  if (mismatch != 0.0)
    notRelated("relabeled first leg differs from the second leg by " + std::to_string(mismatch));

  std::map<Index, Index> tau1, tau2;
  splitReflections(pi, tau1, tau2);

  HomPath path;
  path.stepCount = steps;
  HomSnapshot prev = legA;
  path.steps.push_back(legA);
  std::string why;
  path.allStarHom = checkSnapshotStarHom(legA, kEndpointTol, &why);
  for (int k = 1; k < steps; ++k) {
    HomSnapshot cur;
    if (k == steps - 1) {
      cur = end;
    } else {
      const double t = static_cast<double>(k) / (steps - 1);
      const cd e = std::exp(cd(0.0, M_PI * t));
      const cd c = (1.0 + e) / 2.0, s = (1.0 - e) / 2.0;
      std::map<Index, Column> cols;
      auto column = [&](Index x) -> const Column& {
        auto it = cols.find(x);
        if (it != cols.end()) return it->second;
        Column v = applyReflection(tau2, applyReflection(tau1, Column{{x, 1.0}}, c, s), c, s);
        return cols.emplace(x, std::move(v)).first->second;
      };
      cur.gens = legA.gens;
      for (const auto& img : legA.images) {
        StableMat out(1, img.coeffDim());
        for (const auto& [key, blk] : img.entries()) {
          const Column& ur = column(key.first[0]);
          const Column& uc = column(key.second[0]);
          for (const auto& [r, wr] : ur)
            for (const auto& [cc, wc] : uc) out.add({r}, {cc}, blk * (wr * std::conj(wc)));
        }
        cur.images.push_back(std::move(out));
      }
    }
    path.continuityBound = std::max(path.continuityBound, snapshotDistance(prev, cur));
    if (path.allStarHom) path.allStarHom = checkSnapshotStarHom(cur, kEndpointTol, &why);
    prev = cur;
    if (keepAll || k == steps - 1) path.steps.push_back(std::move(cur));
  }
  path.endpointError = std::max(snapshotDistance(path.steps.front(), legA), snapshotDistance(path.steps.back(), legB));
  path.rateConstant = path.continuityBound * (steps - 1);
  return path;
}

void validatePath(HomPath& path, const HomSnapshot& legA, const HomSnapshot& legB, double tol) {
  if (path.steps.size() < 2) fail(ErrorCode::WitnessMissing, "witness has fewer than two snapshots");
  path.stepCount = static_cast<int>(path.steps.size());
  path.continuityBound = 0.0;
  path.allStarHom = true;
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    if (k) path.continuityBound = std::max(path.continuityBound, snapshotDistance(path.steps[k - 1], path.steps[k]));
    if (path.allStarHom) path.allStarHom = checkSnapshotStarHom(path.steps[k], tol);
  }
  path.endpointError = std::max(snapshotDistance(path.steps.front(), legA), snapshotDistance(path.steps.back(), legB));
  path.rateConstant = path.continuityBound * (path.stepCount - 1);
}

// Diagram catalogue.

namespace {

const CMat& one1() {
  static const CMat m = CMat::Identity(1, 1);
  return m;
}

StableMat unitK(Index r, Index c) { return StableMat::unit(r, c, one1()); }
StableMat zeroK(int factors = 1) { return StableMat(factors, 1); }

// Element of a direct sum placed in slot s of `count` slots.
std::vector<StableMat> slot(int s, int count, const StableMat& x) {
  std::vector<StableMat> v(count, StableMat(x.factors(), x.coeffDim()));
  v[s] = x;
  return v;
}

// Matrix unit with one factor per tuple coordinate.
StableMat unitTuple(const MultiIndex& r, const MultiIndex& c) { return StableMat::unit(r, c, one1()); }

using ExactLeg = std::function<StableMat(int s, const MultiIndex& r, const MultiIndex& c)>;

SubCheck exactCheck(const std::string& name, const std::vector<std::vector<int>>& ranges, const ExactLeg& a,
                    const ExactLeg& b) {
  SubCheck sc;
  sc.name = name;
  const auto gens = windowGenerators(ranges);
  std::map<int, std::vector<const GenLabel*>> bySummand;
  for (const auto& g : gens) bySummand[g.summand].push_back(&g);
  std::size_t units = 0;
  for (const auto& [s, list] : bySummand) {
    for (const auto* r : list) {
      for (const auto* c : list) {
        sc.maxError = std::max(sc.maxError, a(s, r->idx, c->idx).maxAbsDiff(b(s, r->idx, c->idx)));
        ++units;
      }
    }
  }
  sc.pass = sc.maxError == 0.0;
  sc.note = std::to_string(units) + " matrix units compared";
  return sc;
}

using GenLeg = std::function<StableMat(int s, const MultiIndex& m)>;

SubCheck homotopyCheck(const std::string& name, const std::vector<std::vector<int>>& ranges, const GenLeg& a,
                       const GenLeg& b, const RigOptions& opt, std::map<std::string, HomPath>& kept) {
  SubCheck sc;
  sc.name = name;
  sc.homotopy = true;
  const auto gens = windowGenerators(ranges);
  const HomSnapshot legA = buildLeg(gens, [&](const GenLabel& g) { return a(g.summand, g.idx); });
  const HomSnapshot legB = buildLeg(gens, [&](const GenLabel& g) { return b(g.summand, g.idx); });
  std::string why;
  if (!checkSnapshotStarHom(legA, 0.0, &why) || !checkSnapshotStarHom(legB, 0.0, &why)) {
    sc.note = "leg is not a *-homomorphism: " + why;
    sc.maxError = 1.0;
    return sc;
  }
  HomPath path;
  auto it = opt.witnesses.find(name);
  if (it != opt.witnesses.end()) {
    path = it->second;
    validatePath(path, legA, legB);
    sc.note = "supplied witness";
  } else if (!opt.construct) {
    fail(ErrorCode::WitnessMissing, "no witness for homotopy sub-check " + name);
  } else {
    try {
      path = rotationPath(legA, legB, opt.steps, nullptr, opt.keepSnapshots);
      sc.note = "rotation witness";
    } catch (const Error& e) {
      sc.note = e.what();
      sc.maxError = 1.0;
      return sc;
    }
  }
  sc.steps = path.stepCount;
  sc.continuityBound = path.continuityBound;
  sc.endpointError = path.endpointError;
  sc.maxError = path.endpointError;
  sc.pass = path.allStarHom && path.endpointError <= kEndpointTol &&
            path.continuityBound <= kContinuityRate / (path.stepCount - 1);
  if (!path.allStarHom) sc.note += "; a snapshot is not a *-homomorphism";
  if (opt.keepSnapshots) kept[name] = path;
  return sc;
}

}  // namespace

const std::vector<std::string>& rigCatalogue() {
  static const std::vector<std::string> names = {"assoc-theta", "unit-iota00", "comm-mu",
                                                 "assoc-mu", "left-distrib", "right-distrib",
                                                 "zero-laws", "symmetry-kk"};
  return names;
}

RigReport verifyRigDiagram(const std::string& name, const RigOptions& opt) {
  const auto& cat = rigCatalogue();
  if (std::find(cat.begin(), cat.end(), name) == cat.end())
    fail(ErrorCode::UnknownDiagram, "no catalogue diagram named " + name);
  if (opt.truncation < 1) fail(ErrorCode::BadParams, "truncation must be positive");
  const Pairing& p = opt.pairing;
  const int W = opt.truncation;
  RigReport rep;
  rep.diagram = name;
  rep.truncation = W;
  auto& checks = rep.checks;

  auto mu = [&](const std::vector<StableMat>& v) { return muMap(p, v[0], v[1]); };
  auto theta = [&](const StableMat& a, const StableMat& b) { return thetaMap(p, kron(a, b)); };

  if (name == "assoc-theta") {
    checks.push_back(homotopyCheck(
        "theta-assoc", {{W, W, W}},
        [&](int, const MultiIndex& m) { return theta(theta(unitK(m[0], 0), unitK(m[1], 0)), unitK(m[2], 0)); },
        [&](int, const MultiIndex& m) { return theta(unitK(m[0], 0), theta(unitK(m[1], 0), unitK(m[2], 0))); },
        opt, rep.paths));
  } else if (name == "unit-iota00") {
    checks.push_back(exactCheck(
        "corner", {{1}}, [&](int, const MultiIndex&, const MultiIndex&) { return theta(iota00(one1()), iota00(one1())); },
        [&](int, const MultiIndex&, const MultiIndex&) { return iota00(one1()); }));
    checks.push_back(homotopyCheck(
        "left-unit", {{W}}, [&](int, const MultiIndex& m) { return theta(iota00(one1()), unitK(m[0], 0)); },
        [&](int, const MultiIndex& m) { return unitK(m[0], 0); }, opt, rep.paths));
    checks.push_back(homotopyCheck(
        "right-unit", {{W}}, [&](int, const MultiIndex& m) { return theta(unitK(m[0], 0), iota00(one1())); },
        [&](int, const MultiIndex& m) { return unitK(m[0], 0); }, opt, rep.paths));
  } else if (name == "comm-mu") {
    checks.push_back(exactCheck(
        "mu-interleaves", {{W}, {W}},
        [&](int s, const MultiIndex& r, const MultiIndex& c) { return mu(slot(s, 2, unitK(r[0], c[0]))); },
        [&](int s, const MultiIndex& r, const MultiIndex& c) { return unitK(p.pair2(s, r[0]), p.pair2(s, c[0])); }));
    checks.push_back(homotopyCheck(
        "mu-swap", {{W}, {W}}, [&](int s, const MultiIndex& m) { return mu(slot(s, 2, unitK(m[0], 0))); },
        [&](int s, const MultiIndex& m) {
          auto v = slot(s, 2, unitK(m[0], 0));
          return muMap(p, v[1], v[0]);
        },
        opt, rep.paths));
  } else if (name == "assoc-mu") {
    checks.push_back(homotopyCheck(
        "mu-assoc", {{W}, {W}, {W}},
        [&](int s, const MultiIndex& m) {
          auto v = slot(s, 3, unitK(m[0], 0));
          return muMap(p, muMap(p, v[0], v[1]), v[2]);
        },
        [&](int s, const MultiIndex& m) {
          auto v = slot(s, 3, unitK(m[0], 0));
          return muMap(p, v[0], muMap(p, v[1], v[2]));
        },
        opt, rep.paths));
  } else if (name == "left-distrib" || name == "right-distrib") {
    const bool left = name == "left-distrib";
    // Summand s carries x (x) y with y (left) or x (right) in slot s.
    auto xOf = [](const MultiIndex& r, const MultiIndex& c) { return unitK(r[0], c[0]); };
    auto yOf = [](const MultiIndex& r, const MultiIndex& c) { return unitK(r[1], c[1]); };
    const std::vector<std::vector<int>> two = {{W, W}, {W, W}};
    if (left) {
      checks.push_back(exactCheck(
          "upper-triangle", two,
          [&](int s, const MultiIndex& r, const MultiIndex& c) { return kron(xOf(r, c), mu(slot(s, 2, yOf(r, c)))); },
          [&](int s, const MultiIndex& r, const MultiIndex& c) {
            auto v = slot(s, 2, yOf(r, c));
            return mergePair2(p, kron(xOf(r, c), dMap(v[0], v[1])), 1);
          }));
    } else {
      checks.push_back(exactCheck(
          "upper-triangle", two,
          [&](int s, const MultiIndex& r, const MultiIndex& c) { return kron(mu(slot(s, 2, xOf(r, c))), yOf(r, c)); },
          [&](int s, const MultiIndex& r, const MultiIndex& c) {
            auto v = slot(s, 2, xOf(r, c));
            return mergePair2(p, kron(dMap(v[0], v[1]), yOf(r, c)), 0);
          }));
    }
    checks.push_back(exactCheck(
        "lower-triangle", {{W}, {W}},
        [&](int s, const MultiIndex& r, const MultiIndex& c) { return mu(slot(s, 2, unitK(r[0], c[0]))); },
        [&](int s, const MultiIndex& r, const MultiIndex& c) {
          auto v = slot(s, 2, unitK(r[0], c[0]));
          return theta2(p, dMap(v[0], v[1]));
        }));
    checks.push_back(exactCheck(
        "left", two,
        [&](int s, const MultiIndex& r, const MultiIndex& c) {
          auto v = slot(s, 2, kron(xOf(r, c), yOf(r, c)));
          return dMap(v[0], v[1]);
        },
        [&](int s, const MultiIndex& r, const MultiIndex& c) {
          if (left) {
            auto v = slot(s, 2, yOf(r, c));
            return permuteFactors(kron(xOf(r, c), dMap(v[0], v[1])), {1, 0, 2});
          }
          auto v = slot(s, 2, xOf(r, c));
          return kron(dMap(v[0], v[1]), yOf(r, c));
        }));
    checks.push_back(exactCheck(
        "bottom-left", two,
        [&](int s, const MultiIndex& r, const MultiIndex& c) {
          auto v = slot(s, 2, kron(xOf(r, c), yOf(r, c)));
          return mergeNN(p, dMap(v[0], v[1]), 1);
        },
        [&](int s, const MultiIndex& r, const MultiIndex& c) {
          auto v = slot(s, 2, theta(xOf(r, c), yOf(r, c)));
          return dMap(v[0], v[1]);
        }));
    if (left) {
      checks.push_back(homotopyCheck(
          "right", {{W, 2, W}},
          [&](int, const MultiIndex& m) { return thetaMap(p, mergePair2(p, unitTuple(m, {0, 0, 0}), 1)); },
          [&](int, const MultiIndex& m) {
            return theta2(p, mergeNN(p, permuteFactors(unitTuple(m, {0, 0, 0}), {1, 0, 2}), 1));
          },
          opt, rep.paths));
      checks.push_back(homotopyCheck(
          "outer", two,
          [&](int s, const MultiIndex& m) { return theta(unitK(m[0], 0), mu(slot(s, 2, unitK(m[1], 0)))); },
          [&](int s, const MultiIndex& m) { return mu(slot(s, 2, theta(unitK(m[0], 0), unitK(m[1], 0)))); }, opt, rep.paths));
    } else {
      checks.push_back(homotopyCheck(
          "right", {{2, W, W}},
          [&](int, const MultiIndex& m) { return thetaMap(p, mergePair2(p, unitTuple(m, {0, 0, 0}), 0)); },
          [&](int, const MultiIndex& m) { return theta2(p, mergeNN(p, unitTuple(m, {0, 0, 0}), 1)); }, opt, rep.paths));
      checks.push_back(homotopyCheck(
          "outer", two,
          [&](int s, const MultiIndex& m) { return theta(mu(slot(s, 2, unitK(m[0], 0))), unitK(m[1], 0)); },
          [&](int s, const MultiIndex& m) { return mu(slot(s, 2, theta(unitK(m[0], 0), unitK(m[1], 0)))); }, opt, rep.paths));
    }
  } else if (name == "zero-laws") {
    checks.push_back(exactCheck(
        "mult-zero-left", {{W}},
        [&](int, const MultiIndex& r, const MultiIndex& c) { return theta(zeroK(), unitK(r[0], c[0])); },
        [&](int, const MultiIndex&, const MultiIndex&) { return zeroK(); }));
    checks.push_back(exactCheck(
        "mult-zero-right", {{W}},
        [&](int, const MultiIndex& r, const MultiIndex& c) { return theta(unitK(r[0], c[0]), zeroK()); },
        [&](int, const MultiIndex&, const MultiIndex&) { return zeroK(); }));
    checks.push_back(exactCheck(
        "mu-right-zero", {{W}},
        [&](int, const MultiIndex& r, const MultiIndex& c) { return muMap(p, unitK(r[0], c[0]), zeroK()); },
        [&](int, const MultiIndex& r, const MultiIndex& c) { return unitK(p.pair2(0, r[0]), p.pair2(0, c[0])); }));
    checks.push_back(exactCheck(
        "mu-left-zero", {{W}},
        [&](int, const MultiIndex& r, const MultiIndex& c) { return muMap(p, zeroK(), unitK(r[0], c[0])); },
        [&](int, const MultiIndex& r, const MultiIndex& c) { return unitK(p.pair2(1, r[0]), p.pair2(1, c[0])); }));
    checks.push_back(homotopyCheck(
        "additive-unit", {{W}}, [&](int, const MultiIndex& m) { return muMap(p, unitK(m[0], 0), zeroK()); },
        [&](int, const MultiIndex& m) { return unitK(m[0], 0); }, opt, rep.paths));
  } else if (name == "symmetry-kk") {
    checks.push_back(homotopyCheck(
        "xi-kk", {{W, W}},
        [&](int, const MultiIndex& m) {
          return thetaMap(p, permuteFactors(kron(unitK(m[0], 0), unitK(m[1], 0)), {1, 0}));
        },
        [&](int, const MultiIndex& m) { return theta(unitK(m[0], 0), unitK(m[1], 0)); }, opt, rep.paths));
  }

  bool anyExact = false, anyHom = false;
  rep.pass = true;
  for (const auto& c : checks) {
    rep.maxError = std::max(rep.maxError, c.maxError);
    rep.pass = rep.pass && c.pass;
    (c.homotopy ? anyHom : anyExact) = true;
  }
  rep.mode = anyExact && anyHom ? "exact+homotopy" : (anyHom ? "homotopy" : "exact");
  return rep;
}

std::string rigReportJson(const RigReport& r) {
  nlohmann::ordered_json j;
  j["diagram"] = r.diagram;
  j["mode"] = r.mode;
  j["truncation"] = r.truncation;
  j["maxError"] = r.maxError;
  j["pass"] = r.pass;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["kind"] = c.homotopy ? "homotopy" : "exact";
    cj["maxError"] = c.maxError;
    if (c.homotopy) {
      cj["continuityBound"] = c.continuityBound;
      cj["endpointError"] = c.endpointError;
      cj["steps"] = c.steps;
    }
    cj["pass"] = c.pass;
    cj["note"] = c.note;
    j["checks"].push_back(cj);
  }
  return j.dump();
}

static nlohmann::json matToJson(const StableMat& m) {
  nlohmann::json j;
  j["factors"] = m.factors();
  j["d"] = m.coeffDim();
  j["entries"] = nlohmann::json::array();
  for (const auto& [k, b] : m.entries()) {
    std::vector<double> re, im;
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c) {
        re.push_back(b(r, c).real());
        im.push_back(b(r, c).imag());
      }
    j["entries"].push_back({{"row", k.first}, {"col", k.second}, {"re", re}, {"im", im}});
  }
  return j;
}

static StableMat matFromJson(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  StableMat m(j.at("factors").get<int>(), d);
  for (const auto& e : j.at("entries")) {
    const auto re = e.at("re").get<std::vector<double>>();
    const auto im = e.at("im").get<std::vector<double>>();
    if (re.size() != static_cast<std::size_t>(d * d) || im.size() != re.size())
      fail(ErrorCode::BadParams, "coefficient block has the wrong size");
    CMat b(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) b(r, c) = cd(re[r * d + c], im[r * d + c]);
    m.add(e.at("row").get<MultiIndex>(), e.at("col").get<MultiIndex>(), b);
  }
  return m;
}

std::string stableMatToJson(const StableMat& m) { return matToJson(m).dump(); }

StableMat stableMatFromJson(const std::string& text) {
  try {
    return matFromJson(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("stable matrix: ") + e.what());
  }
}

std::string homPathToJson(const HomPath& p) {
  nlohmann::json j;
  j["stepCount"] = p.stepCount;
  j["steps"] = nlohmann::json::array();
  for (const auto& s : p.steps) {
    nlohmann::json sj;
    sj["gens"] = nlohmann::json::array();
    for (const auto& g : s.gens) sj["gens"].push_back({{"summand", g.summand}, {"idx", g.idx}});
    sj["images"] = nlohmann::json::array();
    for (const auto& m : s.images) sj["images"].push_back(matToJson(m));
    j["steps"].push_back(sj);
  }
  return j.dump();
}

HomPath homPathFromJson(const std::string& text) {
  HomPath p;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& sj : j.at("steps")) {
      HomSnapshot s;
      for (const auto& g : sj.at("gens")) s.gens.push_back({g.at("summand").get<int>(), g.at("idx").get<MultiIndex>()});
      for (const auto& m : sj.at("images")) s.images.push_back(matFromJson(m));
      p.steps.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("witness file: ") + e.what());
  }
  p.stepCount = static_cast<int>(p.steps.size());
  return p;
}

}  // namespace rig
