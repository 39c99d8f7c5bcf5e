#include "rigcheck/gm_monoid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rig {

using cd = std::complex<double>;

ModelAssign defaultGmModel() {
  ModelAssign m;
  m.genDims = {{"a", 2}, {"b", 2}, {"c", 1}, {"d", 3}};
  return m;
}

static int itemDim(const TTEndo& t, const ModelAssign& model) {
  switch (t.tag()) {
    case EndoTag::IdF: return 1;
    case EndoTag::MnF: return t.size();
    case EndoTag::CXF: return t.size() + 1;
    case EndoTag::DA: return static_cast<int>(dimOf(t.coefficient(), model));
    case EndoTag::KF: break;
  }
  fail(ErrorCode::BadParams, "stabilization cannot appear inside the functor of a generalized morphism");
}

static void requireComposite(const Word& w) {
  if (w.kind() == WordKind::OplusW) fail(ErrorCode::BadParams, "only composite functors are supported");
  if (w.kind() == WordKind::TensorW) {
    requireComposite(w.left());
    requireComposite(w.right());
  }
}

int functorDim(const BrEndo& f, const ModelAssign& model) {
  requireComposite(f.shape());
  int d = 1;
  for (const auto& t : f.items()) d *= itemDim(t, model);
  return d;
}

static ModelAssign modelFor(const BrEndo& f, ModelAssign base) {
  for (const auto& t : f.items()) {
    if (t.tag() == EndoTag::MnF) base.genDims[matrixObj(t.size()).genId()] = t.size();
    if (t.tag() == EndoTag::CXF) base.genDims[functionsObj(t.size()).genId()] = t.size() + 1;
  }
  return base;
}

static CMat eUnit(int n, int i, int j) {
  CMat m = CMat::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

GenMor zeroGM(int srcDim, const BrEndo& functor, int tgtDim, const ModelAssign& model) {
  if (srcDim < 1 || tgtDim < 1) fail(ErrorCode::BadParams, "algebra dimensions must be positive");
  GenMor g;
  g.srcDim = srcDim;
  g.functor = functor;
  g.fDim = functorDim(functor, model);
  g.tgtDim = tgtDim;
  g.images.assign(srcDim, std::vector<StableMat>(srcDim, StableMat(1, g.coeffDim())));
  return g;
}

GenMor iota00Rep(int n) {
  GenMor g = zeroGM(n, BrEndo::single(TTEndo::identity()), n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.images[i][j] = StableMat::unit(Index{0}, Index{0}, eUnit(n, i, j));
  return g;
}

bool isStarHom(const GenMor& g, double tol, std::string* why) {
  auto bad = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  const int n = g.srcDim;
  if (static_cast<int>(g.images.size()) != n) return bad("image table has the wrong size");
  for (const auto& row : g.images) {
    if (static_cast<int>(row.size()) != n) return bad("image table has the wrong size");
    for (const auto& m : row)
      if (m.coeffDim() != g.coeffDim() || m.factors() != 1) return bad("image has the wrong coefficient algebra");
  }
  const StableMat zero(1, g.coeffDim());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (g.images[i][j].adjoint().maxAbsDiff(g.images[j][i]) > tol)
        return bad("adjoint of e" + std::to_string(i) + std::to_string(j) + " is not preserved");
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const StableMat prod = g.images[i][j] * g.images[k][l];
          const StableMat& expect = j == k ? g.images[i][l] : zero;
          if (prod.maxAbsDiff(expect) > tol) return bad("unit relations fail");
        }
    }
  return true;
}

double gmDistance(const GenMor& a, const GenMor& b) {
  if (a.srcDim != b.srcDim || a.coeffDim() != b.coeffDim())
    fail(ErrorCode::SignatureMismatch, "generalized morphisms have different shapes");
  double m = 0.0;
  for (int i = 0; i < a.srcDim; ++i)
    for (int j = 0; j < a.srcDim; ++j) m = std::max(m, a.images[i][j].maxAbsDiff(b.images[i][j]));
  return m;
}

GenMor randomGenMor(std::mt19937_64& rng, const RandomGMOptions& opt, const ModelAssign& model) {
  std::uniform_int_distribution<int> srcD(1, opt.maxSrcDim), tgtD(1, 2);
  const int n = srcD(rng);
  BrEndo functor = BrEndo::single(TTEndo::identity());
  if (opt.suspension) {
    functor = BrEndo::single(TTEndo::functions(opt.grid));
  } else {
    auto item = [&]() {
      switch (rng() % 4) {
        case 0: return TTEndo::identity();
        case 1: return TTEndo::tensorBy(ObjTerm::gen(rng() % 2 ? "a" : "b"));
        case 2: return TTEndo::matrices(2);
        default: return TTEndo::tensorBy(ObjTerm::gen("c"));
      }
    };
    functor = BrEndo::single(item());
    const bool two = opt.functorItems == 0 ? rng() % 2 == 1 : opt.functorItems == 2;
    if (two) functor = BrEndo::compose(functor, BrEndo::single(item()));
  }
  return randomGenMorOver(rng, n, functor, tgtD(rng), opt, model);
}

GenMor randomGenMorOver(std::mt19937_64& rng, int n, const BrEndo& functor, int tgtDim, const RandomGMOptions& opt,
                        const ModelAssign& model) {
  GenMor g = zeroGM(n, functor, tgtDim, model);
  // Suspension coefficients vanish at both ends of the grid.
  const bool susp = functor.isSingle() && functor.items()[0].tag() == EndoTag::CXF;
  const int summands = std::min<int>(static_cast<int>(rng() % (opt.maxSummands + 1)), opt.window / n);
  std::vector<Index> slots(opt.window);
  std::iota(slots.begin(), slots.end(), 0);
  std::shuffle(slots.begin(), slots.end(), rng);
  for (int s = 0; s < summands; ++s) {
    CMat q = CMat::Zero(g.coeffDim(), g.coeffDim());
    for (int k = 0; k < g.coeffDim(); ++k) {
      const int gridPos = k / g.tgtDim;
      const bool boundary = susp && (gridPos == 0 || gridPos == functor.items()[0].size());
      if (!boundary && rng() % 3 != 0) q(k, k) = 1.0;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const StableMat e = StableMat::unit(slots[s * n + i], slots[s * n + j], q);
        g.images[i][j] = g.images[i][j] + e;
      }
  }
  return g;
}

static void requireSameSignature(const GenMor& a, const GenMor& b) {
  if (a.srcDim != b.srcDim || a.tgtDim != b.tgtDim || !(a.functor == b.functor) || a.fDim != b.fDim)
    fail(ErrorCode::SignatureMismatch, "addition needs a common source, functor and target");
}

GenMor addGM(const GenMor& a, const GenMor& b, const Pairing& p) {
  requireSameSignature(a, b);
  GenMor r = a;
  for (int i = 0; i < a.srcDim; ++i)
    for (int j = 0; j < a.srcDim; ++j) r.images[i][j] = muMap(p, a.images[i][j], b.images[i][j]);
  return r;
}

GenMor composeGM(const GenMor& psi, const GenMor& phi, const Pairing& p) {
  if (phi.tgtDim != psi.srcDim)
    fail(ErrorCode::SignatureMismatch, "target of the first morphism differs from the source of the second");
  GenMor r;
  r.srcDim = phi.srcDim;
  r.functor = BrEndo::compose(phi.functor, psi.functor);
  r.fDim = phi.fDim * psi.fDim;
  r.tgtDim = psi.tgtDim;
  const int bDim = phi.tgtDim, gc = psi.coeffDim();
  r.images.assign(r.srcDim, std::vector<StableMat>(r.srcDim, StableMat(1, r.coeffDim())));
  for (int i = 0; i < r.srcDim; ++i)
    for (int j = 0; j < r.srcDim; ++j) {
      StableMat out(1, r.coeffDim());
      for (const auto& [key, x] : phi.images[i][j].entries()) {
        for (int row = 0; row < x.rows(); ++row)
          for (int col = 0; col < x.cols(); ++col) {
            const cd v = x(row, col);
            if (v == cd(0)) continue;
            const int f = row / bDim, b = row % bDim, f2 = col / bDim, b2 = col % bDim;
            for (const auto& [k2, y] : psi.images[b][b2].entries()) {
              CMat blk = CMat::Zero(r.coeffDim(), r.coeffDim());
              blk.block(f * gc, f2 * gc, gc, gc) = v * y;
              out.add({p.pairNN(key.first[0], k2.first[0])}, {p.pairNN(key.second[0], k2.second[0])}, blk);
            }
          }
      }
      r.images[i][j] = out;
    }
  return r;
}

static GenMor conjugateCoeff(const GenMor& phi, const CMat& u) {
  GenMor r = phi;
  for (auto& row : r.images)
    for (auto& m : row) m = m.mapCoeff([&](const CMat& x) { return CMat(u * x * u.adjoint()); }, phi.coeffDim());
  return r;
}

GenMor pushforward(const EndoMor& alpha, const GenMor& phi, const ModelAssign& model) {
  if (!(alpha.src() == phi.functor))
    fail(ErrorCode::SignatureMismatch, "transformation starts at " + alpha.src().str() + ", not " + phi.functor.str());
  const ModelAssign m = modelFor(alpha.tgt(), modelFor(alpha.src(), model));
  const int newF = functorDim(alpha.tgt(), m);
  const SparseMat perm = evalMor(alpha.body(), m);
  if (perm.rows() != newF || perm.cols() != phi.fDim)
    fail(ErrorCode::DimensionMismatch, "evaluated transformation has the wrong size");
  if (newF != phi.fDim) fail(ErrorCode::BadParams, "only dimension-preserving transformations are supported");
  for (int r = 0; r < perm.rows(); ++r) {
    const auto& row = perm.row(r);
    if (row.size() != 1 || row[0].second != Rational(1))
      fail(ErrorCode::BadParams, "only permutation transformations are supported");
  }
  const CMat u = kron(perm, SparseMat::identity(phi.tgtDim)).toComplex();
  GenMor r = conjugateCoeff(phi, u);
  r.functor = alpha.tgt();
  return r;
}

GenMor negateGM(const GenMor& phi) {
  int pos = -1;
  for (std::size_t k = 0; k < phi.functor.items().size(); ++k)
    if (phi.functor.items()[k].tag() == EndoTag::CXF) {
      pos = static_cast<int>(k);
      break;
    }
  if (pos < 0) fail(ErrorCode::NoInversionAvailable, "functor " + phi.functor.str() + " has no shipped inversion");
  const ModelAssign model = defaultGmModel();
  std::vector<int> dims;
  for (const auto& t : phi.functor.items()) dims.push_back(itemDim(t, model));
  dims.push_back(phi.tgtDim);
  const int total = phi.coeffDim();
  CMat u = CMat::Zero(total, total);
  for (int idx = 0; idx < total; ++idx) {
    std::vector<int> digits(dims.size());
    int rest = idx;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
      digits[k] = rest % dims[k];
      rest /= dims[k];
    }
    digits[pos] = dims[pos] - 1 - digits[pos];
    int out = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) out = out * dims[k] + digits[k];
    u(out, idx) = 1.0;
  }
  return conjugateCoeff(phi, u);
}

HomSnapshot gmSnapshot(const GenMor& g) {
  HomSnapshot s;
  for (int i = 0; i < g.srcDim; ++i) {
    s.gens.push_back({0, {i}});
    s.images.push_back(g.images[i][0]);
  }
  return s;
}

const char* gmLawName(GMLaw law) {
  switch (law) {
    case GMLaw::AddLeftNeutral: return "add-left-neutral";
    case GMLaw::AddRightNeutral: return "add-right-neutral";
    case GMLaw::AddComm: return "add-commutative";
    case GMLaw::AddAssoc: return "add-associative";
    case GMLaw::ComposeLeftNeutral: return "compose-left-neutral";
    case GMLaw::ComposeRightNeutral: return "compose-right-neutral";
  }
  return "?";
}

static LawWitness witness(GMLaw law, const GenMor& a, const GenMor& b, const IndexHint& hint, int steps) {
  LawWitness w{law, {}, false};
  w.path = rotationPath(gmSnapshot(a), gmSnapshot(b), steps, hint);
  w.pass = w.path.allStarHom && w.path.endpointError <= kEndpointTol &&
           w.path.continuityBound <= kContinuityRate / (steps - 1);
  return w;
}

LawWitness witnessAddNeutral(const GenMor& phi, bool left, const Pairing& p, int steps) {
  const GenMor zero = zeroGM(phi.srcDim, phi.functor, phi.tgtDim);
  const GenMor sum = left ? addGM(zero, phi, p) : addGM(phi, zero, p);
  const int tag = left ? 1 : 0;
  return witness(left ? GMLaw::AddLeftNeutral : GMLaw::AddRightNeutral, sum, phi,
                 [&p, tag](Index k) -> std::optional<Index> {
                   auto [i, n] = p.unpair2(k);
                   if (i != tag) return std::nullopt;
                   return n;
                 },
                 steps);
}

LawWitness witnessAddComm(const GenMor& phi, const GenMor& psi, const Pairing& p, int steps) {
  return witness(GMLaw::AddComm, addGM(phi, psi, p), addGM(psi, phi, p),
                 [&p](Index k) -> std::optional<Index> {
                   auto [i, n] = p.unpair2(k);
                   return p.pair2(1 - i, n);
                 },
                 steps);
}

LawWitness witnessAddAssoc(const GenMor& a, const GenMor& b, const GenMor& c, const Pairing& p, int steps) {
  return witness(GMLaw::AddAssoc, addGM(addGM(a, b, p), c, p), addGM(a, addGM(b, c, p), p),
                 [&p](Index k) -> std::optional<Index> {
                   auto [i, n] = p.unpair2(k);
                   if (i == 1) return p.pair2(1, p.pair2(1, n));
                   auto [j, m] = p.unpair2(n);
                   return j == 0 ? p.pair2(0, m) : p.pair2(1, p.pair2(0, m));
                 },
                 steps);
}

LawWitness witnessComposeNeutral(const GenMor& phi, bool left, const Pairing& p, int steps) {
  const GenMor comp = left ? composeGM(iota00Rep(phi.tgtDim), phi, p) : composeGM(phi, iota00Rep(phi.srcDim), p);
  return witness(left ? GMLaw::ComposeLeftNeutral : GMLaw::ComposeRightNeutral, comp, phi,
                 [&p, left](Index k) -> std::optional<Index> {
                   auto [a, b] = p.unpairNN(k);
                   if (left) return b == 0 ? std::optional<Index>(a) : std::nullopt;
                   return a == 0 ? std::optional<Index>(b) : std::nullopt;
                 },
                 steps);
}

// Suspension.

SuspElem makeSusp(int grid, const std::vector<CMat>& samples) {
  if (grid < 2) fail(ErrorCode::BadParams, "suspension grid needs at least two intervals");
  if (static_cast<int>(samples.size()) != grid + 1) fail(ErrorCode::BadParams, "expected grid + 1 samples");
  for (const auto& s : samples)
    if (s.rows() != samples[0].rows() || s.cols() != samples[0].cols() || s.rows() != s.cols())
      fail(ErrorCode::BadParams, "samples must be square of one size");
  if (!samples.front().isZero(0.0) || !samples.back().isZero(0.0))
    fail(ErrorCode::BadParams, "suspension samples must vanish at both ends");
  return SuspElem{grid, samples};
}

SuspElem suspFromFunction(int grid, int dim, const std::function<CMat(double)>& f) {
  std::vector<CMat> samples;
  for (int k = 0; k <= grid; ++k) {
    CMat v = (k == 0 || k == grid) ? CMat::Zero(dim, dim) : f(static_cast<double>(k) / grid);
    samples.push_back(v);
  }
  return makeSusp(grid, samples);
}

static CMat evalSusp(const SuspElem& f, double t, bool snap) {
  t = std::clamp(t, 0.0, 1.0);
  const double x = t * f.grid;
  const double r = std::round(x);
  if (snap && std::abs(x - r) < 1e-9) return f.samples[static_cast<std::size_t>(r)];
  const int k = std::min(static_cast<int>(std::floor(x)), f.grid - 1);
  const double w = x - k;
  return (1.0 - w) * f.samples[k] + w * f.samples[k + 1];
}

CMat suspAt(const SuspElem& f, double t) { return evalSusp(f, t, true); }

SuspElem invSusp(const SuspElem& f) {
  SuspElem r = f;
  std::reverse(r.samples.begin(), r.samples.end());
  return r;
}

double suspDistance(const SuspElem& a, const SuspElem& b) {
  if (a.grid != b.grid) fail(ErrorCode::BadParams, "suspension grids differ");
  double m = 0.0;
  for (std::size_t k = 0; k < a.samples.size(); ++k) m = std::max(m, (a.samples[k] - b.samples[k]).cwiseAbs().maxCoeff());
  return m;
}

double blockDistance(const SuspBlock& a, const SuspBlock& b) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m = std::max(m, suspDistance(a.m[i][j], b.m[i][j]));
  return m;
}

double blockNorm(const SuspBlock& a) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    for (const auto& s : a.m[i][0].samples) m = std::max(m, s.cwiseAbs().maxCoeff());
  for (int i = 0; i < 2; ++i)
    for (const auto& s : a.m[i][1].samples) m = std::max(m, s.cwiseAbs().maxCoeff());
  return m;
}

static SuspBlock nullStageImpl(int stage, const SuspElem& f, double s, bool snap) {
  if (stage < 1 || stage > 3) fail(ErrorCode::BadParams, "stage must be 1, 2 or 3");
  const SuspElem fb = invSusp(f);
  const int M = f.grid;
  const int dim = f.valueDim();
  SuspBlock out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.m[i][j] = SuspElem{M, std::vector<CMat>(M + 1, CMat::Zero(dim, dim))};
  // Support of the top entry shrinks to [0, a], the bottom entry moves to [1 - a, 1].
  auto transported = [&](double a, double t, CMat& top, CMat& bottom) {
    top = evalSusp(f, std::min(t / a, 1.0), snap);
    bottom = evalSusp(fb, std::max(0.0, (t - (1.0 - a)) / a), snap);
  };
  for (int k = 0; k <= M; ++k) {
    const double t = static_cast<double>(k) / M;
    CMat top, bottom;
    if (stage == 1) {
      transported(1.0 - 2.0 * s / 3.0, t, top, bottom);
      out.m[0][0].samples[k] = top;
      out.m[1][1].samples[k] = bottom;
    } else if (stage == 2) {
      if (s <= 0.5) {
        transported(1.0 / 3.0 - (2.0 * s) / 6.0, t, top, bottom);
        out.m[0][0].samples[k] = top;
        out.m[1][1].samples[k] = bottom;
      } else {
        transported(1.0 / 6.0, t, top, bottom);
        const double th = (2.0 * s - 1.0) * M_PI / 2.0;
        // Exact values at the ends keep the stage junctions exact.
        const double sn = s == 1.0 ? 1.0 : std::sin(th), cs = s == 1.0 ? 0.0 : std::cos(th);
        out.m[0][0].samples[k] = top + sn * sn * bottom;
        out.m[0][1].samples[k] = -sn * cs * bottom;
        out.m[1][0].samples[k] = -sn * cs * bottom;
        out.m[1][1].samples[k] = cs * cs * bottom;
      }
    } else {
      const double pos = std::min({6.0 * t, 1.0, 6.0 - 6.0 * t});
      out.m[0][0].samples[k] = evalSusp(f, (1.0 - s) * pos, snap);
    }
  }
  return out;
}

SuspBlock nullStage(int stage, const SuspElem& f, double s) { return nullStageImpl(stage, f, s, true); }

SuspChainReport suspensionChain(const SuspElem& f, int stepsPerStage) {
  if (stepsPerStage < 2) fail(ErrorCode::BadParams, "each stage needs at least two steps");
  SuspChainReport r;
  r.involution = suspDistance(invSusp(invSusp(f)), f) == 0.0;
  SuspBlock start;
  const int dim = f.valueDim();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) start.m[i][j] = SuspElem{f.grid, std::vector<CMat>(f.grid + 1, CMat::Zero(dim, dim))};
  start.m[0][0] = f;
  start.m[1][1] = invSusp(f);
  r.startError = blockDistance(nullStage(1, f, 0.0), start);
  r.junctionError = std::max(blockDistance(nullStage(1, f, 1.0), nullStage(2, f, 0.0)),
                             blockDistance(nullStage(2, f, 1.0), nullStage(3, f, 0.0)));
  r.terminalNorm = blockNorm(nullStage(3, f, 1.0));
  for (int stage = 1; stage <= 3; ++stage) {
    SuspBlock prev = nullStage(stage, f, 0.0);
    for (int k = 1; k < stepsPerStage; ++k) {
      SuspBlock cur = nullStage(stage, f, static_cast<double>(k) / (stepsPerStage - 1));
      r.maxStepJump = std::max(r.maxStepJump, blockDistance(prev, cur));
      prev = std::move(cur);
    }
    for (double s : {0.0, 1.0})
      r.interpolationError =
          std::max(r.interpolationError, blockDistance(nullStage(stage, f, s), nullStageImpl(stage, f, s, false)));
  }
  r.pass = r.involution && r.startError == 0.0 && r.junctionError == 0.0 && r.terminalNorm == 0.0 &&
           r.interpolationError <= 1e-6;
  return r;
}

GMPathReport suspensionNullPath(const GenMor& phi, const Pairing& p, int stepsPerStage) {
  if (phi.functor.items().size() != 1 || phi.functor.items()[0].tag() != EndoTag::CXF)
    fail(ErrorCode::NoInversionAvailable, "null-homotopy is built for the suspension functor alone");
  const int M = phi.functor.items()[0].size();
  const int b = phi.tgtDim;
  // Each stable entry of phi is a B-valued function on the grid.
  auto toSusp = [&](const CMat& x) {
    std::vector<CMat> samples;
    for (int g = 0; g <= M; ++g) samples.push_back(x.block(g * b, g * b, b, b));
    return makeSusp(M, samples);
  };
  auto snapshot = [&](int stage, double s) {
    GenMor out = zeroGM(phi.srcDim, phi.functor, b);
    for (int i = 0; i < phi.srcDim; ++i)
      for (int j = 0; j < phi.srcDim; ++j) {
        StableMat acc(1, phi.coeffDim());
        for (const auto& [key, x] : phi.images[i][j].entries()) {
          const SuspBlock blk = nullStage(stage, toSusp(x), s);
          for (int u = 0; u < 2; ++u)
            for (int v = 0; v < 2; ++v) {
              CMat c = CMat::Zero(phi.coeffDim(), phi.coeffDim());
              for (int g = 0; g <= M; ++g) c.block(g * b, g * b, b, b) = blk.m[u][v].samples[g];
              acc.add({p.pair2(u, key.first[0])}, {p.pair2(v, key.second[0])}, c);
            }
        }
        out.images[i][j] = acc;
      }
    return out;
  };
  GMPathReport r;
  r.startError = gmDistance(snapshot(1, 0.0), addGM(phi, negateGM(phi), p));
  GenMor prev = snapshot(1, 0.0);
  for (int stage = 1; stage <= 3; ++stage) {
    for (int k = 0; k < stepsPerStage; ++k) {
      const double s = static_cast<double>(k) / (stepsPerStage - 1);
      GenMor cur = snapshot(stage, s);
      r.maxStepJump = std::max(r.maxStepJump, gmDistance(prev, cur));
      if (k == 0 || k == stepsPerStage - 1) r.allStarHom = r.allStarHom && isStarHom(cur, 1e-9);
      if (stage == 3 && k == stepsPerStage - 1) {
        for (const auto& row : cur.images)
          for (const auto& m : row) r.terminalNorm = std::max(r.terminalNorm, m.isZero(0.0) ? 0.0 : 1.0);
      }
      prev = std::move(cur);
    }
  }
  r.pass = r.startError == 0.0 && r.terminalNorm == 0.0 && r.allStarHom;
  return r;
}

// Type-level pipelines.

static std::vector<std::string> letterList(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "Id") continue;
    const auto caret = tok.find('^');
    if (caret == std::string::npos) {
      out.push_back(tok);
      continue;
    }
    const std::string letter = tok.substr(0, caret);
    const int count = std::stoi(tok.substr(caret + 1));
    for (int i = 0; i < count; ++i) out.push_back(letter);
  }
  return out;
}

static std::string lettersStr(const std::vector<std::string>& l) {
  std::string s;
  for (std::size_t i = 0; i < l.size();) {
    std::size_t j = i;
    while (j < l.size() && l[j] == l[i]) ++j;
    if (!s.empty()) s += " ";
    s += l[i];
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s.empty() ? "Id" : s;
}

std::string AlgType::str() const { return letters.empty() ? base : lettersStr(letters) + " " + base; }

AlgType algType(const std::string& text) {
  auto l = letterList(text);
  if (l.empty()) fail(ErrorCode::BadParams, "algebra type needs a base algebra");
  AlgType t;
  t.base = l.back();
  l.pop_back();
  t.letters = l;
  return t;
}

FormalNat formalNat(const std::string& name, const std::string& src, const std::string& tgt) {
  return {name, letterList(src), letterList(tgt)};
}

std::string Pipeline::str() const {
  std::string s = stages.empty() ? "" : stages.front().src.str();
  for (const auto& st : stages) s += " -[" + st.name + "]-> " + st.tgt.str();
  return s;
}

namespace {

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<std::string> power(const std::string& letter, int n) { return std::vector<std::string>(n, letter); }

struct StageBuilder {
  int* failed;
  Pipeline pipe;
  AlgType cur;

  [[noreturn]] void reject(int stage, const std::string& name, const std::string& what) {
    if (failed) *failed = stage;
    fail(ErrorCode::TypeMismatch, "stage " + std::to_string(stage) + " (" + name + "): " + what);
  }

  // Whisker `nat` at letter position `at`, requiring the declared signature.
  void nat(int stage, const std::string& name, const FormalNat& n, std::size_t at,
           const std::vector<std::string>& wantSrc, const std::vector<std::string>& wantTgt) {
    if (n.src != wantSrc)
      reject(stage, name, n.name + " starts at " + lettersStr(n.src) + ", expected " + lettersStr(wantSrc));
    if (n.tgt != wantTgt)
      reject(stage, name, n.name + " ends at " + lettersStr(n.tgt) + ", expected " + lettersStr(wantTgt));
    const auto& l = cur.letters;
    if (at + n.src.size() > l.size() || !std::equal(n.src.begin(), n.src.end(), l.begin() + at))
      reject(stage, name, n.name + " does not apply to " + cur.str());
    AlgType next = cur;
    next.letters = std::vector<std::string>(l.begin(), l.begin() + at);
    next.letters = cat(next.letters, n.tgt);
    next.letters.insert(next.letters.end(), l.begin() + at + n.src.size(), l.end());
    pipe.stages.push_back({name, cur, next});
    cur = next;
  }

  // Apply the functor letters `prefix` to a morphism.
  void mor(int stage, const std::string& name, const FormalMor& m, const std::vector<std::string>& prefix,
           const AlgType& wantSrc, const AlgType& wantTgtShape) {
    if (!(m.src == wantSrc)) reject(stage, name, m.name + " starts at " + m.src.str() + ", expected " + wantSrc.str());
    if (m.tgt.letters != wantTgtShape.letters)
      reject(stage, name, m.name + " ends at " + m.tgt.str() + ", expected " + wantTgtShape.str());
    AlgType s{cat(prefix, m.src.letters), m.src.base};
    if (!(s == cur)) reject(stage, name, "source " + s.str() + " differs from " + cur.str());
    AlgType t{cat(prefix, m.tgt.letters), m.tgt.base};
    pipe.stages.push_back({name, cur, t});
    cur = t;
  }
};

}  // namespace

static Pipeline buildPhiImpl(const FormalMor& phi, const FormalNat& eta, int n, int* failed) {
  const std::string A = phi.src.base;
  StageBuilder b{failed, {}, AlgType{{}, A}};
  b.nat(1, "eta at " + A, eta, 0, {}, {"N", "S"});
  b.mor(2, "N applied to " + phi.name, phi, {"N"}, AlgType{{"S"}, A},
        AlgType{cat(power("A", n), {"K"}), phi.tgt.base});
  return b.pipe;
}

static Pipeline buildPsiImpl(const FormalMor& psi, const FormalNat& eps, const FormalNat& swap,
                             const FormalNat& merge, int n, int* failed) {
  const std::string A = psi.src.base;
  StageBuilder b{failed, {}, AlgType{{"S"}, A}};
  b.mor(1, "S applied to " + psi.name, psi, {"S"}, AlgType{{}, A},
        AlgType{cat(cat({"N"}, power("A", n)), {"K"}), psi.tgt.base});
  b.nat(2, "eps whiskered", eps, 0, {"S", "N"}, {"A", "K"});
  b.nat(3, "swap whiskered", swap, 1, cat({"K"}, power("A", n)), cat(power("A", n), {"K"}));
  b.nat(4, "merge whiskered", merge, static_cast<std::size_t>(n + 1), {"K", "K"}, {"K"});
  return b.pipe;
}

Pipeline buildPhi(const FormalMor& phi, const FormalNat& eta, int n) { return buildPhiImpl(phi, eta, n, nullptr); }

Pipeline buildPsi(const FormalMor& psi, const FormalNat& eps, const FormalNat& swap, const FormalNat& merge, int n) {
  return buildPsiImpl(psi, eps, swap, merge, n, nullptr);
}

static std::string pw(const std::string& l, int n) { return n == 1 ? l : l + "^" + std::to_string(n); }

TypeVariant wellTypedPhi(int n) {
  TypeVariant v;
  v.label = "phi-well-typed";
  v.phiSide = true;
  v.mor = {"phi", algType("S A"), algType(pw("A", n) + " K B")};
  v.eta = formalNat("eta", "Id", "N S");
  return v;
}

TypeVariant wellTypedPsi(int n) {
  TypeVariant v;
  v.label = "psi-well-typed";
  v.phiSide = false;
  v.mor = {"psi", algType("A"), algType("N " + pw("A", n) + " K B")};
  v.eps = formalNat("eps", "S N", "A K");
  v.swap = formalNat("kappa", "K " + pw("A", n), pw("A", n) + " K");
  v.merge = formalNat("theta", "K K", "K");
  return v;
}

std::vector<TypeVariant> typeCatalogue(int n) {
  std::vector<TypeVariant> out;
  auto phiV = [&](const std::string& label, int stage, auto edit) {
    TypeVariant v = wellTypedPhi(n);
    v.label = label;
    v.expectedStage = stage;
    edit(v);
    out.push_back(v);
  };
  auto psiV = [&](const std::string& label, int stage, auto edit) {
    TypeVariant v = wellTypedPsi(n);
    v.label = label;
    v.expectedStage = stage;
    edit(v);
    out.push_back(v);
  };
  phiV("eta-target-swapped", 1, [](TypeVariant& v) { v.eta = formalNat("eta", "Id", "S N"); });
  phiV("eta-source-suspended", 1, [](TypeVariant& v) { v.eta = formalNat("eta", "S", "N S"); });
  phiV("phi-source-unsuspended", 2, [](TypeVariant& v) { v.mor.src = algType("A"); });
  phiV("phi-target-extra-power", 2, [n](TypeVariant& v) { v.mor.tgt = algType(pw("A", n + 1) + " K B"); });
  phiV("phi-target-unstabilized", 2, [n](TypeVariant& v) { v.mor.tgt = algType(pw("A", n) + " B"); });
  psiV("psi-target-without-N", 1, [n](TypeVariant& v) { v.mor.tgt = algType(pw("A", n) + " K B"); });
  psiV("psi-source-suspended", 1, [](TypeVariant& v) { v.mor.src = algType("S A"); });
  psiV("eps-target-swapped", 2, [](TypeVariant& v) { v.eps = formalNat("eps", "S N", "K A"); });
  psiV("eps-source-swapped", 2, [](TypeVariant& v) { v.eps = formalNat("eps", "N S", "A K"); });
  psiV("swap-reversed", 3, [n](TypeVariant& v) { v.swap = formalNat("kappa", pw("A", n) + " K", "K " + pw("A", n)); });
  psiV("swap-wrong-power", 3,
       [n](TypeVariant& v) { v.swap = formalNat("kappa", "K " + pw("A", n + 1), pw("A", n + 1) + " K"); });
  psiV("merge-reversed", 4, [](TypeVariant& v) { v.merge = formalNat("theta", "K", "K K"); });
  return out;
}

int runVariant(const TypeVariant& v, int n, std::string* message) {
  int failed = 0;
  try {
    const Pipeline p = v.phiSide ? buildPhiImpl(v.mor, v.eta, n, &failed)
                                 : buildPsiImpl(v.mor, v.eps, v.swap, v.merge, n, &failed);
    if (message) *message = p.str();
    return 0;
  } catch (const Error& e) {
    if (message) *message = e.what();
    return failed ? failed : -1;
  }
}

// Serialization.

static nlohmann::json endoToJson(const BrEndo& f) {
  if (f.isSingle()) {
    const TTEndo& t = f.items()[0];
    switch (t.tag()) {
      case EndoTag::IdF: return {{"item", "Id"}};
      case EndoTag::MnF: return {{"item", "Mn"}, {"n", t.size()}};
      case EndoTag::CXF: return {{"item", "C0"}, {"n", t.size()}};
      case EndoTag::KF: return {{"item", "K"}};
      case EndoTag::DA:
        if (!t.coefficient().isGen()) fail(ErrorCode::BadParams, "only generator coefficients serialize");
        return {{"item", "DA"}, {"gen", t.coefficient().genId()}};
    }
  }
  return {{"op", f.shape().kind() == WordKind::TensorW ? "compose" : "sum"},
          {"l", endoToJson(f.leftPart())},
          {"r", endoToJson(f.rightPart())}};
}

static BrEndo endoFromJson(const nlohmann::json& j) {
  if (j.contains("op")) {
    const BrEndo l = endoFromJson(j.at("l")), r = endoFromJson(j.at("r"));
    return j.at("op") == "compose" ? BrEndo::compose(l, r) : BrEndo::sum(l, r);
  }
  const std::string item = j.at("item");
  if (item == "Id") return BrEndo::single(TTEndo::identity());
  if (item == "Mn") return BrEndo::single(TTEndo::matrices(j.at("n").get<int>()));
  if (item == "C0") return BrEndo::single(TTEndo::functions(j.at("n").get<int>()));
  if (item == "K") return BrEndo::single(TTEndo::compacts());
  if (item == "DA") return BrEndo::single(TTEndo::tensorBy(ObjTerm::gen(j.at("gen").get<std::string>())));
  fail(ErrorCode::ParseError, "unknown functor item " + item);
}

std::string genMorToJson(const GenMor& g) {
  nlohmann::ordered_json j;
  j["srcAlg"] = g.srcDim;
  j["functorTag"] = g.functor.str();
  j["functor"] = endoToJson(g.functor);
  j["tgtAlg"] = g.tgtDim;
  j["unitImages"] = nlohmann::json::array();
  for (int i = 0; i < g.srcDim; ++i)
    for (int k = 0; k < g.srcDim; ++k)
      j["unitImages"].push_back({{"i", i}, {"j", k}, {"image", nlohmann::json::parse(stableMatToJson(g.images[i][k]))}});
  return j.dump();
}

GenMor genMorFromJson(const std::string& text, const ModelAssign& model) {
  try {
    const auto j = nlohmann::json::parse(text);
    GenMor g = zeroGM(j.at("srcAlg").get<int>(), endoFromJson(j.at("functor")), j.at("tgtAlg").get<int>(), model);
    for (const auto& e : j.at("unitImages")) {
      const int i = e.at("i"), k = e.at("j");
      if (i < 0 || k < 0 || i >= g.srcDim || k >= g.srcDim) fail(ErrorCode::BadParams, "unit index out of range");
      g.images[i][k] = stableMatFromJson(e.at("image").dump());
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("generalized morphism: ") + e.what());
  }
}

}  // namespace rig
