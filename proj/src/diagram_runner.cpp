#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rigcheck/diagram.hpp"
#include "rigcheck/gm_monoid.hpp"
#include "rigcheck/stable_compacts.hpp"

namespace rig {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct Outcome {
  DiagramVerdict verdict = DiagramVerdict::Pass;
  double maxError = 0.0;
  ojson details = ojson::object();
};

DiagramVerdict worse(DiagramVerdict a, DiagramVerdict b) {
  auto rank = [](DiagramVerdict v) { return v == DiagramVerdict::Fail ? 2 : v == DiagramVerdict::Indeterminate ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

Outcome indeterminate(const std::string& why) {
  Outcome o;
  o.verdict = DiagramVerdict::Indeterminate;
  o.details["note"] = why;
  return o;
}

// Deterministic per-statement seed.
std::uint64_t mixSeed(std::uint64_t base, const std::string& name, int line) {
  std::uint64_t h = 1469598103934665603ULL ^ base;
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ULL;
  h = (h ^ static_cast<std::uint64_t>(line)) * 1099511628211ULL;
  return h;
}

std::vector<std::string> statementGenerators(const DiagramDecl& decl, const Statement& st) {
  std::vector<std::string> gens;
  for (const auto& o : {st.left.src(), st.left.tgt()}) collectGenerators(o, gens);
  for (const auto& [name, m] : decl.named) {
    collectGenerators(m.src(), gens);
    collectGenerators(m.tgt(), gens);
  }
  for (const auto& o : decl.objects) gens.push_back(o);
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return gens;
}

void collectNamed(const MorTerm& m, std::vector<MorTerm>& out) {
  switch (m.kind()) {
    case MorKind::Named: out.push_back(m); break;
    case MorKind::VComp:
      collectNamed(m.after(), out);
      collectNamed(m.before(), out);
      break;
    case MorKind::TensorM:
    case MorKind::OplusM:
      collectNamed(m.left(), out);
      collectNamed(m.right(), out);
      break;
    default: break;
  }
}

// Exact evaluation of the declared interpretation, when every named
// generator has a fixed matrix and every generator a pinned dimension.
std::optional<bool> fixedInterpretation(const DiagramDecl& decl, const Statement& st, double* err) {
  std::vector<MorTerm> named;
  collectNamed(st.left, named);
  collectNamed(st.right, named);
  if (named.empty()) return std::nullopt;
  for (const auto& n : named)
    if (!decl.fixed.count(n.name())) return std::nullopt;
  for (const auto& g : statementGenerators(decl, st))
    if (!decl.pinnedDims.count(g)) return std::nullopt;
  ModelAssign m;
  m.genDims = decl.pinnedDims;
  m.genMors = decl.fixed;
  const SparseMat a = evalMor(st.left, m), b = evalMor(st.right, m);
  *err = a.maxAbsDiff(b);
  return a == b;
}

Outcome runExact(const DiagramDecl& decl, const Statement& st) {
  Outcome o;
  const Verdict v = decideEqual(st.left, st.right);
  o.details["decision"] = verdictName(v);
  if (v == Verdict::Equal) return o;
  if (v == Verdict::Unequal) {
    o.verdict = DiagramVerdict::Fail;
    o.maxError = 1.0;
    return o;
  }
  double err = 0.0;
  if (auto fixed = fixedInterpretation(decl, st, &err)) {
    o.details["decidedBy"] = "fixed interpretation";
    o.maxError = err;
    o.verdict = *fixed ? DiagramVerdict::Pass : DiagramVerdict::Fail;
    return o;
  }
  o.verdict = DiagramVerdict::Indeterminate;
  return o;
}

Outcome runModel(const DiagramDecl& decl, const Statement& st, const RunFlags& flags) {
  Outcome o;
  const int count = flags.models.value_or(st.mode.count.value_or(5));
  const int maxDim = flags.maxDim.value_or(st.mode.maxDim.value_or(4));
  const double tol = flags.tol.value_or(st.mode.tol.value_or(0.0));
  const std::uint64_t seed = st.mode.seed.value_or(mixSeed(flags.seed, decl.name, st.line));
  std::vector<MorTerm> named;
  for (const auto& [n, m] : decl.named) named.push_back(m);
  ModelAssign fixed;
  fixed.genDims = decl.pinnedDims;
  fixed.genMors = decl.fixed;
  const auto models = randomModels(statementGenerators(decl, st), count, maxDim, seed, named, &fixed);
  o.details["seed"] = seed;
  o.details["models"] = count;
  o.details["maxdim"] = maxDim;
  o.details["tol"] = tol;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const SparseMat a = evalMor(st.left, models[k]), b = evalMor(st.right, models[k]);
    const double err = a.maxAbsDiff(b);
    o.maxError = std::max(o.maxError, err);
    const bool ok = tol == 0.0 ? a == b : err <= tol;
    if (!ok && o.verdict == DiagramVerdict::Pass) {
      o.verdict = DiagramVerdict::Fail;
      ojson dims = ojson::object();
      for (const auto& [g, d] : models[k].genDims) dims[g] = d;
      o.details["refutingModel"] = {{"index", k}, {"seed", seed}, {"dims", dims}};
    }
  }
  return o;
}

int intParam(const Statement& st, const std::string& key, int def) {
  auto it = st.params.find(key);
  if (it == st.params.end()) return def;
  try {
    return std::stoi(it->second);
  } catch (const std::logic_error&) {
    fail(ErrorCode::InvalidArgument, "parameter " + key + " must be an integer");
  }
}

bool isRigCheck(const std::string& name) {
  const auto& cat = rigCatalogue();
  return std::find(cat.begin(), cat.end(), name) != cat.end();
}

Outcome fromRigReport(const RigReport& r) {
  Outcome o;
  o.verdict = r.pass ? DiagramVerdict::Pass : DiagramVerdict::Fail;
  o.maxError = r.maxError;
  o.details = ojson::parse(rigReportJson(r));
  double cont = 0.0, endp = 0.0;
  for (const auto& c : r.checks)
    if (c.homotopy) {
      cont = std::max(cont, c.continuityBound);
      endp = std::max(endp, c.endpointError);
    }
  o.details["continuityBound"] = cont;
  o.details["endpointError"] = endp;
  return o;
}

Outcome runRigCheck(const DiagramDecl& decl, const Statement& st, const RunFlags& flags) {
  RigOptions opt;
  opt.truncation = intParam(st, "trunc", flags.truncation);
  opt.steps = intParam(st, "steps", 100);
  if (st.mode.kind == ModeKind::Model) return indeterminate("model mode does not apply to stabilization checks");
  if (st.mode.kind == ModeKind::Exact) {
    opt.construct = false;
  } else if (st.mode.source == HomotopySource::Witness) {
    opt.construct = false;
    fs::path p = st.mode.witnessPath;
    if (p.is_relative()) p = fs::path(decl.file).parent_path() / p;
    std::ifstream in(p);
    if (!in) fail(ErrorCode::IOError, "cannot read witness file " + p.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const auto j = nlohmann::json::parse(buf.str());
    for (const auto& [name, path] : j.at("witnesses").items()) opt.witnesses[name] = homPathFromJson(path.dump());
  } else if (st.mode.source != HomotopySource::Rotation) {
    return indeterminate("stabilization checks use rotation witnesses");
  }
  try {
    return fromRigReport(verifyRigDiagram(st.check, opt));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::WitnessMissing) return indeterminate(e.what());
    throw;
  }
}

void noteWitness(Outcome& o, const LawWitness& w) {
  o.maxError = std::max(o.maxError, w.path.endpointError);
  double cont = o.details.value("continuityBound", 0.0), endp = o.details.value("endpointError", 0.0);
  o.details["continuityBound"] = std::max(cont, w.path.continuityBound);
  o.details["endpointError"] = std::max(endp, w.path.endpointError);
  if (!w.pass) {
    o.verdict = DiagramVerdict::Fail;
    o.details["failedLaw"] = gmLawName(w.law);
  }
}

Outcome runGmCheck(const DiagramDecl& decl, const Statement& st, const RunFlags& flags) {
  const std::string& name = st.check;
  const int samples = intParam(st, "samples", 10);
  const int steps = intParam(st, "steps", 100);
  const std::uint64_t seed = st.params.count("seed") ? std::stoull(st.params.at("seed"))
                                                       : mixSeed(flags.seed, decl.name, st.line);
  std::mt19937_64 rng(seed);
  RandomGMOptions gopt;
  gopt.window = intParam(st, "window", flags.truncation);
  const Pairing p;
  Outcome o;
  o.details["seed"] = seed;
  o.details["samples"] = samples;
  const bool homotopyLaw = name == "gm-add-neutral" || name == "gm-add-comm" || name == "gm-add-assoc" ||
                           name == "gm-compose-neutral";
  if (homotopyLaw && !(st.mode.kind == ModeKind::Homotopy && st.mode.source == HomotopySource::Rotation))
    return indeterminate(name + " needs homotopy(construct:rotation)");
  if (!homotopyLaw && st.mode.kind != ModeKind::Exact) return indeterminate(name + " is an exact check");
  for (int k = 0; k < samples; ++k) {
    if (name == "gm-add-neutral") {
      const GenMor a = randomGenMor(rng, gopt);
      noteWitness(o, witnessAddNeutral(a, true, p, steps));
      noteWitness(o, witnessAddNeutral(a, false, p, steps));
    } else if (name == "gm-add-comm") {
      const GenMor a = randomGenMor(rng, gopt);
      const GenMor b = randomGenMorOver(rng, a.srcDim, a.functor, a.tgtDim, gopt);
      noteWitness(o, witnessAddComm(a, b, p, steps));
    } else if (name == "gm-add-assoc") {
      const GenMor a = randomGenMor(rng, gopt);
      const GenMor b = randomGenMorOver(rng, a.srcDim, a.functor, a.tgtDim, gopt);
      const GenMor c = randomGenMorOver(rng, a.srcDim, a.functor, a.tgtDim, gopt);
      noteWitness(o, witnessAddAssoc(a, b, c, p, steps));
    } else if (name == "gm-compose-neutral") {
      const GenMor a = randomGenMor(rng, gopt);
      noteWitness(o, witnessComposeNeutral(a, true, p, steps));
      noteWitness(o, witnessComposeNeutral(a, false, p, steps));
    } else {
      RandomGMOptions two = gopt;
      two.functorItems = 2;
      const GenMor a = randomGenMor(rng, two);
      const BrEndo t = BrEndo::single(a.functor.items()[0]), s = BrEndo::single(a.functor.items()[1]);
      const EndoMor swapTS(BrEndo::compose(t, s), BrEndo::compose(s, t), xiAt(t, s, endoVar()));
      const EndoMor swapST(BrEndo::compose(s, t), BrEndo::compose(t, s), xiAt(s, t, endoVar()));
      double err = 0.0;
      if (name == "gm-pushforward-additive") {
        const GenMor b = randomGenMorOver(rng, a.srcDim, a.functor, a.tgtDim, gopt);
        err = gmDistance(pushforward(swapTS, addGM(a, b, p)),
                         addGM(pushforward(swapTS, a), pushforward(swapTS, b), p));
      } else {
        err = gmDistance(pushforward(vcompEndo(swapST, swapTS), a), pushforward(swapST, pushforward(swapTS, a)));
      }
      o.maxError = std::max(o.maxError, err);
      if (err != 0.0) o.verdict = DiagramVerdict::Fail;
    }
  }
  return o;
}

SuspElem sampleSuspension(std::mt19937_64& rng, int grid, int dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMat a(dim, dim), b(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      a(i, j) = {u(rng), u(rng)};
      b(i, j) = {u(rng), u(rng)};
    }
  return suspFromFunction(grid, dim, [&](double t) {
    return CMat(std::sin(M_PI * t) * a + std::sin(2.0 * M_PI * t) * b);
  });
}

Outcome runSuspensionCheck(const DiagramDecl& decl, const Statement& st, const RunFlags& flags) {
  const int grid = intParam(st, "grid", 96);
  const int samples = intParam(st, "samples", 3);
  const int steps = intParam(st, "steps", 100);
  const std::uint64_t seed = st.params.count("seed") ? std::stoull(st.params.at("seed"))
                                                       : mixSeed(flags.seed, decl.name, st.line);
  std::mt19937_64 rng(seed);
  Outcome o;
  o.details["seed"] = seed;
  o.details["grid"] = grid;
  if (st.check == "suspension-involution") {
    if (st.mode.kind != ModeKind::Exact) return indeterminate("suspension-involution is an exact check");
    for (int k = 0; k < samples; ++k) {
      const SuspElem f = sampleSuspension(rng, grid, 2);
      const double err = suspDistance(invSusp(invSusp(f)), f);
      o.maxError = std::max(o.maxError, err);
      if (err != 0.0) o.verdict = DiagramVerdict::Fail;
    }
    return o;
  }
  if (!(st.mode.kind == ModeKind::Homotopy && st.mode.source == HomotopySource::SuspensionNull))
    return indeterminate(st.check + " needs homotopy(construct:suspension-null)");
  if (st.check == "suspension-chain") {
    for (int k = 0; k < samples; ++k) {
      const SuspChainReport r = suspensionChain(sampleSuspension(rng, grid, 2), steps);
      o.maxError = std::max({o.maxError, r.startError, r.junctionError, r.terminalNorm, r.interpolationError});
      o.details["maxStepJump"] = std::max(o.details.value("maxStepJump", 0.0), r.maxStepJump);
      o.details["endpointError"] = std::max(o.details.value("endpointError", 0.0), r.junctionError);
      o.details["interpolationError"] = std::max(o.details.value("interpolationError", 0.0), r.interpolationError);
      if (!r.pass) o.verdict = DiagramVerdict::Fail;
    }
    return o;
  }
  RandomGMOptions so;
  so.suspension = true;
  so.grid = grid;
  so.window = intParam(st, "window", 4);
  for (int k = 0; k < samples; ++k) {
    const GMPathReport r = suspensionNullPath(randomGenMor(rng, so), Pairing{}, intParam(st, "steps", 20));
    o.maxError = std::max({o.maxError, r.startError, r.terminalNorm});
    o.details["maxStepJump"] = std::max(o.details.value("maxStepJump", 0.0), r.maxStepJump);
    if (!r.pass) o.verdict = DiagramVerdict::Fail;
  }
  return o;
}

Outcome runTypeCheck(const Statement& st) {
  if (st.mode.kind != ModeKind::Exact) return indeterminate(st.check + " is an exact check");
  const int n = intParam(st, "n", 2);
  Outcome o;
  std::string msg;
  if (st.check == "type-phi" || st.check == "type-psi") {
    const TypeVariant v = st.check == "type-phi" ? wellTypedPhi(n) : wellTypedPsi(n);
    const int stage = runVariant(v, n, &msg);
    o.details["pipeline"] = msg;
    if (stage != 0) o.verdict = DiagramVerdict::Fail;
    return o;
  }
  ojson rejected = ojson::array();
  for (const auto& v : typeCatalogue(n)) {
    const int stage = runVariant(v, n, &msg);
    rejected.push_back({{"variant", v.label}, {"stage", stage}, {"expected", v.expectedStage}});
    if (stage != v.expectedStage) o.verdict = DiagramVerdict::Fail;
  }
  o.details["variants"] = rejected;
  return o;
}

MorTerm structuralAt(int which, const std::vector<ObjTerm>& x) {
  switch (which) {
    case 0: return mor::alphaT(x[0], x[1], x[2]);
    case 1: return mor::lambdaT(x[0]);
    case 2: return mor::rhoT(x[0]);
    case 3: return mor::xiT(x[0], x[1]);
    default: return mor::deltaL(x[0], x[1], x[2]);
  }
}

// Bracketed source and target of a structural generator over items x.
std::pair<BrObj, BrObj> structuralBrackets(int which, const std::vector<ObjTerm>& x) {
  const Word h = Word::hole();
  const ObjTerm one = ObjTerm::one();
  switch (which) {
    case 0: return {BrObj({x[0], x[1], x[2]}, Word::tensor(Word::tensor(h, h), h)),
                    BrObj({x[0], x[1], x[2]}, Word::tensor(h, Word::tensor(h, h)))};
    case 1: return {BrObj({one, x[0]}, Word::tensor(h, h)), BrObj::single(x[0])};
    case 2: return {BrObj({x[0], one}, Word::tensor(h, h)), BrObj::single(x[0])};
    case 3: return {BrObj({x[0], x[1]}, Word::tensor(h, h)), BrObj({x[1], x[0]}, Word::tensor(h, h))};
    default: return {BrObj({x[0], x[1], x[2]}, Word::tensor(h, Word::oplus(h, h))),
                     BrObj({x[0], x[1], x[0], x[2]}, Word::oplus(Word::tensor(h, h), Word::tensor(h, h)))};
  }
}

constexpr long long kStrictifyModelBudget = 4096;

Outcome runStrictifyCheck(const DiagramDecl& decl, const Statement& st, const RunFlags& flags) {
  if (st.mode.kind == ModeKind::Homotopy) return indeterminate("strictify-structural is an exact check");
  const int samples = intParam(st, "samples", 20);
  const std::uint64_t seed = st.params.count("seed") ? std::stoull(st.params.at("seed"))
                                                       : mixSeed(flags.seed, decl.name, st.line);
  std::mt19937_64 rng(seed);
  Outcome o;
  o.details["seed"] = seed;
  int decided = 0, evaluated = 0, skipped = 0;
  for (int k = 0; k < samples; ++k) {
    const BimonFunctorDescr f = randomFunctorDescr(rng, {"a", "b", "c", "d"});
    std::vector<ObjTerm> x;
    for (int i = 0; i < 3; ++i) x.push_back(randomMonoidalObject(rng, 2, 2));
    for (int which = 0; which < 5; ++which) {
      const auto [src, tgt] = structuralBrackets(which, x);
      const BrMor phi(src, tgt, structuralAt(which, x));
      const BrMor strict = strictify(f, phi);
      std::vector<ObjTerm> images;
      for (const auto& o2 : x) images.push_back(functorObj(f, o2));
      const MorTerm expect = structuralAt(which, images);
      if (decideEqual(strict.body(), expect) != Verdict::Equal) o.verdict = DiagramVerdict::Fail;
      ++decided;
      if (st.mode.kind == ModeKind::Model) {
        const MorTerm lhs = mor::comp({omegaFunctor(f, tgt), expect});
        const MorTerm rhs = mor::comp({functorMor(f, phi.body()), omegaFunctor(f, src)});
        std::vector<std::string> gens{"a", "b", "c", "d"};
        const int count = flags.models.value_or(st.mode.count.value_or(3));
        const int maxDim = flags.maxDim.value_or(st.mode.maxDim.value_or(3));
        for (const auto& m : randomModels(gens, count, maxDim, seed + k)) {
          // Functor images can blow up; models past the budget are counted, not evaluated.
          if (std::max(dimOf(lhs.src(), m), dimOf(lhs.tgt(), m)) > kStrictifyModelBudget) {
            ++skipped;
            continue;
          }
          ++evaluated;
          const double err = evalMor(lhs, m).maxAbsDiff(evalMor(rhs, m));
          o.maxError = std::max(o.maxError, err);
          if (err != 0.0) o.verdict = DiagramVerdict::Fail;
        }
      }
    }
  }
  o.details["arrows"] = decided;
  if (st.mode.kind == ModeKind::Model) {
    o.details["modelsEvaluated"] = evaluated;
    o.details["modelsOverBudget"] = skipped;
    if (evaluated == 0 && o.verdict == DiagramVerdict::Pass) o.verdict = DiagramVerdict::Indeterminate;
  }
  return o;
}

Outcome runStatement(const DiagramDecl& decl, const Statement& st, const RunFlags& flags) {
  if (st.kind == Statement::Kind::Assert) {
    Mode m = st.mode;
    if (flags.modeOverride && m.kind != ModeKind::Homotopy) m.kind = *flags.modeOverride;
    if (m.kind == ModeKind::Homotopy) return indeterminate("homotopy mode applies to catalogue checks only");
    Statement eff = st;
    eff.mode = m;
    return m.kind == ModeKind::Exact ? runExact(decl, eff) : runModel(decl, eff, flags);
  }
  if (isRigCheck(st.check)) return runRigCheck(decl, st, flags);
  if (st.check.rfind("gm-", 0) == 0) return runGmCheck(decl, st, flags);
  if (st.check.rfind("suspension-", 0) == 0) return runSuspensionCheck(decl, st, flags);
  if (st.check.rfind("type-", 0) == 0) return runTypeCheck(st);
  return runStrictifyCheck(decl, st, flags);
}

std::string effectiveMode(const Statement& st, const RunFlags& flags) {
  if (st.kind == Statement::Kind::Assert && flags.modeOverride && st.mode.kind != ModeKind::Homotopy)
    return *flags.modeOverride == ModeKind::Exact ? "exact" : "model";
  return st.mode.str();
}

double elapsedMs(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

DiagramResult failedDiagram(const std::string& name, const std::string& file, const Error& e) {
  DiagramResult r;
  r.name = name;
  r.file = file;
  r.mode = "error";
  r.verdict = DiagramVerdict::Fail;
  r.maxError = 0.0;
  ojson d = ojson::array();
  d.push_back({{"error", errorName(e.code())}, {"message", e.what()}});
  r.details = d.dump();
  return r;
}

void finish(Report& rep) {
  std::stable_sort(rep.diagrams.begin(), rep.diagrams.end(),
                   [](const DiagramResult& a, const DiagramResult& b) { return a.name < b.name; });
  for (const auto& d : rep.diagrams) {
    if (d.verdict == DiagramVerdict::Pass) ++rep.passed;
    else if (d.verdict == DiagramVerdict::Fail) ++rep.failed;
    else ++rep.indeterminate;
  }
}

void runDiagramsInto(Report& rep, const std::string& text, const std::string& file, const RunFlags& flags) {
  std::vector<DiagramDecl> decls;
  try {
    decls = parseDiagrams(text, file);
  } catch (const Error& e) {
    rep.diagrams.push_back(failedDiagram(fs::path(file).stem().string(), file, e));
    return;
  }
  if (decls.empty()) rep.warnings.push_back(file + " contains no diagrams");
  for (const auto& s : decls) rep.diagrams.push_back(runDiagram(s, flags));
}

}  // namespace

const char* diagramVerdictName(DiagramVerdict v) {
  switch (v) {
    case DiagramVerdict::Pass: return "pass";
    case DiagramVerdict::Fail: return "fail";
    case DiagramVerdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

std::uint64_t defaultSeed() {
  const char* env = std::getenv("RIGCHECK_SEED");
  if (!env || !*env) return 0;
  try {
    return std::stoull(env);
  } catch (const std::logic_error&) {
    fail(ErrorCode::InvalidArgument, "RIGCHECK_SEED must be a non-negative integer");
  }
}

const std::vector<std::string>& checkCatalogue() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v = rigCatalogue();
    for (const char* n : {"gm-add-neutral", "gm-add-comm", "gm-add-assoc", "gm-compose-neutral",
                          "gm-pushforward-additive", "gm-pushforward-functorial", "suspension-involution",
                          "suspension-chain", "suspension-null", "type-phi", "type-psi", "type-variants",
                          "strictify-structural"})
      v.push_back(n);
    return v;
  }();
  return names;
}

DiagramResult runDiagram(const DiagramDecl& decl, const RunFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  DiagramResult r;
  r.name = decl.name;
  r.file = decl.file;
  ojson details = ojson::array();
  std::set<std::string> modes;
  for (const auto& st : decl.statements) {
    Outcome o;
    const std::string mode = effectiveMode(st, flags);
    modes.insert(mode);
    try {
      o = runStatement(decl, st, flags);
    } catch (const Error& e) {
      o.verdict = DiagramVerdict::Fail;
      o.details = {{"error", errorName(e.code())}, {"message", e.what()}};
    } catch (const std::exception& e) {
      o.verdict = DiagramVerdict::Fail;
      o.details = {{"error", "InvalidArgument"}, {"message", e.what()}};
    }
    ojson d;
    d["line"] = st.line;
    d["statement"] = st.kind == Statement::Kind::Assert ? "assert" : "check " + st.check;
    d["mode"] = mode;
    d["verdict"] = diagramVerdictName(o.verdict);
    d["maxError"] = o.maxError;
    d["details"] = o.details;
    details.push_back(d);
    r.verdict = worse(r.verdict, o.verdict);
    r.maxError = std::max(r.maxError, o.maxError);
  }
  std::string joined;
  for (const auto& m : modes) joined += (joined.empty() ? "" : "+") + m;
  r.mode = joined;
  r.details = details.dump();
  r.ms = elapsedMs(t0);
  return r;
}

Report runCorpus(const std::string& path, const RunFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_regular_file(path, ec)) {
    files.push_back(path);
  } else if (fs::is_directory(path, ec)) {
    for (const auto& e : fs::directory_iterator(path))
      if (e.is_regular_file() && e.path().extension() == ".diag") files.push_back(e.path());
  } else {
    fail(ErrorCode::IOError, "no such file or directory: " + path);
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) rep.warnings.push_back("no .diag files in " + path + "; nothing to check");
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) {
      rep.diagrams.push_back(failedDiagram(f.stem().string(), f.string(), Error(ErrorCode::IOError, "cannot read " + f.string())));
      continue;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    runDiagramsInto(rep, buf.str(), f.string(), flags);
  }
  finish(rep);
  rep.ms = elapsedMs(t0);
  return rep;
}

Report runText(const std::string& text, const RunFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  runDiagramsInto(rep, text, "<input>", flags);
  finish(rep);
  rep.ms = elapsedMs(t0);
  return rep;
}

std::string emitReport(const Report& r, ReportFormat format, bool includeTiming) {
  if (format == ReportFormat::Json) {
    ojson j;
    j["diagrams"] = ojson::array();
    for (const auto& d : r.diagrams) {
      ojson e;
      e["name"] = d.name;
      e["mode"] = d.mode;
      e["verdict"] = diagramVerdictName(d.verdict);
      e["maxError"] = d.maxError;
      if (includeTiming) e["ms"] = d.ms;
      e["details"] = ojson::parse(d.details.empty() ? "[]" : d.details);
      j["diagrams"].push_back(e);
    }
    ojson s;
    s["total"] = r.diagrams.size();
    s["passed"] = r.passed;
    s["failed"] = r.failed;
    s["indeterminate"] = r.indeterminate;
    s["allPass"] = r.allPass();
    if (includeTiming) s["ms"] = r.ms;
    s["warnings"] = r.warnings;
    j["summary"] = s;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  std::size_t width = 8;
  for (const auto& d : r.diagrams) width = std::max(width, d.name.size());
  out << std::left << std::setw(static_cast<int>(width) + 2) << "diagram" << std::setw(34) << "mode"
      << std::setw(15) << "verdict" << std::setw(13) << "maxError";
  if (includeTiming) out << "ms";
  out << "\n";
  for (const auto& d : r.diagrams) {
    std::ostringstream err;
    err << std::setprecision(3) << d.maxError;
    out << std::setw(static_cast<int>(width) + 2) << d.name << std::setw(34) << d.mode << std::setw(15)
        << diagramVerdictName(d.verdict) << std::setw(13) << err.str();
    if (includeTiming) out << std::fixed << std::setprecision(1) << d.ms << std::defaultfloat;
    out << "\n";
  }
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  out << r.passed << " passed, " << r.failed << " failed, " << r.indeterminate << " indeterminate\n";
  return out.str();
}

std::string rigWitnessJson(const std::string& diagram, int truncation, int steps) {
  RigOptions opt;
  opt.truncation = truncation;
  opt.steps = steps;
  opt.keepSnapshots = true;
  const RigReport rep = verifyRigDiagram(diagram, opt);
  ojson j;
  j["diagram"] = diagram;
  j["truncation"] = truncation;
  j["witnesses"] = ojson::object();
  for (const auto& [name, path] : rep.paths) j["witnesses"][name] = ojson::parse(homPathToJson(path));
  return j.dump() + "\n";
}

}  // namespace rig
