// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rigcheck/diagram.hpp"
#include "rigcheck/gm_monoid.hpp"
#include "rigcheck/rigcheck.h"

using namespace rig;
using nlohmann::json;

namespace {

// Criterion 1
constexpr int kPairCount = 1000;
constexpr int kPairDepth = 6;
constexpr int kModelsPerPair = 5;
constexpr int kPairMaxDim = 4;
constexpr double kPairTol = 0.0;
constexpr double kPairSeconds = 60.0;
// Criterion 2
constexpr int kAxiomModels = 5;
constexpr int kAxiomMaxDim = 4;
constexpr double kAxiomTol = 0.0;
// Criterion 3
constexpr int kStrictifySamples = 200;
// Criterion 4
constexpr int kRigTruncation = 8;
constexpr int kRigSteps = 100;
constexpr double kRigExactTol = 0.0;
constexpr double kRigEndpointTol = 1e-9;
constexpr double kRigContinuity = 0.1;
constexpr double kRigSeconds = 10.0;
// Criterion 5
constexpr int kGmSamples = 50;
constexpr int kGmMaxSrcDim = 3;
constexpr int kGmWindow = 8;
constexpr int kGmSteps = 100;
// Criterion 6
constexpr int kSuspGrid = 96;
constexpr int kSuspSamples = 5;
constexpr int kSuspSteps = 100;
constexpr double kSuspInterpolationTol = 1e-6;
// Criterion 7
constexpr int kTypeN = 2;
constexpr std::size_t kTypeVariants = 12;
// Criterion 8
constexpr std::uint64_t kCorpusSeed = 7;

const std::string kSource = RIGCHECK_SOURCE_DIR;

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

std::string takeString(char* s) {
  std::string out = s ? s : "";
  rc_string_free(s);
  return out;
}

// Runs a corpus path through the C interface; returns the JSON report or "" on error.
std::string runCorpusJson(const std::string& path, std::uint64_t seed, bool model) {
  rc_flags* flags = nullptr;
  if (rc_flags_new(&flags) != RC_OK) return "";
  rc_flags_set_seed(flags, seed);
  if (model) {
    rc_flags_set_mode(flags, RC_MODE_MODEL);
    rc_flags_set_models(flags, kAxiomModels);
    rc_flags_set_maxdim(flags, kAxiomMaxDim);
    rc_flags_set_tol(flags, kAxiomTol);
  }
  rc_report* report = nullptr;
  const rc_status s = rc_run_corpus(path.c_str(), flags, &report);
  rc_flags_free(flags);
  if (s != RC_OK) return "";
  char* raw = nullptr;
  std::string out = rc_report_json(report, 0, &raw) == RC_OK ? takeString(raw) : "";
  rc_report_free(report);
  return out;
}

Result monoidalPairs() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  RandomPairOptions opt;
  opt.maxDepth = kPairDepth;
  int decided = 0, modelFails = 0;
  for (int k = 0; k < kPairCount; ++k) {
    const auto [f, g] = randomMonoidalPair(rng, opt);
    if (decideEqual(f, g) == Verdict::Equal) ++decided;
    for (const auto& m : randomModels({"a", "b", "c", "d"}, kModelsPerPair, kPairMaxDim, 100000 + k))
      if (!equalInModel(f, g, m, kPairTol)) ++modelFails;
  }
  const double secs = secondsSince(t0);
  return {decided == kPairCount && modelFails == 0 && secs < kPairSeconds,
          std::to_string(decided) + "/" + std::to_string(kPairCount) + " Equal, " + std::to_string(modelFails) +
              " model mismatches, " + fmt(secs) + " s"};
}

Result axiomCorpus() {
  int modesPassed = 0;
  std::string detail;
  for (bool model : {false, true}) {
    const std::string text = runCorpusJson(kSource + "/corpus", kCorpusSeed, model);
    if (text.empty()) return {false, "corpus run failed"};
    const json j = json::parse(text);
    const bool ok = j["summary"]["allPass"].get<bool>();
    modesPassed += ok;
    detail += std::string(model ? "model " : "exact ") + std::to_string(j["summary"]["passed"].get<int>()) + "/" +
              std::to_string(j["summary"]["total"].get<int>()) + "; ";
  }
  int mutants = 0, mutantsFailed = 0;
  for (bool model : {false, true}) {
    const std::string text = runCorpusJson(kSource + "/tests/mutations", kCorpusSeed, model);
    if (text.empty()) return {false, "mutation run failed"};
    const json report = json::parse(text);
    for (const auto& d : report["diagrams"]) {
      ++mutants;
      mutantsFailed += d["verdict"] == "fail";
    }
  }
  detail += "mutations failing " + std::to_string(mutantsFailed) + "/" + std::to_string(mutants);
  return {modesPassed == 2 && mutants > 0 && mutantsFailed == mutants, detail};
}

Result strictifyStructural() {
  RunFlags flags;
  flags.seed = kCorpusSeed;
  const std::string text = "diagram strictify { check strictify-structural samples " +
                           std::to_string(kStrictifySamples) + " mode model(tol=0); }";
  const Report r = runText(text, flags);
  if (r.diagrams.size() != 1) return {false, "no report"};
  const json details = json::parse(r.diagrams[0].details)[0]["details"];
  const int arrows = details.value("arrows", 0);
  const int evaluated = details.value("modelsEvaluated", 0);
  const int skipped = details.value("modelsOverBudget", 0);
  return {r.diagrams[0].verdict == DiagramVerdict::Pass && arrows == 5 * kStrictifySamples && evaluated > 0,
          std::to_string(arrows) + " arrows decided Equal, naturality square in " + std::to_string(evaluated) +
              " models (" + std::to_string(skipped) + " over the size budget), max error " +
              fmt(r.diagrams[0].maxError)};
}

Result stabilizationRig() {
  const auto t0 = Clock::now();
  RigOptions opt;
  opt.truncation = kRigTruncation;
  opt.steps = kRigSteps;
  int diagrams = 0, passed = 0;
  double worstEndpoint = 0.0, worstJump = 0.0, worstExact = 0.0;
  bool ok = true;
  for (const auto& name : rigCatalogue()) {
    const RigReport r = verifyRigDiagram(name, opt);
    ++diagrams;
    bool good = r.pass;
    for (const auto& sc : r.checks) {
      if (sc.homotopy) {
        worstEndpoint = std::max(worstEndpoint, sc.endpointError);
        worstJump = std::max(worstJump, sc.continuityBound);
        good = good && sc.endpointError <= kRigEndpointTol && sc.continuityBound <= kRigContinuity &&
               sc.steps == kRigSteps;
      } else {
        worstExact = std::max(worstExact, sc.maxError);
        good = good && sc.maxError <= kRigExactTol;
      }
    }
    passed += good;
    ok = ok && good;
  }
  const double secs = secondsSince(t0);
  return {ok && secs < kRigSeconds,
          std::to_string(passed) + "/" + std::to_string(diagrams) + " diagrams, exact error " + fmt(worstExact) +
              ", endpoint " + fmt(worstEndpoint) + ", step jump " + fmt(worstJump) + ", " + fmt(secs) + " s"};
}

Result generalizedMorphisms() {
  std::mt19937_64 rng(5);
  RandomGMOptions opt;
  opt.maxSrcDim = kGmMaxSrcDim;
  opt.window = kGmWindow;
  RandomGMOptions two = opt;
  two.functorItems = 2;
  const Pairing p;
  int witnesses = 0, witnessFails = 0, pushChecks = 0, pushFails = 0;
  auto note = [&](const LawWitness& w) {
    ++witnesses;
    witnessFails += !(w.pass && w.path.endpointError <= kEndpointTol);
  };
  for (int k = 0; k < kGmSamples; ++k) {
    const GenMor a = randomGenMor(rng, opt);
    const GenMor b = randomGenMorOver(rng, a.srcDim, a.functor, a.tgtDim, opt);
    const GenMor c = randomGenMorOver(rng, a.srcDim, a.functor, a.tgtDim, opt);
    note(witnessAddNeutral(a, true, p, kGmSteps));
    note(witnessAddNeutral(a, false, p, kGmSteps));
    note(witnessAddComm(a, b, p, kGmSteps));
    note(witnessAddAssoc(a, b, c, p, kGmSteps));
    note(witnessComposeNeutral(a, true, p, kGmSteps));
    note(witnessComposeNeutral(a, false, p, kGmSteps));

    const GenMor x = randomGenMor(rng, two);
    const GenMor y = randomGenMorOver(rng, x.srcDim, x.functor, x.tgtDim, two);
    const BrEndo t = BrEndo::single(x.functor.items()[0]), s = BrEndo::single(x.functor.items()[1]);
    const EndoMor ts(BrEndo::compose(t, s), BrEndo::compose(s, t), xiAt(t, s, endoVar()));
    const EndoMor st(BrEndo::compose(s, t), BrEndo::compose(t, s), xiAt(s, t, endoVar()));
    pushChecks += 2;
    pushFails += gmDistance(pushforward(ts, addGM(x, y, p)), addGM(pushforward(ts, x), pushforward(ts, y), p)) != 0.0;
    pushFails += gmDistance(pushforward(vcompEndo(st, ts), x), pushforward(st, pushforward(ts, x))) != 0.0;
  }
  return {witnessFails == 0 && pushFails == 0,
          std::to_string(witnesses - witnessFails) + "/" + std::to_string(witnesses) + " law witnesses, " +
              std::to_string(pushChecks - pushFails) + "/" + std::to_string(pushChecks) + " pushforward identities"};
}

Result suspension() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  bool ok = true;
  double worstInterp = 0.0, worstJunction = 0.0, worstTerminal = 0.0;
  for (int k = 0; k < kSuspSamples; ++k) {
    CMat a(2, 2), b(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        a(i, j) = {u(rng), u(rng)};
        b(i, j) = {u(rng), u(rng)};
      }
    const SuspElem f = suspFromFunction(kSuspGrid, 2, [&](double t) {
      return CMat(std::sin(M_PI * t) * a + std::sin(3.0 * M_PI * t) * b);
    });
    const SuspChainReport r = suspensionChain(f, kSuspSteps);
    worstInterp = std::max(worstInterp, r.interpolationError);
    worstJunction = std::max(worstJunction, r.junctionError);
    worstTerminal = std::max(worstTerminal, r.terminalNorm);
    ok = ok && r.involution && r.startError == 0.0 && r.junctionError == 0.0 && r.terminalNorm == 0.0 &&
         r.interpolationError <= kSuspInterpolationTol;
  }
  return {ok, std::to_string(kSuspSamples) + " elements at M=" + std::to_string(kSuspGrid) +
                  ", involution exact, junction " + fmt(worstJunction) + ", interpolation " + fmt(worstInterp) +
                  ", terminal " + fmt(worstTerminal)};
}

Result typeLevel() {
  const bool phiOk = runVariant(wellTypedPhi(kTypeN), kTypeN) == 0;
  const bool psiOk = runVariant(wellTypedPsi(kTypeN), kTypeN) == 0;
  const auto variants = typeCatalogue(kTypeN);
  int rejected = 0;
  for (const auto& v : variants) rejected += runVariant(v, kTypeN) == v.expectedStage && v.expectedStage > 0;
  return {phiOk && psiOk && variants.size() == kTypeVariants && rejected == static_cast<int>(kTypeVariants),
          std::string("well-typed phi ") + (phiOk ? "accepted" : "rejected") + ", psi " +
              (psiOk ? "accepted" : "rejected") + ", " + std::to_string(rejected) + "/" +
              std::to_string(variants.size()) + " variants rejected at the expected stage"};
}

Result determinism() {
  const std::string first = runCorpusJson(kSource + "/corpus", kCorpusSeed, false);
  const std::string second = runCorpusJson(kSource + "/corpus", kCorpusSeed, false);
  const bool ok = !first.empty() && first == second && first.find("\"ms\"") == std::string::npos;
  return {ok, std::to_string(first.size()) + " bytes, " + (first == second ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"random monoidal pairs", monoidalPairs},
      {"axiom corpus and mutations", axiomCorpus},
      {"strictified structural arrows", strictifyStructural},
      {"stabilization rig", stabilizationRig},
      {"generalized-morphism laws", generalizedMorphisms},
      {"suspension inversion and null chain", suspension},
      {"type-level pipelines", typeLevel},
      {"deterministic corpus JSON", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failures += !r.pass;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, r.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
