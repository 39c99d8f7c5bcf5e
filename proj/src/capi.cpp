#include "rigcheck/rigcheck.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "rigcheck/diagram.hpp"
#include "rigcheck/stable_compacts.hpp"

struct rc_flags {
  rig::RunFlags flags;
};

struct rc_report {
  rig::Report report;
};

static_assert(static_cast<int>(rig::ErrorCode::InvalidArgument) == RC_INVALID_ARGUMENT,
              "status codes must mirror rig::ErrorCode");
static_assert(static_cast<int>(rig::ErrorCode::ParseError) == RC_PARSE_ERROR, "status codes must mirror rig::ErrorCode");

namespace {

thread_local std::string lastError;

rc_status record(rc_status s, const std::string& msg) {
  lastError = msg;
  return s;
}

template <class F>
rc_status guarded(F&& body) {
  try {
    lastError.clear();
    body();
    return RC_OK;
  } catch (const rig::Error& e) {
    return record(static_cast<rc_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return record(RC_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return record(RC_INTERNAL_ERROR, e.what());
  }
}

rc_status nullArg(const char* what) { return record(RC_INVALID_ARGUMENT, std::string(what) + " is null"); }

char* copyOut(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

rig::RunFlags flagsOf(const rc_flags* f) {
  if (f) return f->flags;
  rig::RunFlags d;
  d.seed = rig::defaultSeed();
  return d;
}

}  // namespace

extern "C" {

const char* rc_version(void) { return "1.0.0"; }

const char* rc_status_name(int status) {
  if (status == RC_INTERNAL_ERROR) return "InternalError";
  if (status < 0 || status > RC_INVALID_ARGUMENT) return "Unknown";
  return rig::errorName(static_cast<rig::ErrorCode>(status));
}

const char* rc_last_error(void) { return lastError.c_str(); }

void rc_string_free(char* s) { std::free(s); }

rc_status rc_flags_new(rc_flags** out) {
  if (!out) return nullArg("out");
  return guarded([&] {
    auto* f = new rc_flags;
    f->flags.seed = rig::defaultSeed();
    *out = f;
  });
}

void rc_flags_free(rc_flags* flags) { delete flags; }

rc_status rc_flags_set_mode(rc_flags* flags, rc_mode mode) {
  if (!flags) return nullArg("flags");
  switch (mode) {
    case RC_MODE_DECLARED: flags->flags.modeOverride.reset(); return RC_OK;
    case RC_MODE_EXACT: flags->flags.modeOverride = rig::ModeKind::Exact; return RC_OK;
    case RC_MODE_MODEL: flags->flags.modeOverride = rig::ModeKind::Model; return RC_OK;
  }
  return record(RC_INVALID_ARGUMENT, "unknown mode");
}

rc_status rc_flags_set_seed(rc_flags* flags, uint64_t seed) {
  if (!flags) return nullArg("flags");
  flags->flags.seed = seed;
  return RC_OK;
}

rc_status rc_flags_set_models(rc_flags* flags, int count) {
  if (!flags) return nullArg("flags");
  if (count < 1) return record(RC_INVALID_ARGUMENT, "model count must be positive");
  flags->flags.models = count;
  return RC_OK;
}

rc_status rc_flags_set_maxdim(rc_flags* flags, int maxDim) {
  if (!flags) return nullArg("flags");
  if (maxDim < 1) return record(RC_INVALID_ARGUMENT, "maximum dimension must be positive");
  flags->flags.maxDim = maxDim;
  return RC_OK;
}

rc_status rc_flags_set_tol(rc_flags* flags, double tol) {
  if (!flags) return nullArg("flags");
  if (!(tol >= 0.0)) return record(RC_INVALID_ARGUMENT, "tolerance must be non-negative");
  flags->flags.tol = tol;
  return RC_OK;
}

rc_status rc_flags_set_truncation(rc_flags* flags, int window) {
  if (!flags) return nullArg("flags");
  if (window < 1) return record(RC_INVALID_ARGUMENT, "truncation must be positive");
  flags->flags.truncation = window;
  return RC_OK;
}

rc_status rc_run_corpus(const char* path, const rc_flags* flags, rc_report** out) {
  if (!path) return nullArg("path");
  if (!out) return nullArg("out");
  return guarded([&] { *out = new rc_report{rig::runCorpus(path, flagsOf(flags))}; });
}

rc_status rc_run_text(const char* text, const rc_flags* flags, rc_report** out) {
  if (!text) return nullArg("text");
  if (!out) return nullArg("out");
  return guarded([&] { *out = new rc_report{rig::runText(text, flagsOf(flags))}; });
}

void rc_report_free(rc_report* report) { delete report; }

rc_status rc_report_counts(const rc_report* r, int* total, int* passed, int* failed, int* indeterminate) {
  if (!r) return nullArg("report");
  if (total) *total = static_cast<int>(r->report.diagrams.size());
  if (passed) *passed = r->report.passed;
  if (failed) *failed = r->report.failed;
  if (indeterminate) *indeterminate = r->report.indeterminate;
  return RC_OK;
}

int rc_report_all_pass(const rc_report* r) { return r && r->report.allPass() ? 1 : 0; }

rc_status rc_report_warning_count(const rc_report* r, int* count) {
  if (!r) return nullArg("report");
  if (!count) return nullArg("count");
  *count = static_cast<int>(r->report.warnings.size());
  return RC_OK;
}

rc_status rc_report_json(const rc_report* r, int includeTiming, char** out) {
  if (!r) return nullArg("report");
  if (!out) return nullArg("out");
  return guarded([&] { *out = copyOut(rig::emitReport(r->report, rig::ReportFormat::Json, includeTiming != 0)); });
}

rc_status rc_report_text(const rc_report* r, int includeTiming, char** out) {
  if (!r) return nullArg("report");
  if (!out) return nullArg("out");
  return guarded([&] { *out = copyOut(rig::emitReport(r->report, rig::ReportFormat::Text, includeTiming != 0)); });
}

rc_status rc_parse_check(const char* text, int* diagrams) {
  if (!text) return nullArg("text");
  return guarded([&] {
    const auto decls = rig::parseDiagrams(text);
    if (diagrams) *diagrams = static_cast<int>(decls.size());
  });
}

rc_status rc_decide_equal(const char* declarations, const char* lhs, const char* rhs, rc_verdict* verdict) {
  if (!lhs || !rhs) return nullArg("expression");
  if (!verdict) return nullArg("verdict");
  return guarded([&] {
    const std::string decls = declarations ? declarations : "";
    // Reuse the diagram parser for the declarations; the dummy statement only closes the block.
    const rig::DiagramDecl scope =
        rig::parseDiagram("diagram scope { " + decls + " assert id[1] == id[1]; }", "<declarations>");
    const rig::MorTerm f = rig::parseMorphism(lhs, scope), g = rig::parseMorphism(rhs, scope);
    switch (rig::decideEqual(f, g)) {
      case rig::Verdict::Equal: *verdict = RC_EQUAL; break;
      case rig::Verdict::Unequal: *verdict = RC_UNEQUAL; break;
      case rig::Verdict::Indeterminate: *verdict = RC_INDETERMINATE; break;
    }
  });
}

rc_status rc_rig_check(const char* diagram, int truncation, int steps, char** out) {
  if (!diagram) return nullArg("diagram");
  if (!out) return nullArg("out");
  return guarded([&] {
    rig::RigOptions opt;
    opt.truncation = truncation;
    opt.steps = steps;
    *out = copyOut(rig::rigReportJson(rig::verifyRigDiagram(diagram, opt)));
  });
}

rc_status rc_rig_witness(const char* diagram, int truncation, int steps, char** out) {
  if (!diagram) return nullArg("diagram");
  if (!out) return nullArg("out");
  return guarded([&] { *out = copyOut(rig::rigWitnessJson(diagram, truncation, steps)); });
}

}  // extern "C"
