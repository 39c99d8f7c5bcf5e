// Command-line front end; talks to the engine only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rigcheck/rigcheck.h"

namespace {

struct StringDeleter {
  void operator()(char* s) const { rc_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

int reportError(rc_status s) {
  std::cerr << "rigcheck: " << rc_status_name(s) << ": " << rc_last_error() << "\n";
  return 2;
}

bool writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks bimonoidal coherence diagrams, stabilization laws and generalized-morphism laws."};
  app.require_subcommand(1);

  std::string path, mode, jsonOut;
  std::optional<std::uint64_t> seed;
  std::optional<int> models, maxDim, trunc;
  std::optional<double> tol;
  bool noTiming = false, quiet = false;
  CLI::App* run = app.add_subcommand("run", "Run every .diag file of a directory, or one file");
  run->add_option("path", path, "Corpus directory or .diag file")->required();
  run->add_option("--mode", mode, "Override the declared mode of symbolic diagrams")
      ->check(CLI::IsMember({"exact", "model"}));
  run->add_option("--seed", seed, "Base seed (default: RIGCHECK_SEED, else 0)");
  run->add_option("--models", models, "Random models per model-mode check")->check(CLI::PositiveNumber);
  run->add_option("--maxdim", maxDim, "Largest random dimension")->check(CLI::PositiveNumber);
  run->add_option("--tol", tol, "Model-mode tolerance")->check(CLI::NonNegativeNumber);
  run->add_option("--trunc", trunc, "Truncation window for stabilization checks")->check(CLI::PositiveNumber);
  run->add_option("--json", jsonOut, "Write the JSON report to this file");
  run->add_flag("--no-timing", noTiming, "Omit timing fields from reports");
  run->add_flag("-q,--quiet", quiet, "Do not print the text table");

  std::string witnessName, witnessOut;
  int witnessTrunc = 2, witnessSteps = 5;
  CLI::App* witness = app.add_subcommand("witness", "Write rotation witnesses for a stabilization diagram");
  witness->add_option("diagram", witnessName, "Catalogue name")->required();
  witness->add_option("--trunc", witnessTrunc, "Truncation window")->check(CLI::PositiveNumber);
  witness->add_option("--steps", witnessSteps, "Snapshots per path")->check(CLI::Range(2, 100000));
  witness->add_option("--out", witnessOut, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  if (*witness) {
    char* raw = nullptr;
    const rc_status s = rc_rig_witness(witnessName.c_str(), witnessTrunc, witnessSteps, &raw);
    if (s != RC_OK) return reportError(s);
    OwnedString json(raw);
    if (!writeFile(witnessOut, json.get())) {
      std::cerr << "rigcheck: cannot write " << witnessOut << "\n";
      return 2;
    }
    return 0;
  }

  rc_flags* rawFlags = nullptr;
  if (rc_status s = rc_flags_new(&rawFlags); s != RC_OK) return reportError(s);
  std::unique_ptr<rc_flags, void (*)(rc_flags*)> flags(rawFlags, rc_flags_free);
  rc_status s = RC_OK;
  if (!mode.empty()) s = rc_flags_set_mode(flags.get(), mode == "exact" ? RC_MODE_EXACT : RC_MODE_MODEL);
  if (s == RC_OK && seed) s = rc_flags_set_seed(flags.get(), *seed);
  if (s == RC_OK && models) s = rc_flags_set_models(flags.get(), *models);
  if (s == RC_OK && maxDim) s = rc_flags_set_maxdim(flags.get(), *maxDim);
  if (s == RC_OK && tol) s = rc_flags_set_tol(flags.get(), *tol);
  if (s == RC_OK && trunc) s = rc_flags_set_truncation(flags.get(), *trunc);
  if (s != RC_OK) return reportError(s);

  rc_report* rawReport = nullptr;
  if (s = rc_run_corpus(path.c_str(), flags.get(), &rawReport); s != RC_OK) return reportError(s);
  std::unique_ptr<rc_report, void (*)(rc_report*)> report(rawReport, rc_report_free);

  if (!quiet) {
    char* raw = nullptr;
    if (s = rc_report_text(report.get(), noTiming ? 0 : 1, &raw); s != RC_OK) return reportError(s);
    OwnedString text(raw);
    std::cout << text.get();
  }
  if (!jsonOut.empty()) {
    char* raw = nullptr;
    if (s = rc_report_json(report.get(), noTiming ? 0 : 1, &raw); s != RC_OK) return reportError(s);
    OwnedString json(raw);
    if (!writeFile(jsonOut, json.get())) {
      std::cerr << "rigcheck: cannot write " << jsonOut << "\n";
      return 2;
    }
  }
  return rc_report_all_pass(report.get()) ? 0 : 1;
}
