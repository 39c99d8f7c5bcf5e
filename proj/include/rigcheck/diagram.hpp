#pragma once

// Diagram description language, the corpus runner and report emitters.
//
//   diagram NAME {
//     obj a b c;                       generators
//     dim R 1;                         pinned model dimension
//     gen f : src -> tgt [= [[1,0]]];  named morphism, optional fixed matrix
//     endo T = DA a;                   endofunctor (Id, K, Mn n, C0 n, DA obj, (E . E), (E + E))
//     mode exact;                      default mode for the statements below
//     assert LHS == RHS [mode M];      equality of parallel morphisms
//     check NAME [key value]* [mode M];  catalogue check
//   }
//
// Modes: exact | model(count=5, maxdim=4, seed=0, tol=0)
//        | homotopy(construct:rotation | construct:suspension-null | witness:"file.json")

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rigcheck/endo_calc.hpp"
#include "rigcheck/matrix_model.hpp"

namespace rig {

enum class ModeKind { Exact, Model, Homotopy };
enum class HomotopySource { Rotation, SuspensionNull, Witness };

struct Mode {
  ModeKind kind = ModeKind::Exact;
  // Model parameters; unset values fall back to run flags, then defaults.
  std::optional<int> count, maxDim;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  HomotopySource source = HomotopySource::Rotation;
  std::string witnessPath;
  std::string str() const;
};

struct Statement {
  enum class Kind { Assert, Check } kind = Kind::Assert;
  int line = 0;
  MorTerm left, right;                        // Assert
  std::string check;                          // Check: catalogue name
  std::map<std::string, std::string> params;  // Check: key/value parameters
  Mode mode;
  bool modeDeclared = false;
};

struct DiagramDecl {
  std::string name;
  std::string file;
  std::vector<std::string> objects;
  std::map<std::string, int> pinnedDims;
  std::map<std::string, MorTerm> named;
  std::map<std::string, SparseMat> fixed;
  std::map<std::string, BrEndo> endos;
  std::vector<Statement> statements;
};

// ParseError messages carry "line:col"; non-parallel asserts raise TypeError.
std::vector<DiagramDecl> parseDiagrams(const std::string& text, const std::string& file = "<input>");
DiagramDecl parseDiagram(const std::string& text, const std::string& file = "<input>");

// Parse a morphism or object against the declarations of a decl.
MorTerm parseMorphism(const std::string& text, const DiagramDecl& scope);
ObjTerm parseObject(const std::string& text, const DiagramDecl& scope);

struct RunFlags {
  std::optional<ModeKind> modeOverride;  // exact or model; applies to asserts only
  std::uint64_t seed = 0;
  std::optional<int> models, maxDim;
  std::optional<double> tol;
  int truncation = 8;
};

// Seed from RIGCHECK_SEED, else 0.
std::uint64_t defaultSeed();

enum class DiagramVerdict { Pass, Fail, Indeterminate };
const char* diagramVerdictName(DiagramVerdict v);

struct DiagramResult {
  std::string name;
  std::string file;
  std::string mode;
  DiagramVerdict verdict = DiagramVerdict::Pass;
  double maxError = 0.0;
  double ms = 0.0;
  // Serialized JSON array of per-statement details.
  std::string details;
};

struct Report {
  std::vector<DiagramResult> diagrams;  // sorted by name
  std::vector<std::string> warnings;
  int passed = 0, failed = 0, indeterminate = 0;
  double ms = 0.0;
  bool allPass() const { return failed == 0 && indeterminate == 0; }
};

DiagramResult runDiagram(const DiagramDecl& decl, const RunFlags& flags);
// Runs every .diag file of a directory, or a single file.
Report runCorpus(const std::string& path, const RunFlags& flags);
Report runText(const std::string& text, const RunFlags& flags);

enum class ReportFormat { Text, Json };
std::string emitReport(const Report& r, ReportFormat format, bool includeTiming = true);

// Catalogue names accepted by `check`.
const std::vector<std::string>& checkCatalogue();

// Rotation witnesses of a rig catalogue diagram, keyed by sub-check name.
std::string rigWitnessJson(const std::string& diagram, int truncation, int steps);

}  // namespace rig
