#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "rigcheck/diagram.hpp"

using namespace rig;
using nlohmann::json;

namespace {

ErrorCode codeOf(const std::string& text) {
  try {
    parseDiagrams(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

std::string messageOf(const std::string& text) {
  try {
    parseDiagrams(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

json runJson(const std::string& text, const RunFlags& flags = {}) {
  return json::parse(emitReport(runText(text, flags), ReportFormat::Json, false));
}

const std::string kCorpus = std::string(RIGCHECK_SOURCE_DIR) + "/corpus";

}  // namespace

TEST_CASE("parser accepts the declaration forms") {
  const auto decls = parseDiagrams(R"(
    # two diagrams in one text
    diagram first {
      obj a b;
      dim a 2;
      gen f : a -> b;
      gen g : (a * a) -> a = [[1, 0, 0, 1], [0, 1, 1, 0]];
      endo T = (DA a . Mn 2);
      mode model(count=3, maxdim=2, seed=5, tol=0);
      assert comp(xiT[b,b], ten(f, f)) == comp(ten(f, f), xiT[a,a]);
      check suspension-involution grid 8 mode exact;
    }
    diagram second { obj x; assert id[x] == id[x]; }
  )");
  REQUIRE(decls.size() == 2);
  const DiagramDecl& s = decls[0];
  CHECK(s.name == "first");
  CHECK(s.objects == std::vector<std::string>{"a", "b"});
  CHECK(s.pinnedDims.at("a") == 2);
  CHECK(s.named.count("f") == 1);
  CHECK(s.fixed.at("g").rows() == 2);
  CHECK(s.endos.count("T") == 1);
  REQUIRE(s.statements.size() == 2);
  CHECK(s.statements[0].mode.kind == ModeKind::Model);
  CHECK(s.statements[0].mode.count == 3);
  CHECK(s.statements[0].mode.seed == 5u);
  CHECK(s.statements[1].kind == Statement::Kind::Check);
  CHECK(s.statements[1].params.at("grid") == "8");
  CHECK(s.statements[1].mode.kind == ModeKind::Exact);
}

TEST_CASE("parse errors carry line and column") {
  CHECK(codeOf("diagram d { obj a; assert id[a] == ; }") == ErrorCode::ParseError);
  CHECK(messageOf("diagram d {\n  obj a;\n  assert id[q] == id[a];\n}").find("3:") != std::string::npos);
  CHECK(codeOf("diagram d { obj a; mode sideways; }") == ErrorCode::ParseError);
  CHECK(codeOf("diagram d { gen f : a -> a; }") == ErrorCode::ParseError);
  CHECK(codeOf("diagram d { obj a; endo T = Mn 0; }") != ErrorCode::Ok);
}

TEST_CASE("ill-typed statements are type errors") {
  CHECK(codeOf("diagram d { obj a b; assert xiT[a,b] == id[(a * b)]; }") == ErrorCode::TypeError);
  CHECK(codeOf("diagram d { obj a b; assert comp(xiT[a,b], xiT[a,b]) == id[(a * b)]; }") == ErrorCode::TypeError);
  CHECK(codeOf("diagram d { obj a; gen f : a -> a = [[1, 2]]; }") != ErrorCode::Ok);
}

TEST_CASE("object and morphism expressions against a scope") {
  const DiagramDecl scope = parseDiagram("diagram s { obj a b; endo T = DA a; assert id[a] == id[a]; }");
  CHECK(parseObject("plus(ten(a, b), 1)", scope) == (ObjTerm::gen("a") * ObjTerm::gen("b")) + ObjTerm::one());
  CHECK(parseObject("app(T, b)", scope) == ObjTerm::gen("a") * ObjTerm::gen("b"));
  const MorTerm m = parseMorphism("inv(alphaT[a,b,a])", scope);
  CHECK(m.src() == ObjTerm::gen("a") * (ObjTerm::gen("b") * ObjTerm::gen("a")));
  CHECK_THROWS_AS(parseMorphism("nosuch[a]", scope), Error);
}

TEST_CASE("verdicts of small diagrams") {
  const json ok = runJson("diagram ok { obj a b; assert comp(xiT[b,a], xiT[a,b]) == id[(a * b)]; }");
  CHECK(ok["diagrams"][0]["verdict"] == "pass");
  CHECK(ok["summary"]["allPass"] == true);

  const json bad = runJson("diagram bad { obj a; assert xiT[a,a] == id[(a * a)]; }");
  CHECK(bad["diagrams"][0]["verdict"] == "fail");

  // Named generators without fixed matrices are undecided in exact mode.
  const json open =
      runJson("diagram open { obj a b; gen f : a -> b; gen g : a -> b; assert f == g mode exact; }");
  CHECK(open["diagrams"][0]["verdict"] == "indeterminate");
  CHECK(open["summary"]["indeterminate"] == 1);

  // The same statement is refuted by random models.
  const json refuted = runJson(
      "diagram open { obj a b; gen f : a -> b; gen g : a -> b; assert f == g mode model(count=3, maxdim=2); }");
  CHECK(refuted["diagrams"][0]["verdict"] == "fail");
}

TEST_CASE("fixed interpretations decide exact statements") {
  const json j = runJson(R"(diagram scalar {
      dim R 1;
      gen add : (R + R) -> R = [[1, 1]];
      mode exact;
      assert comp(add, xiP[R,R]) == add;
    })");
  CHECK(j["diagrams"][0]["verdict"] == "pass");
  CHECK(j["diagrams"][0]["details"][0]["details"]["decidedBy"] == "fixed interpretation");
}

TEST_CASE("mode override applies to asserts only") {
  RunFlags flags;
  flags.modeOverride = ModeKind::Model;
  flags.models = 2;
  flags.maxDim = 2;
  const json j = runJson("diagram d { obj a; assert xiT[a,a] == xiT[a,a] mode exact; }", flags);
  CHECK(j["diagrams"][0]["mode"].get<std::string>().rfind("model", 0) == 0);
  const json h = runJson("diagram h { check suspension-involution grid 8 samples 1 mode exact; }", flags);
  CHECK(h["diagrams"][0]["verdict"] == "pass");
}

TEST_CASE("catalogue checks report verdicts and reject unknown names") {
  const auto& names = checkCatalogue();
  CHECK(std::find(names.begin(), names.end(), "comm-mu") != names.end());
  CHECK(std::find(names.begin(), names.end(), "type-variants") != names.end());
  const json j = runJson("diagram t { check type-variants n 2 mode exact; }");
  CHECK(j["diagrams"][0]["verdict"] == "pass");
  const json w = runJson("diagram w { check gm-add-comm samples 2 mode exact; }");
  CHECK(w["diagrams"][0]["verdict"] == "indeterminate");
  CHECK_THROWS_AS(parseDiagrams("diagram u { check no-such-check; }"), Error);
}

TEST_CASE("reports are deterministic for a fixed seed") {
  RunFlags flags;
  flags.seed = 17;
  const std::string text = "diagram d { obj a b; gen f : a -> b; assert comp(id[b], f) == f mode model(count=4); }";
  const std::string one = emitReport(runText(text, flags), ReportFormat::Json, false);
  const std::string two = emitReport(runText(text, flags), ReportFormat::Json, false);
  CHECK(one == two);
  CHECK(one.find("\"ms\"") == std::string::npos);
  CHECK(emitReport(runText(text, flags), ReportFormat::Json, true).find("\"ms\"") != std::string::npos);
  const std::string table = emitReport(runText(text, flags), ReportFormat::Text, false);
  CHECK(table.find("1 passed") != std::string::npos);
}

TEST_CASE("seed defaults to the environment") {
  ::setenv("RIGCHECK_SEED", "1234", 1);
  CHECK(defaultSeed() == 1234u);
  ::unsetenv("RIGCHECK_SEED");
  CHECK(defaultSeed() == 0u);
}

TEST_CASE("corpus files run and witness paths resolve relative to the file") {
  RunFlags flags;
  flags.seed = 7;
  const Report r = runCorpus(kCorpus + "/stable-comm-mu-witness.diag", flags);
  REQUIRE(r.diagrams.size() == 1);
  CHECK(r.diagrams[0].verdict == DiagramVerdict::Pass);
  CHECK_THROWS_AS(runCorpus(kCorpus + "/does-not-exist.diag", flags), Error);
}

TEST_CASE("a missing witness file is a failure, not a crash") {
  const auto dir = std::filesystem::temp_directory_path() / "rigcheck_witness_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "w.diag");
    out << "diagram w { check comm-mu trunc 2 mode homotopy(witness:\"missing.json\"); }\n";
  }
  const Report r = runCorpus((dir / "w.diag").string(), RunFlags{});
  REQUIRE(r.diagrams.size() == 1);
  CHECK(r.diagrams[0].verdict != DiagramVerdict::Pass);
  std::filesystem::remove_all(dir);
}

TEST_CASE("witness export replays") {
  const json w = json::parse(rigWitnessJson("comm-mu", 2, 5));
  CHECK(w.contains("witnesses"));
  CHECK_THROWS_AS(rigWitnessJson("nope", 2, 5), Error);
}
