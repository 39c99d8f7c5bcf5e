#include <doctest.h>

#include <cstring>
#include <string>

#include "rigcheck/rigcheck.h"

namespace {

const std::string kCorpus = std::string(RIGCHECK_SOURCE_DIR) + "/corpus";

std::string take(char* s) {
  std::string out = s ? s : "";
  rc_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(rc_version()) > 0);
  CHECK(std::string(rc_status_name(RC_OK)) == "Ok");
  CHECK(std::string(rc_status_name(RC_PARSE_ERROR)) == "ParseError");
  CHECK(std::string(rc_status_name(RC_INTERNAL_ERROR)) == "InternalError");
  CHECK(std::string(rc_status_name(-3)) == "Unknown");
}

TEST_CASE("null arguments are rejected") {
  CHECK(rc_flags_new(nullptr) == RC_INVALID_ARGUMENT);
  CHECK(rc_flags_set_seed(nullptr, 1) == RC_INVALID_ARGUMENT);
  CHECK(std::string(rc_last_error()).find("null") != std::string::npos);
  rc_report* r = nullptr;
  CHECK(rc_run_text(nullptr, nullptr, &r) == RC_INVALID_ARGUMENT);
  CHECK(rc_report_all_pass(nullptr) == 0);
}

TEST_CASE("flag validation") {
  rc_flags* f = nullptr;
  REQUIRE(rc_flags_new(&f) == RC_OK);
  CHECK(rc_flags_set_models(f, 0) == RC_INVALID_ARGUMENT);
  CHECK(rc_flags_set_maxdim(f, -1) == RC_INVALID_ARGUMENT);
  CHECK(rc_flags_set_tol(f, -0.5) == RC_INVALID_ARGUMENT);
  CHECK(rc_flags_set_truncation(f, 0) == RC_INVALID_ARGUMENT);
  CHECK(rc_flags_set_mode(f, RC_MODE_MODEL) == RC_OK);
  CHECK(rc_flags_set_models(f, 2) == RC_OK);
  CHECK(rc_flags_set_seed(f, 9) == RC_OK);
  rc_flags_free(f);
}

TEST_CASE("running decl text") {
  rc_report* r = nullptr;
  REQUIRE(rc_run_text("diagram d { obj a; assert xiT[a,a] == id[(a * a)]; }", nullptr, &r) == RC_OK);
  int total = 0, passed = 0, failed = 0, indet = 0;
  CHECK(rc_report_counts(r, &total, &passed, &failed, &indet) == RC_OK);
  CHECK(total == 1);
  CHECK(failed == 1);
  CHECK(rc_report_all_pass(r) == 0);
  char* json = nullptr;
  REQUIRE(rc_report_json(r, 0, &json) == RC_OK);
  const std::string text = take(json);
  CHECK(text.find("\"verdict\": \"fail\"") != std::string::npos);
  char* table = nullptr;
  REQUIRE(rc_report_text(r, 0, &table) == RC_OK);
  CHECK(take(table).find("0 passed, 1 failed") != std::string::npos);
  rc_report_free(r);
}

TEST_CASE("errors surface as status codes with messages") {
  int n = 0;
  CHECK(rc_parse_check("diagram d { obj a; assert ; }", &n) == RC_PARSE_ERROR);
  CHECK(std::string(rc_last_error()).find("1:") != std::string::npos);
  CHECK(rc_parse_check("diagram a { obj x; assert id[x] == id[x]; } diagram b { check type-phi; }", &n) == RC_OK);
  CHECK(n == 2);
  rc_report* r = nullptr;
  CHECK(rc_run_corpus("/nonexistent/path", nullptr, &r) == RC_IO_ERROR);
  // When running, a malformed diagram becomes a failed entry of the report.
  REQUIRE(rc_run_text("diagram d { obj a; assert ; }", nullptr, &r) == RC_OK);
  CHECK(rc_report_all_pass(r) == 0);
  char* json = nullptr;
  REQUIRE(rc_report_json(r, 0, &json) == RC_OK);
  CHECK(take(json).find("ParseError") != std::string::npos);
  rc_report_free(r);
}

TEST_CASE("deciding equality through the C interface") {
  rc_verdict v = RC_INDETERMINATE;
  CHECK(rc_decide_equal("obj a b;", "comp(xiT[b,a], xiT[a,b])", "id[(a * b)]", &v) == RC_OK);
  CHECK(v == RC_EQUAL);
  CHECK(rc_decide_equal("obj a;", "xiT[a,a]", "id[(a * a)]", &v) == RC_OK);
  CHECK(v == RC_UNEQUAL);
  CHECK(rc_decide_equal("obj a b; gen f : a -> b; gen g : a -> b;", "f", "g", &v) == RC_OK);
  CHECK(v == RC_INDETERMINATE);
  CHECK(rc_decide_equal("obj a b;", "xiT[a,b]", "id[(a * b)]", &v) == RC_NOT_PARALLEL);
}

TEST_CASE("stabilization checks and witnesses") {
  char* out = nullptr;
  REQUIRE(rc_rig_check("comm-mu", 3, 20, &out) == RC_OK);
  CHECK(take(out).find("\"pass\":true") != std::string::npos);
  CHECK(rc_rig_check("missing", 3, 20, &out) == RC_UNKNOWN_DIAGRAM);
  REQUIRE(rc_rig_witness("assoc-mu", 2, 4, &out) == RC_OK);
  CHECK(take(out).find("witnesses") != std::string::npos);
}

TEST_CASE("corpus runs are reproducible through the C interface") {
  rc_flags* f = nullptr;
  REQUIRE(rc_flags_new(&f) == RC_OK);
  rc_flags_set_seed(f, 7);
  std::string first, second;
  for (std::string* dst : {&first, &second}) {
    rc_report* r = nullptr;
    REQUIRE(rc_run_corpus((kCorpus + "/symmetry-natural.diag").c_str(), f, &r) == RC_OK);
    char* json = nullptr;
    REQUIRE(rc_report_json(r, 0, &json) == RC_OK);
    *dst = take(json);
    CHECK(rc_report_all_pass(r) == 1);
    rc_report_free(r);
  }
  CHECK(first == second);
  rc_flags_free(f);
}
