#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "semipb/semipb.h"

namespace {

const std::string data = SEMIPB_TEST_DATA;

struct Owned {
  char* p = nullptr;
  ~Owned() { spb_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Loaded {
  spb_model* m = nullptr;
  explicit Loaded(const std::string& file) { REQUIRE(spb_model_load_file((data + "/" + file).c_str(), &m) == SPB_OK); }
  ~Loaded() { spb_model_free(m); }
};

struct Run {
  int status;
  std::string out;
  std::string err;
};

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Run cli(const std::string& args) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out = dir / "semipb_cli_out.txt", err = dir / "semipb_cli_err.txt";
  const std::string cmd = std::string(SEMIPB_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_file(out), read_file(err)};
}

}  // namespace

TEST_CASE("validation through the C API") {
  Loaded good("identity_cospan.json");
  Owned report;
  CHECK(spb_validate(good.m, &report.p) == SPB_OK);
  CHECK(report.str() == "valid\n");

  Loaded bad("row_sum.json");
  Owned r2;
  CHECK(spb_validate(bad.m, &r2.p) == SPB_FAILED);
  CHECK(r2.str().find("kernel bad row x2") != std::string::npos);

  spb_model* m = nullptr;
  CHECK(spb_model_load_file((data + "/dangling.json").c_str(), &m) == SPB_SCHEMA_ERROR);
  CHECK(std::string(spb_last_error()).find("Missing") != std::string::npos);
  CHECK(spb_model_load_file((data + "/no_such_file.json").c_str(), &m) != SPB_OK);
  CHECK(spb_model_load_string(nullptr, &m) == SPB_INVALID_ARGUMENT);
}

TEST_CASE("semipullback through the C API") {
  Loaded model("identity_cospan.json");
  Owned json, report;
  CHECK(spb_semipullback(model.m, "diag", SPB_MODE_KERNEL, 1, &json.p, &report.p) == SPB_OK);
  CHECK(report.str().find("check: PASS") != std::string::npos);
  CHECK(json.str().find("\"(a,a)\"") != std::string::npos);

  // The result document parses and serializes back to itself.
  spb_model* back = nullptr;
  REQUIRE(spb_model_load_string(json.p, &back) == SPB_OK);
  Owned again;
  CHECK(spb_model_serialize(back, &again.p) == SPB_OK);
  CHECK(again.str() == json.str());
  spb_model_free(back);

  Owned j2, r2;
  CHECK(spb_semipullback(model.m, "nope", SPB_MODE_KERNEL, 1, &j2.p, &r2.p) == SPB_INVALID_ARGUMENT);
  CHECK(spb_semipullback(model.m, "diag", SPB_MODE_LMP, 1, &j2.p, &r2.p) == SPB_SCHEMA_ERROR);
}

TEST_CASE("corrupted leg reports the witness") {
  Loaded model("lmp_models.json");
  Owned json, report;
  CHECK(spb_semipullback(model.m, "corrupted", SPB_MODE_LMP, 1, &json.p, &report.p) == SPB_FAILED);
  CHECK(std::string(spb_last_error()).find("(a, q1, {q1})") != std::string::npos);
}

TEST_CASE("quotient, span and counterexample through the C API") {
  Loaded model("lmp_models.json");
  Owned q;
  CHECK(spb_quotient(model.m, "U", &q.p) == SPB_OK);
  CHECK(q.str().find("\"U/~\"") != std::string::npos);

  Owned json, report;
  CHECK(spb_span_from_cospan(model.m, "P", "Q", &json.p, &report.p) == SPB_OK);
  CHECK(report.str().find("check: PASS") != std::string::npos);

  Owned j2, r2;
  CHECK(spb_span_from_cospan(model.m, "P", "P", &j2.p, &r2.p) == SPB_OK);

  Owned text;
  CHECK(spb_counterexample("1/3", "2/3", &text.p) == SPB_OK);
  CHECK(text.str().find("1/3 = 2/3") != std::string::npos);
  Owned t2;
  CHECK(spb_counterexample("1/2", "1/2", &t2.p) == SPB_INVALID_ARGUMENT);
  CHECK(spb_counterexample("x", "1/2", &t2.p) == SPB_INVALID_ARGUMENT);
}

TEST_CASE("command line: validate") {
  CHECK(cli("validate " + data + "/identity_cospan.json").status == 0);
  const Run bad = cli("validate " + data + "/row_sum.json");
  CHECK(bad.status == 1);
  CHECK(bad.out.find("row x2: row sum 7/6 > 1") != std::string::npos);
  const Run dangling = cli("validate " + data + "/dangling.json");
  CHECK(dangling.status == 2);
  CHECK(dangling.err.find("unknown space") != std::string::npos);
  CHECK(cli("validate").status == 2);
  CHECK(cli("frobnicate").status == 2);
}

TEST_CASE("command line: semipullback") {
  const auto out = std::filesystem::temp_directory_path() / "semipb_cli_result.json";
  const Run diag = cli("semipullback " + data + "/identity_cospan.json diag --check --out " + out.string());
  CHECK(diag.status == 0);
  CHECK(diag.out.find("check: PASS") != std::string::npos);
  const std::string first = read_file(out);
  CHECK(first.find("\"certificates\"") != std::string::npos);
  // Byte-identical output on a second run.
  CHECK(cli("semipullback " + data + "/identity_cospan.json diag --out " + out.string()).status == 0);
  CHECK(read_file(out) == first);

  const Run product = cli("semipullback " + data + "/product_cospan.json product --mode kernel --check");
  CHECK(product.status == 0);
  CHECK(product.err.find("check: PASS") != std::string::npos);

  const Run corrupted = cli("semipullback " + data + "/lmp_models.json corrupted --mode lmp --check");
  CHECK(corrupted.status == 1);
  CHECK(corrupted.err.find("(a, q1, {q1})") != std::string::npos);

  CHECK(cli("semipullback " + data + "/lmp_models.json collapse --mode lmp --check").status == 0);
  CHECK(cli("semipullback " + data + "/lmp_models.json collapse --mode bogus").status == 2);
}

TEST_CASE("command line: quotient, span-from-cospan, counterexample") {
  const Run q = cli("quotient " + data + "/lmp_models.json U");
  CHECK(q.status == 0);
  CHECK(q.out.find("\"U/~\": [\n      \"u1\"\n    ]") != std::string::npos);

  const Run span = cli("span-from-cospan " + data + "/lmp_models.json P Q");
  CHECK(span.status == 0);
  CHECK(span.err.find("check: PASS") != std::string::npos);

  const Run ce = cli("counterexample --r1 1/3 --r2 2/3");
  CHECK(ce.status == 0);
  CHECK(ce.out.find("1/3 = 2/3, a contradiction") != std::string::npos);
  CHECK(cli("counterexample --r1 1/2 --r2 1/2").status == 2);
  CHECK(cli("counterexample --r1 1/2").status == 2);
}
