// Command-line front end over the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "semipb/semipb.h"

namespace {

struct Text {
  char* p = nullptr;
  ~Text() { spb_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using ModelPtr = std::unique_ptr<spb_model, decltype(&spb_model_free)>;

int exit_code(spb_status s) {
  switch (s) {
    case SPB_OK: return 0;
    case SPB_SCHEMA_ERROR:
    case SPB_INVALID_ARGUMENT: return 2;
    default: return 1;
  }
}

int report_error(spb_status s) {
  std::cerr << "error: " << spb_last_error() << "\n";
  return exit_code(s);
}

int load(const std::string& path, ModelPtr& model) {
  spb_model* raw = nullptr;
  const spb_status s = spb_model_load_file(path.c_str(), &raw);
  if (s != SPB_OK) return report_error(s);
  model.reset(raw);
  return 0;
}

// Writes json to `out` when given, otherwise to stdout. Returns false on I/O failure.
bool emit(const std::string& json, const std::string& out) {
  if (out.empty()) {
    std::cout << json;
    return true;
  }
  std::ofstream f(out, std::ios::binary);
  f << json;
  if (!f) {
    std::cerr << "error: cannot write " << out << "\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semipullbacks of finite kernels and labelled Markov processes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", spb_version());

  std::string file, out, name, lmp1, lmp2, mode = "kernel", r1, r2;
  bool check = false;

  auto* validate = app.add_subcommand("validate", "Run every validator over a model file");
  validate->add_option("file", file, "Model file")->required();

  auto* semipullback = app.add_subcommand("semipullback", "Construct the semipullback of a named cospan");
  semipullback->add_option("file", file, "Model file")->required();
  semipullback->add_option("cospan", name, "Cospan name")->required();
  semipullback->add_option("--mode", mode, "kernel or lmp")->check(CLI::IsMember({"kernel", "lmp"}));
  semipullback->add_option("--out", out, "Output model file (default: stdout)");
  semipullback->add_flag("--check", check, "Re-verify marginals and commutativity");

  auto* quotient = app.add_subcommand("quotient", "Largest zigzag quotient of a named LMP");
  quotient->add_option("file", file, "Model file")->required();
  quotient->add_option("lmp", name, "LMP name")->required();
  quotient->add_option("--out", out, "Output model file (default: stdout)");

  auto* span = app.add_subcommand("span-from-cospan", "Span witnessing behavioral equivalence of two LMPs");
  span->add_option("file", file, "Model file")->required();
  span->add_option("lmp1", lmp1, "First LMP")->required();
  span->add_option("lmp2", lmp2, "Second LMP")->required();
  span->add_option("--out", out, "Output model file (default: stdout)");

  auto* counter = app.add_subcommand("counterexample", "Countable-cocountable cospan with no semipullback");
  counter->add_option("--r1", r1, "First parameter in (0,1), as p/q")->required();
  counter->add_option("--r2", r2, "Second parameter in (0,1), as p/q")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*counter) {
    Text text;
    const spb_status s = spb_counterexample(r1.c_str(), r2.c_str(), &text.p);
    if (s != SPB_OK) return report_error(s);
    std::cout << text.str();
    return 0;
  }

  ModelPtr model(nullptr, &spb_model_free);
  if (const int rc = load(file, model); rc != 0) return rc;

  if (*validate) {
    Text report;
    const spb_status s = spb_validate(model.get(), &report.p);
    if (s != SPB_OK && !report.p) return report_error(s);
    std::cout << report.str();
    return exit_code(s);
  }

  if (*quotient) {
    Text json;
    const spb_status s = spb_quotient(model.get(), name.c_str(), &json.p);
    if (s != SPB_OK) return report_error(s);
    return emit(json.str(), out) ? 0 : 1;
  }

  Text json, report;
  spb_status s;
  if (*semipullback) {
    s = spb_semipullback(model.get(), name.c_str(), mode == "lmp" ? SPB_MODE_LMP : SPB_MODE_KERNEL, check ? 1 : 0,
                         &json.p, &report.p);
  } else {
    s = spb_span_from_cospan(model.get(), lmp1.c_str(), lmp2.c_str(), &json.p, &report.p);
  }
  if (!json.p && !report.p) return report_error(s);
  // The report goes to stdout unless stdout carries the model document.
  (out.empty() && json.p ? std::cerr : std::cout) << report.str();
  if (json.p && !emit(json.str(), out)) return 1;
  return exit_code(s);
}
