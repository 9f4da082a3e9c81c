#include "semipb/semipb.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "semipb/bisim.hpp"
#include "semipb/counterexample.hpp"
#include "semipb/error.hpp"
#include "semipb/model_io.hpp"
#include "semipb/semipullback.hpp"

struct spb_model {
  semipb::io::Model model;
};

namespace {

using semipb::Error;
using semipb::ErrorCode;

thread_local std::string last_error;

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** slot, const std::string& s) {
  if (slot) *slot = duplicate(s);
}

spb_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse:
    case ErrorCode::Schema: return SPB_SCHEMA_ERROR;
    case ErrorCode::ParamError: return SPB_INVALID_ARGUMENT;
    case ErrorCode::PipelineInfeasible: return SPB_INTERNAL_ERROR;
    default: return SPB_FAILED;
  }
}

spb_status fail(spb_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class F>
spb_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const Error& e) {
    return fail(status_for(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(SPB_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(SPB_INTERNAL_ERROR, "unknown error");
  }
}

std::string validation_report(const semipb::io::Model& m, bool& clean) {
  using namespace semipb;
  std::string out;
  auto line = [&](const std::string& s) {
    out += s + "\n";
    clean = false;
  };
  for (const auto& [name, k] : m.kernels) {
    for (const auto& v : validate_kernel(k).violations) line("kernel " + name + " row " + v.row + ": " + v.message);
  }
  for (const auto& [name, l] : m.lmps) {
    for (const auto& v : validate_lmp(l).violations) line("lmp " + name + " state " + v.row + ": " + v.message);
  }
  for (const auto& [name, h] : m.morphisms) {
    if (auto u = h.first_unhit()) line("morphism " + name + " is not surjective: misses " + h.codomain().state(*u));
  }
  for (const auto& [name, ref] : m.cospans) {
    const bool kernel_mode = m.kernels.count(ref.apex) > 0;
    int leg_no = 1;
    for (const auto* leg : {&ref.leg1, &ref.leg2}) {
      const std::string where = "cospan " + name + " leg" + std::to_string(leg_no++);
      const Morphism& h = m.morphisms.at(leg->morphism);
      try {
        const auto check = kernel_mode ? is_kernel_morphism(h, m.kernels.at(leg->object), m.kernels.at(ref.apex))
                                       : is_zigzag(h, m.lmps.at(leg->object), m.lmps.at(ref.apex));
        if (!check) {
          line(where + (kernel_mode ? " is not a kernel morphism: " : " is not a zigzag: ") + check.witness->describe());
        }
      } catch (const Error& e) {
        line(where + ": " + e.what());
      }
    }
  }
  return out;
}

std::string check_lines(const semipb::SemipullbackCheck& check) {
  std::string out;
  for (const auto& f : check.failures) out += "  " + f + "\n";
  out += check.ok() ? "check: PASS\n" : "check: FAIL\n";
  return out;
}

}  // namespace

extern "C" {

const char* spb_version(void) { return "1.0.0"; }

const char* spb_last_error(void) { return last_error.c_str(); }

void spb_string_free(char* s) { std::free(s); }

spb_status spb_model_load_file(const char* path, spb_model** out) {
  if (!path || !out) return fail(SPB_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new spb_model{semipb::io::load_model(path)};
    return SPB_OK;
  });
}

spb_status spb_model_load_string(const char* json, spb_model** out) {
  if (!json || !out) return fail(SPB_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new spb_model{semipb::io::parse_model(json)};
    return SPB_OK;
  });
}

void spb_model_free(spb_model* model) { delete model; }

spb_status spb_model_serialize(const spb_model* model, char** out_json) {
  if (!model || !out_json) return fail(SPB_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    put(out_json, semipb::io::serialize_model(model->model));
    return SPB_OK;
  });
}

spb_status spb_validate(const spb_model* model, char** out_report) {
  if (!model) return fail(SPB_INVALID_ARGUMENT, "null model");
  return guarded([&] {
    bool clean = true;
    const std::string report = validation_report(model->model, clean);
    put(out_report, clean ? std::string("valid\n") : report);
    if (!clean) last_error = "model has validation violations";
    return clean ? SPB_OK : SPB_FAILED;
  });
}

spb_status spb_semipullback(const spb_model* model, const char* cospan, spb_mode mode, int check, char** out_json,
                            char** out_report) {
  if (!model || !cospan) return fail(SPB_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    using namespace semipb;
    const auto& m = model->model;
    if (!m.cospans.count(cospan)) return fail(SPB_INVALID_ARGUMENT, std::string("unknown cospan '") + cospan + "'");
    std::string report;
    SemipullbackCheck verdict;
    std::optional<SemipullbackResult> result;
    if (mode == SPB_MODE_KERNEL) {
      const KernelCospan c = io::kernel_cospan(m, cospan);
      const bool probability = c.apex.kind() == KernelKind::Probability && c.left.kind() == KernelKind::Probability &&
                               c.right.kind() == KernelKind::Probability;
      result = probability ? semipullback_prob_kernels(c) : semipullback_subprob_kernels(c);
      if (check) verdict = check_semipullback(c, *result);
      report += std::string("pipeline: ") + (probability ? "probability" : "subprobability (one-point completion)") + "\n";
    } else {
      const LmpCospan c = io::lmp_cospan(m, cospan);
      result = semipullback_lmp(c);
      if (check) verdict = check_semipullback(c, *result);
      report += "pipeline: lmp\n";
    }
    report += "pullback states: " + std::to_string(result->pullback.space.size()) + "\n";
    if (check) report += check_lines(verdict);
    put(out_json, io::serialize_model(io::result_model(*result, "vertex")));
    put(out_report, report);
    if (check && !verdict.ok()) return fail(SPB_FAILED, "semipullback check failed");
    return SPB_OK;
  });
}

spb_status spb_quotient(const spb_model* model, const char* lmp, char** out_json) {
  if (!model || !lmp) return fail(SPB_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& m = model->model;
    const auto it = m.lmps.find(lmp);
    if (it == m.lmps.end()) return fail(SPB_INVALID_ARGUMENT, std::string("unknown LMP '") + lmp + "'");
    const auto q = semipb::largest_zigzag_quotient(it->second);
    put(out_json, semipb::io::serialize_model(semipb::io::quotient_model(it->second, lmp, q)));
    return SPB_OK;
  });
}

spb_status spb_span_from_cospan(const spb_model* model, const char* lmp1, const char* lmp2, char** out_json,
                                char** out_report) {
  if (!model || !lmp1 || !lmp2) return fail(SPB_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    using namespace semipb;
    const auto& m = model->model;
    const auto left = m.lmps.find(lmp1);
    const auto right = m.lmps.find(lmp2);
    if (left == m.lmps.end()) return fail(SPB_INVALID_ARGUMENT, std::string("unknown LMP '") + lmp1 + "'");
    if (right == m.lmps.end()) return fail(SPB_INVALID_ARGUMENT, std::string("unknown LMP '") + lmp2 + "'");

    const auto cospan = cospan_from_quotients(left->second, right->second);
    if (!cospan) {
      put(out_report, "not behaviorally equivalent\n");
      return fail(SPB_FAILED, "not behaviorally equivalent");
    }
    const SemipullbackResult span = span_from_cospan(*cospan);
    const SemipullbackCheck verdict = check_semipullback(*cospan, span);

    io::Model out = io::result_model(span, "span");
    out.add_lmp(lmp1, cospan->left);
    out.add_lmp(lmp2, cospan->right);
    out.add_lmp("apex", cospan->apex);
    out.add_morphism("h1", cospan->h1);
    out.add_morphism("h2", cospan->h2);
    out.cospans.emplace("behavioral_equivalence", io::CospanRef{"apex", {lmp1, "h1"}, {lmp2, "h2"}});
    put(out_json, io::serialize_model(out));
    put(out_report, "behaviorally equivalent through " + std::to_string(cospan->apex.space().size()) +
                        "-state quotient\nspan states: " + std::to_string(span.pullback.space.size()) + "\n" +
                        check_lines(verdict));
    if (!verdict.ok()) return fail(SPB_FAILED, "span check failed");
    return SPB_OK;
  });
}

spb_status spb_counterexample(const char* r1, const char* r2, char** out_text) {
  if (!r1 || !r2) return fail(SPB_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    semipb::Rational a, b;
    try {
      a = semipb::parse_rational(r1);
      b = semipb::parse_rational(r2);
    } catch (const Error& e) {
      return fail(SPB_INVALID_ARGUMENT, e.what());
    }
    const auto report = semipb::coco::demonstrate_obstruction(a, b);
    std::string text;
    for (std::size_t i = 0; i < report.chain.size(); ++i) text += std::to_string(i + 1) + ". " + report.chain[i] + "\n";
    put(out_text, text);
    return SPB_OK;
  });
}

}  // extern "C"
