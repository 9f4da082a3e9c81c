#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "semipb/bisim.hpp"
#include "semipb/core_model.hpp"
#include "semipb/semipullback.hpp"

namespace semipb::io {

struct LegRef {
  std::string object;
  std::string morphism;
};

struct CospanRef {
  std::string apex;
  LegRef leg1;
  LegRef leg2;

  friend bool operator==(const CospanRef&, const CospanRef&) = default;
};

/// In-memory form of a model file. Kernels, LMPs and morphisms refer to
/// spaces by name; every referenced space is present in `spaces`.
struct Model {
  std::map<std::string, FinSpace> spaces;
  std::map<std::string, Kernel> kernels;
  std::map<std::string, Lmp> lmps;
  std::map<std::string, Morphism> morphisms;
  std::map<std::string, CospanRef> cospans;
  nlohmann::json certificates;  // carried through untouched; null when absent

  void add_space(const FinSpace& space);
  void add_kernel(const std::string& name, const Kernel& kernel);
  void add_lmp(const std::string& name, const Lmp& lmp);
  void add_morphism(const std::string& name, const Morphism& morphism);
};

/// Throws Error(Parse) with line and column for malformed JSON and
/// Error(Schema) for structural problems or unresolved references.
Model parse_model(std::string_view text);
Model load_model(const std::filesystem::path& path);

nlohmann::json to_json(const Model& model);
/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string serialize_model(const Model& model);

/// Resolves a named cospan whose objects are kernels. Throws Error(Schema).
KernelCospan kernel_cospan(const Model& model, const std::string& name);
/// Resolves a named cospan whose objects are LMPs. Throws Error(Schema).
LmpCospan lmp_cospan(const Model& model, const std::string& name);

nlohmann::json certificate_json(const SemipullbackResult& result);

/// Model holding the vertex, the pullback space and both projections.
Model result_model(const SemipullbackResult& result, const std::string& vertex_name);

Model quotient_model(const Lmp& lmp, const std::string& lmp_name, const Quotient& quotient);

}  // namespace semipb::io
