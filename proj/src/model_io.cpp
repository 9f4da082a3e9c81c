#include "semipb/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "semipb/error.hpp"

namespace semipb::io {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Schema, where + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema(where, std::string("missing key '") + key + "'");
  return *it;
}

std::string string_member(const json& obj, const char* key, const std::string& where) {
  const json& v = member(obj, key, where);
  if (!v.is_string()) schema(where + "." + key, "expected a string");
  return v.get<std::string>();
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* allowed : keys) known = known || k == allowed;
    if (!known) schema(where, "unexpected key '" + k + "'");
  }
}

Rational rational_value(const json& v, const std::string& where) {
  if (!v.is_string()) schema(where, "rationals must be strings of the form \"p/q\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const Error& e) {
    schema(where, e.what());
  }
}

std::vector<RationalVector> matrix_value(const json& v, const std::string& where) {
  if (!v.is_array()) schema(where, "expected an array of rows");
  std::vector<RationalVector> rows;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& row = v[i];
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!row.is_array()) schema(at, "expected an array");
    RationalVector r;
    for (std::size_t j = 0; j < row.size(); ++j) r.push_back(rational_value(row[j], at + "[" + std::to_string(j) + "]"));
    rows.push_back(std::move(r));
  }
  return rows;
}

const FinSpace& space_ref(const Model& m, const std::string& name, const std::string& where) {
  const auto it = m.spaces.find(name);
  if (it == m.spaces.end()) schema(where, "unknown space '" + name + "'");
  return it->second;
}

KernelKind kind_value(const std::string& s, const std::string& where) {
  if (s == "probability") return KernelKind::Probability;
  if (s == "subprobability") return KernelKind::Subprobability;
  schema(where, "kind must be \"probability\" or \"subprobability\"");
}

// Runs a constructor, turning argument errors into schema errors at `where`.
template <class F>
auto build(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw;
    schema(where, e.what());
  }
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json matrix_json(const std::vector<RationalVector>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json r = json::array();
    for (const auto& q : row) r.push_back(to_string(q));
    out.push_back(std::move(r));
  }
  return out;
}

json vector_json(const RationalVector& row) {
  json out = json::array();
  for (const auto& q : row) out.push_back(to_string(q));
  return out;
}

json measure_json(const FinAddMeasure& nu) {
  json atoms = json::array();
  const auto& alg = nu.algebra();
  for (const auto& atom : alg.atoms()) {
    json ids = json::array();
    for (auto s = atom.find_first(); s != Subset::npos; s = atom.find_next(s)) ids.push_back(alg.ground().state(s));
    atoms.push_back(std::move(ids));
  }
  return json{{"atoms", std::move(atoms)}, {"mass", vector_json(nu.atom_mass())}};
}

}  // namespace

void Model::add_space(const FinSpace& space) {
  const auto [it, inserted] = spaces.emplace(space.name(), space);
  if (!inserted && !(it->second == space)) {
    throw Error(ErrorCode::InvalidArgument, "two different spaces are named '" + space.name() + "'");
  }
}

void Model::add_kernel(const std::string& name, const Kernel& kernel) {
  add_space(kernel.source());
  add_space(kernel.target());
  kernels.insert_or_assign(name, kernel);
}

void Model::add_lmp(const std::string& name, const Lmp& lmp) {
  add_space(lmp.space());
  lmps.insert_or_assign(name, lmp);
}

void Model::add_morphism(const std::string& name, const Morphism& morphism) {
  add_space(morphism.domain());
  add_space(morphism.codomain());
  morphisms.insert_or_assign(name, morphism);
}

Model parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what());
  }
  if (!doc.is_object()) schema("document", "expected an object");
  only_keys(doc, {"spaces", "lmps", "kernels", "morphisms", "cospans", "certificates"}, "document");

  Model m;
  if (doc.contains("spaces")) {
    const auto& spaces = doc["spaces"];
    if (!spaces.is_object()) schema("spaces", "expected an object");
    for (const auto& [name, states] : spaces.items()) {
      const std::string where = "spaces." + name;
      if (!states.is_array()) schema(where, "expected an array of state ids");
      std::vector<StateId> ids;
      for (const auto& s : states) {
        if (!s.is_string()) schema(where, "state ids must be strings");
        ids.push_back(s.get<std::string>());
      }
      m.spaces.emplace(name, build(where, [&] { return FinSpace(name, std::move(ids)); }));
    }
  }

  if (doc.contains("kernels")) {
    const auto& kernels = doc["kernels"];
    if (!kernels.is_object()) schema("kernels", "expected an object");
    for (const auto& [name, k] : kernels.items()) {
      const std::string where = "kernels." + name;
      only_keys(k, {"source", "target", "kind", "rows"}, where);
      const FinSpace& source = space_ref(m, string_member(k, "source", where), where + ".source");
      const FinSpace& target = space_ref(m, string_member(k, "target", where), where + ".target");
      const KernelKind kind = kind_value(string_member(k, "kind", where), where + ".kind");
      auto rows = matrix_value(member(k, "rows", where), where + ".rows");
      m.kernels.emplace(name, build(where, [&] { return Kernel(source, target, std::move(rows), kind); }));
    }
  }

  if (doc.contains("lmps")) {
    const auto& lmps = doc["lmps"];
    if (!lmps.is_object()) schema("lmps", "expected an object");
    for (const auto& [name, l] : lmps.items()) {
      const std::string where = "lmps." + name;
      only_keys(l, {"space", "labels", "kernels"}, where);
      const FinSpace& space = space_ref(m, string_member(l, "space", where), where + ".space");
      const json& labels_json = member(l, "labels", where);
      if (!labels_json.is_array()) schema(where + ".labels", "expected an array");
      const json& kernels_json = member(l, "kernels", where);
      if (!kernels_json.is_object()) schema(where + ".kernels", "expected an object");
      std::vector<std::string> labels;
      std::vector<Kernel> kernels;
      for (const auto& label : labels_json) {
        if (!label.is_string()) schema(where + ".labels", "labels must be strings");
        const std::string a = label.get<std::string>();
        const std::string at = where + ".kernels." + a;
        if (!kernels_json.contains(a)) schema(at, "missing kernel for label");
        auto rows = matrix_value(kernels_json[a], at);
        kernels.push_back(build(at, [&] { return Kernel(space, space, std::move(rows), KernelKind::Subprobability); }));
        labels.push_back(a);
      }
      if (kernels_json.size() != labels.size()) schema(where + ".kernels", "kernel given for an undeclared label");
      m.lmps.emplace(name, build(where, [&] { return Lmp(space, std::move(labels), std::move(kernels)); }));
    }
  }

  if (doc.contains("morphisms")) {
    const auto& morphisms = doc["morphisms"];
    if (!morphisms.is_object()) schema("morphisms", "expected an object");
    for (const auto& [name, h] : morphisms.items()) {
      const std::string where = "morphisms." + name;
      only_keys(h, {"domain", "codomain", "map"}, where);
      const FinSpace& domain = space_ref(m, string_member(h, "domain", where), where + ".domain");
      const FinSpace& codomain = space_ref(m, string_member(h, "codomain", where), where + ".codomain");
      const json& map_json = member(h, "map", where);
      if (!map_json.is_object()) schema(where + ".map", "expected an object from state id to state id");
      std::map<StateId, StateId> map;
      for (const auto& [from, to] : map_json.items()) {
        if (!to.is_string()) schema(where + ".map." + from, "expected a state id");
        map.emplace(from, to.get<std::string>());
      }
      m.morphisms.emplace(name, build(where, [&] { return Morphism::from_ids(domain, codomain, map); }));
    }
  }

  if (doc.contains("cospans")) {
    const auto& cospans = doc["cospans"];
    if (!cospans.is_object()) schema("cospans", "expected an object");
    for (const auto& [name, c] : cospans.items()) {
      const std::string where = "cospans." + name;
      only_keys(c, {"apex", "leg1", "leg2"}, where);
      CospanRef ref;
      ref.apex = string_member(c, "apex", where);
      for (auto [key, leg] : {std::pair{"leg1", &ref.leg1}, std::pair{"leg2", &ref.leg2}}) {
        const json& l = member(c, key, where);
        only_keys(l, {"object", "morphism"}, where + "." + key);
        leg->object = string_member(l, "object", where + "." + key);
        leg->morphism = string_member(l, "morphism", where + "." + key);
        if (!m.morphisms.count(leg->morphism)) schema(where + "." + key, "unknown morphism '" + leg->morphism + "'");
      }
      const bool kernel_mode = m.kernels.count(ref.apex) > 0;
      const bool lmp_mode = m.lmps.count(ref.apex) > 0;
      if (!kernel_mode && !lmp_mode) schema(where + ".apex", "unknown kernel or LMP '" + ref.apex + "'");
      for (const auto* leg : {&ref.leg1, &ref.leg2}) {
        const bool found = kernel_mode ? m.kernels.count(leg->object) > 0 : m.lmps.count(leg->object) > 0;
        if (!found) schema(where, "leg object '" + leg->object + "' is not a " + (kernel_mode ? "kernel" : "LMP"));
      }
      m.cospans.emplace(name, std::move(ref));
    }
  }

  if (doc.contains("certificates")) m.certificates = doc["certificates"];
  return m;
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

json to_json(const Model& m) {
  json doc = json::object();
  if (!m.spaces.empty()) {
    json spaces = json::object();
    for (const auto& [name, space] : m.spaces) spaces[name] = space.states();
    doc["spaces"] = std::move(spaces);
  }
  if (!m.kernels.empty()) {
    json kernels = json::object();
    for (const auto& [name, k] : m.kernels) {
      kernels[name] = {{"source", k.source().name()},
                       {"target", k.target().name()},
                       {"kind", to_string(k.kind())},
                       {"rows", matrix_json(k.rows())}};
    }
    doc["kernels"] = std::move(kernels);
  }
  if (!m.lmps.empty()) {
    json lmps = json::object();
    for (const auto& [name, l] : m.lmps) {
      json kernels = json::object();
      for (std::size_t a = 0; a < l.labels().size(); ++a) kernels[l.labels()[a]] = matrix_json(l.kernel(a).rows());
      lmps[name] = {{"space", l.space().name()}, {"labels", l.labels()}, {"kernels", std::move(kernels)}};
    }
    doc["lmps"] = std::move(lmps);
  }
  if (!m.morphisms.empty()) {
    json morphisms = json::object();
    for (const auto& [name, h] : m.morphisms) {
      json map = json::object();
      for (std::size_t s = 0; s < h.domain().size(); ++s) map[h.domain().state(s)] = h.codomain().state(h(s));
      morphisms[name] = {{"domain", h.domain().name()}, {"codomain", h.codomain().name()}, {"map", std::move(map)}};
    }
    doc["morphisms"] = std::move(morphisms);
  }
  if (!m.cospans.empty()) {
    json cospans = json::object();
    for (const auto& [name, c] : m.cospans) {
      cospans[name] = {{"apex", c.apex},
                       {"leg1", {{"object", c.leg1.object}, {"morphism", c.leg1.morphism}}},
                       {"leg2", {{"object", c.leg2.object}, {"morphism", c.leg2.morphism}}}};
    }
    doc["cospans"] = std::move(cospans);
  }
  if (!m.certificates.is_null()) doc["certificates"] = m.certificates;
  return doc;
}

std::string serialize_model(const Model& model) { return to_json(model).dump(2) + "\n"; }

namespace {

const CospanRef& cospan_ref(const Model& m, const std::string& name) {
  const auto it = m.cospans.find(name);
  if (it == m.cospans.end()) schema("cospans", "unknown cospan '" + name + "'");
  return it->second;
}

template <class T>
const T& lookup(const std::map<std::string, T>& table, const std::string& name, const char* what) {
  const auto it = table.find(name);
  if (it == table.end()) schema(what, "unknown entry '" + name + "'");
  return it->second;
}

}  // namespace

KernelCospan kernel_cospan(const Model& m, const std::string& name) {
  const CospanRef& ref = cospan_ref(m, name);
  return KernelCospan{lookup(m.kernels, ref.apex, "kernels"), lookup(m.kernels, ref.leg1.object, "kernels"),
                      lookup(m.kernels, ref.leg2.object, "kernels"), lookup(m.morphisms, ref.leg1.morphism, "morphisms"),
                      lookup(m.morphisms, ref.leg2.morphism, "morphisms")};
}

LmpCospan lmp_cospan(const Model& m, const std::string& name) {
  const CospanRef& ref = cospan_ref(m, name);
  return LmpCospan{lookup(m.lmps, ref.apex, "lmps"), lookup(m.lmps, ref.leg1.object, "lmps"),
                   lookup(m.lmps, ref.leg2.object, "lmps"), lookup(m.morphisms, ref.leg1.morphism, "morphisms"),
                   lookup(m.morphisms, ref.leg2.morphism, "morphisms")};
}

json certificate_json(const SemipullbackResult& result) {
  json out = json::array();
  for (const auto& c : result.certificates) {
    json steps = json::array();
    for (const auto& s : c.extension) {
      steps.push_back({{"basis_index", s.basis_index}, {"extended", s.extended}, {"value", to_string(s.value)}});
    }
    json entry = {{"x", c.index_state},
                  {"nu1", measure_json(c.nu1)},
                  {"nu2", measure_json(c.nu2)},
                  {"common_extension", measure_json(c.common)},
                  {"extension_steps", std::move(steps)},
                  {"phi", vector_json(c.phi)},
                  {"nu3", measure_json(c.nu3)},
                  {"strassen", {{"direct", c.strassen_direct}, {"via_images", c.strassen_via_images}}},
                  {"product_mass", matrix_json(c.product_mass)},
                  {"null_rectangles", c.null_rectangles},
                  {"rectangles_cover_complement", c.rectangles_cover_complement}};
    if (!c.label.empty()) entry["label"] = c.label;
    out.push_back(std::move(entry));
  }
  return out;
}

Model result_model(const SemipullbackResult& result, const std::string& vertex_name) {
  Model m;
  if (std::holds_alternative<Kernel>(result.vertex)) {
    m.add_kernel(vertex_name, result.kernel());
  } else {
    m.add_lmp(vertex_name, result.lmp());
  }
  m.add_morphism("k1", result.pullback.k1);
  m.add_morphism("k2", result.pullback.k2);
  m.certificates = certificate_json(result);
  return m;
}

Model quotient_model(const Lmp& lmp, const std::string& lmp_name, const Quotient& quotient) {
  Model m;
  m.add_lmp(lmp_name, lmp);
  m.add_lmp(quotient.lmp.space().name(), quotient.lmp);
  m.add_morphism("q", quotient.map);
  return m;
}

}  // namespace semipb::io
