#include "semipb/core_model.hpp"

#include <algorithm>

#include "semipb/error.hpp"

namespace semipb {

FinSpace::FinSpace(std::string name, std::vector<StateId> states) {
  if (states.empty()) throw Error(ErrorCode::InvalidArgument, "space '" + name + "' has no states");
  Impl impl{std::move(name), std::move(states), {}};
  for (std::size_t i = 0; i < impl.states.size(); ++i) {
    const auto& id = impl.states[i];
    if (id.empty()) throw Error(ErrorCode::InvalidArgument, "space '" + impl.name + "' has an empty state id");
    if (!impl.index.emplace(id, i).second) {
      throw Error(ErrorCode::InvalidArgument, "space '" + impl.name + "' repeats state '" + id + "'");
    }
  }
  impl_ = std::make_shared<const Impl>(std::move(impl));
}

std::optional<std::size_t> FinSpace::find(const StateId& id) const {
  const auto it = impl_->index.find(id);
  if (it == impl_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t FinSpace::index_of(const StateId& id) const {
  if (auto i = find(id)) return *i;
  throw Error(ErrorCode::InvalidArgument, "state '" + id + "' not in space '" + name() + "'");
}

Subset FinSpace::singleton(std::size_t index) const {
  Subset s(size());
  s.set(index);
  return s;
}

std::string describe(const FinSpace& space, const Subset& subset) {
  std::string out = "{";
  bool first = true;
  for (auto i = subset.find_first(); i != Subset::npos; i = subset.find_next(i)) {
    if (!first) out += ",";
    out += space.state(i);
    first = false;
  }
  return out + "}";
}

const char* to_string(KernelKind kind) {
  return kind == KernelKind::Probability ? "probability" : "subprobability";
}

Kernel::Kernel(FinSpace source, FinSpace target, std::vector<RationalVector> rows, KernelKind kind)
    : source_(std::move(source)), target_(std::move(target)), rows_(std::move(rows)), kind_(kind) {
  for (auto& row : rows_) canonicalize(row);
  if (rows_.size() != source_.size()) {
    throw Error(ErrorCode::InvalidArgument, "kernel has " + std::to_string(rows_.size()) + " rows, source '" +
                                                source_.name() + "' has " + std::to_string(source_.size()) +
                                                " states");
  }
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    if (rows_[x].size() != target_.size()) {
      throw Error(ErrorCode::InvalidArgument, "kernel row '" + source_.state(x) + "' has " +
                                                  std::to_string(rows_[x].size()) + " entries, target '" +
                                                  target_.name() + "' has " + std::to_string(target_.size()));
    }
  }
}

Rational Kernel::mass(std::size_t x, const Subset& subset) const {
  const auto& r = rows_.at(x);
  Rational total = 0;
  for (auto i = subset.find_first(); i != Subset::npos; i = subset.find_next(i)) total += r[i];
  return total;
}

Lmp::Lmp(FinSpace space, std::vector<std::string> labels, std::vector<Kernel> kernels)
    : space_(std::move(space)), labels_(std::move(labels)), kernels_(std::move(kernels)) {
  if (labels_.size() != kernels_.size()) throw Error(ErrorCode::InvalidArgument, "one kernel per label required");
  for (std::size_t a = 0; a < labels_.size(); ++a) {
    if (std::find(labels_.begin(), labels_.begin() + a, labels_[a]) != labels_.begin() + a) {
      throw Error(ErrorCode::InvalidArgument, "duplicate label '" + labels_[a] + "'");
    }
    if (!(kernels_[a].source() == space_) || !(kernels_[a].target() == space_)) {
      throw Error(ErrorCode::SpaceMismatch, "kernel for label '" + labels_[a] + "' is not over the LMP space");
    }
  }
}

const Kernel& Lmp::kernel(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error(ErrorCode::LabelMismatch, "unknown label '" + label + "'");
  return kernels_[static_cast<std::size_t>(it - labels_.begin())];
}

Morphism::Morphism(FinSpace domain, FinSpace codomain, std::vector<std::size_t> map)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), map_(std::move(map)) {
  if (map_.size() != domain_.size()) throw Error(ErrorCode::InvalidArgument, "morphism map is not total");
  for (auto t : map_) {
    if (t >= codomain_.size()) throw Error(ErrorCode::InvalidArgument, "morphism maps outside its codomain");
  }
}

Morphism Morphism::from_ids(FinSpace domain, FinSpace codomain, const std::map<StateId, StateId>& map) {
  std::vector<std::size_t> indices(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const auto it = map.find(domain.state(i));
    if (it == map.end()) {
      throw Error(ErrorCode::InvalidArgument, "morphism has no image for state '" + domain.state(i) + "'");
    }
    indices[i] = codomain.index_of(it->second);
  }
  if (map.size() != domain.size()) throw Error(ErrorCode::InvalidArgument, "morphism maps states outside its domain");
  return Morphism(std::move(domain), std::move(codomain), std::move(indices));
}

Morphism Morphism::identity(const FinSpace& space) {
  std::vector<std::size_t> map(space.size());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = i;
  return Morphism(space, space, std::move(map));
}

Subset Morphism::image(const Subset& subset) const {
  Subset out = codomain_.empty_set();
  for (auto i = subset.find_first(); i != Subset::npos; i = subset.find_next(i)) out.set(map_[i]);
  return out;
}

Subset Morphism::preimage(const Subset& subset) const {
  Subset out = domain_.empty_set();
  for (std::size_t i = 0; i < map_.size(); ++i) {
    if (subset.test(map_[i])) out.set(i);
  }
  return out;
}

Subset Morphism::fiber(std::size_t target) const {
  Subset out = domain_.empty_set();
  for (std::size_t i = 0; i < map_.size(); ++i) {
    if (map_[i] == target) out.set(i);
  }
  return out;
}

std::optional<std::size_t> Morphism::first_unhit() const {
  Subset hit = codomain_.empty_set();
  for (auto t : map_) hit.set(t);
  hit.flip();
  const auto first = hit.find_first();
  if (first == Subset::npos) return std::nullopt;
  return first;
}

bool Morphism::is_surjective() const { return !first_unhit().has_value(); }

Morphism compose(const Morphism& after, const Morphism& first) {
  if (!(first.codomain() == after.domain())) {
    throw Error(ErrorCode::SpaceMismatch, "cannot compose: codomain and domain differ");
  }
  std::vector<std::size_t> map(first.domain().size());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = after(first(i));
  return Morphism(first.domain(), after.codomain(), std::move(map));
}

ValidationReport validate_kernel(const Kernel& kernel) {
  ValidationReport report;
  for (std::size_t x = 0; x < kernel.rows().size(); ++x) {
    const auto& row = kernel.row(x);
    const StateId& id = kernel.source().state(x);
    for (std::size_t s = 0; s < row.size(); ++s) {
      if (row[s] < 0 || row[s] > 1) {
        report.violations.push_back(
            {id, "entry " + kernel.target().state(s) + " = " + to_string(row[s]) + " outside [0,1]"});
      }
    }
    const Rational total = sum(row);
    if (total > 1) {
      report.violations.push_back({id, "row sum " + to_string(total) + " > 1"});
    } else if (kernel.kind() == KernelKind::Probability && total != 1) {
      report.violations.push_back({id, "row sum " + to_string(total) + " < 1"});
    }
  }
  return report;
}

ValidationReport validate_lmp(const Lmp& lmp) {
  ValidationReport report;
  for (std::size_t a = 0; a < lmp.labels().size(); ++a) {
    for (auto& v : validate_kernel(lmp.kernel(a)).violations) {
      v.message = "label " + lmp.labels()[a] + ": " + v.message;
      report.violations.push_back(std::move(v));
    }
  }
  return report;
}

std::string CounterexampleWitness::describe() const {
  if (kind == Kind::NotSurjective) return "state " + target + " is not in the image";
  std::string out = "(";
  if (!label.empty()) out += label + ", ";
  out += state + ", {" + target + "}): preimage mass " + to_string(preimage_mass) + " != " + to_string(target_mass);
  return out;
}

namespace {

std::optional<CounterexampleWitness> check_preservation(const Morphism& h, const Kernel& mu1, const Kernel& mu2,
                                                        const std::string& label, bool source_is_domain) {
  for (std::size_t x = 0; x < mu1.source().size(); ++x) {
    // For zigzags the row of mu2 is taken at h(x); for kernel morphisms at x.
    const std::size_t x2 = source_is_domain ? h(x) : x;
    RationalVector pushed(h.codomain().size());
    const auto& row = mu1.row(x);
    for (std::size_t s = 0; s < row.size(); ++s) pushed[h(s)] += row[s];
    for (std::size_t t = 0; t < pushed.size(); ++t) {
      if (pushed[t] != mu2.row(x2)[t]) {
        return CounterexampleWitness{CounterexampleWitness::Kind::MassMismatch,
                                     label,
                                     mu1.source().state(x),
                                     h.codomain().state(t),
                                     pushed[t],
                                     mu2.row(x2)[t]};
      }
    }
  }
  return std::nullopt;
}

std::optional<CounterexampleWitness> surjectivity_witness(const Morphism& h) {
  if (auto unhit = h.first_unhit()) {
    return CounterexampleWitness{CounterexampleWitness::Kind::NotSurjective, {}, {}, h.codomain().state(*unhit), 0, 0};
  }
  return std::nullopt;
}

}  // namespace

MorphismCheck is_kernel_morphism(const Morphism& h, const Kernel& mu1, const Kernel& mu2) {
  if (!(mu1.source() == mu2.source())) throw Error(ErrorCode::SpaceMismatch, "kernels have different index spaces");
  if (!(h.domain() == mu1.target())) throw Error(ErrorCode::SpaceMismatch, "morphism domain is not the source kernel's target");
  if (!(h.codomain() == mu2.target())) throw Error(ErrorCode::SpaceMismatch, "morphism codomain is not the apex kernel's target");
  if (auto w = surjectivity_witness(h)) return {false, std::move(w)};
  if (auto w = check_preservation(h, mu1, mu2, {}, false)) return {false, std::move(w)};
  return {};
}

MorphismCheck is_zigzag(const Morphism& f, const Lmp& s, const Lmp& s_prime) {
  if (s.labels() != s_prime.labels()) throw Error(ErrorCode::LabelMismatch, "LMPs have different label sets");
  if (!(f.domain() == s.space()) || !(f.codomain() == s_prime.space())) {
    throw Error(ErrorCode::SpaceMismatch, "morphism does not map between the LMP spaces");
  }
  if (auto w = surjectivity_witness(f)) return {false, std::move(w)};
  for (std::size_t a = 0; a < s.labels().size(); ++a) {
    if (auto w = check_preservation(f, s.kernel(a), s_prime.kernel(a), s.labels()[a], true)) return {false, std::move(w)};
  }
  return {};
}

}  // namespace semipb
