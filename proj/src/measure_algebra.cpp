#include "semipb/measure_algebra.hpp"

#include <algorithm>
#include <map>

#include "semipb/error.hpp"
#include "semipb/lp.hpp"

namespace semipb {

SetAlgebra::SetAlgebra(FinSpace ground, std::vector<Subset> blocks) : ground_(std::move(ground)) {
  const std::size_t n = ground_.size();
  Subset covered(n);
  for (const auto& b : blocks) {
    if (b.size() != n) throw Error(ErrorCode::InvalidArgument, "atom is not a subset of the ground set");
    if (b.none()) throw Error(ErrorCode::InvalidArgument, "empty atom");
    if (covered.intersects(b)) throw Error(ErrorCode::InvalidArgument, "atoms overlap");
    covered |= b;
  }
  if (!covered.all()) throw Error(ErrorCode::InvalidArgument, "atoms do not cover the ground set");
  std::sort(blocks.begin(), blocks.end(),
            [](const Subset& a, const Subset& b) { return a.find_first() < b.find_first(); });
  atoms_ = std::move(blocks);
  atom_of_.resize(n);
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    for (auto s = atoms_[a].find_first(); s != Subset::npos; s = atoms_[a].find_next(s)) atom_of_[s] = a;
  }
}

SetAlgebra SetAlgebra::powerset(const FinSpace& ground) {
  std::vector<Subset> blocks;
  for (std::size_t i = 0; i < ground.size(); ++i) blocks.push_back(ground.singleton(i));
  return SetAlgebra(ground, std::move(blocks));
}

SetAlgebra SetAlgebra::trivial(const FinSpace& ground) { return SetAlgebra(ground, {ground.full_set()}); }

bool SetAlgebra::contains(const Subset& subset) const {
  for (const auto& atom : atoms_) {
    if (atom.intersects(subset) && !atom.is_subset_of(subset)) return false;
  }
  return true;
}

Subset SetAlgebra::element(const Subset& selection) const {
  Subset out = ground_.empty_set();
  for (auto a = selection.find_first(); a != Subset::npos; a = selection.find_next(a)) out |= atoms_.at(a);
  return out;
}

Subset SetAlgebra::atoms_in(const Subset& subset) const {
  Subset selection(atoms_.size());
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    if (!atoms_[a].intersects(subset)) continue;
    if (!atoms_[a].is_subset_of(subset)) {
      throw Error(ErrorCode::NotInAlgebra, describe(ground_, subset) + " splits atom " + describe(ground_, atoms_[a]));
    }
    selection.set(a);
  }
  return selection;
}

bool SetAlgebra::is_subalgebra_of(const SetAlgebra& ambient) const {
  if (!(ground_ == ambient.ground_)) return false;
  return std::all_of(atoms_.begin(), atoms_.end(), [&](const Subset& atom) { return ambient.contains(atom); });
}

FinAddMeasure::FinAddMeasure(SetAlgebra algebra, RationalVector atom_mass)
    : algebra_(std::move(algebra)), atom_mass_(std::move(atom_mass)) {
  canonicalize(atom_mass_);
  if (atom_mass_.size() != algebra_.atom_count()) {
    throw Error(ErrorCode::InvalidArgument, "one mass per atom required");
  }
  for (const auto& m : atom_mass_) {
    if (m < 0) throw Error(ErrorCode::InvalidArgument, "negative atom mass " + to_string(m));
  }
}

SimpleFunction::SimpleFunction(FinSpace ground, RationalVector values)
    : ground_(std::move(ground)), values_(std::move(values)) {
  canonicalize(values_);
  if (values_.size() != ground_.size()) throw Error(ErrorCode::InvalidArgument, "one value per state required");
}

SimpleFunction SimpleFunction::constant(const FinSpace& ground, const Rational& c) {
  return SimpleFunction(ground, RationalVector(ground.size(), c));
}

SimpleFunction SimpleFunction::indicator(const FinSpace& ground, const Subset& subset) {
  RationalVector v(ground.size());
  for (auto i = subset.find_first(); i != Subset::npos; i = subset.find_next(i)) v[i] = 1;
  return SimpleFunction(ground, std::move(v));
}

bool SimpleFunction::is_measurable(const SetAlgebra& algebra) const {
  if (!(algebra.ground() == ground_)) return false;
  for (std::size_t s = 0; s < values_.size(); ++s) {
    const auto first = algebra.atoms()[algebra.atom_of(s)].find_first();
    if (values_[s] != values_[first]) return false;
  }
  return true;
}

bool SimpleFunction::dominates(const SimpleFunction& other) const {
  for (std::size_t s = 0; s < values_.size(); ++s) {
    if (values_[s] < other.values_.at(s)) return false;
  }
  return true;
}

namespace {

void require_same_ground(const SimpleFunction& f, const SimpleFunction& g) {
  if (!(f.ground() == g.ground())) throw Error(ErrorCode::SpaceMismatch, "functions live on different grounds");
}

}  // namespace

SimpleFunction operator+(const SimpleFunction& f, const SimpleFunction& g) {
  require_same_ground(f, g);
  RationalVector v(f.values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.values_[i] + g.values_[i];
  return SimpleFunction(f.ground_, std::move(v));
}

SimpleFunction operator-(const SimpleFunction& f, const SimpleFunction& g) {
  require_same_ground(f, g);
  RationalVector v(f.values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.values_[i] - g.values_[i];
  return SimpleFunction(f.ground_, std::move(v));
}

SimpleFunction operator*(const Rational& c, const SimpleFunction& f) {
  RationalVector v(f.values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * f.values_[i];
  return SimpleFunction(f.ground_, std::move(v));
}

LinearSpan::Reduced LinearSpan::reduce(const RationalVector& v, const Rational& value) const {
  if (v.size() != dimension_) throw Error(ErrorCode::InvalidArgument, "vector has the wrong dimension");
  Reduced out{v, value};
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Rational c = out.residual[pivots_[i]];
    if (c == 0) continue;
    const auto& row = rows_[i].vector;
    for (std::size_t k = 0; k < dimension_; ++k) {
      if (row[k] != 0) out.residual[k] -= c * row[k];
    }
    out.value -= c * rows_[i].value;
  }
  return out;
}

LinearSpan::AddResult LinearSpan::add(const RationalVector& v, const Rational& value) {
  Reduced r = reduce(v, value);
  const auto lead = std::find_if(r.residual.begin(), r.residual.end(), [](const Rational& q) { return q != 0; });
  if (lead == r.residual.end()) return r.value == 0 ? AddResult::Consistent : AddResult::Inconsistent;

  const auto pivot = static_cast<std::size_t>(lead - r.residual.begin());
  const Rational inv = 1 / r.residual[pivot];
  for (auto& q : r.residual) q *= inv;
  r.value *= inv;
  for (auto& row : rows_) {
    const Rational c = row.vector[pivot];
    if (c == 0) continue;
    for (std::size_t k = 0; k < dimension_; ++k) {
      if (r.residual[k] != 0) row.vector[k] -= c * r.residual[k];
    }
    row.value -= c * r.value;
  }
  rows_.push_back({std::move(r.residual), std::move(r.value)});
  pivots_.push_back(pivot);
  return AddResult::Added;
}

bool LinearSpan::contains(const RationalVector& v) const {
  const Reduced r = reduce(v, 0);
  return std::all_of(r.residual.begin(), r.residual.end(), [](const Rational& q) { return q == 0; });
}

std::optional<Rational> LinearSpan::evaluate(const RationalVector& v) const {
  Reduced r = reduce(v, 0);
  if (!std::all_of(r.residual.begin(), r.residual.end(), [](const Rational& q) { return q == 0; })) {
    return std::nullopt;
  }
  return -r.value;
}

PositiveFunctional::PositiveFunctional(FinSpace ground, std::vector<SimpleFunction> basis, RationalVector values)
    : ground_(std::move(ground)), basis_(std::move(basis)), values_(std::move(values)), span_(ground_.size()) {
  canonicalize(values_);
  if (basis_.size() != values_.size()) throw Error(ErrorCode::InvalidArgument, "one value per basis element required");
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (!(basis_[i].ground() == ground_)) throw Error(ErrorCode::SpaceMismatch, "basis element on a different ground");
    if (span_.add(basis_[i].values(), values_[i]) == LinearSpan::AddResult::Inconsistent) {
      throw Error(ErrorCode::InvalidArgument,
                  "functional values are inconsistent on basis element " + std::to_string(i));
    }
  }
}

Rational PositiveFunctional::operator()(const SimpleFunction& f) const {
  auto v = span_.evaluate(f.values());
  if (!v) throw Error(ErrorCode::InvalidArgument, "function is outside the functional's domain");
  return *v;
}

bool PositiveFunctional::contains_constants() const { return span_.contains(RationalVector(ground_.size(), 1)); }

Rational PositiveFunctional::at_one() const {
  auto v = span_.evaluate(RationalVector(ground_.size(), 1));
  if (!v) throw Error(ErrorCode::ConstantsMissing, "constants are not in the functional's domain");
  return *v;
}

bool PositiveFunctional::is_positive() const {
  // The domain is a cone-closed subspace, so inf { Phi(w) : w >= 0 } is 0 or
  // -infinity. Ask for a nonnegative w with Phi(w) = -1.
  const auto& gens = span_.generators();
  if (gens.empty()) return true;
  auto program = lp::LinearProgram::free(gens.size());
  for (std::size_t s = 0; s < ground_.size(); ++s) {
    RationalVector row(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) row[i] = gens[i].vector[s];
    program.add(std::move(row), lp::Relation::GreaterEqual, 0);
  }
  RationalVector value_row(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) value_row[i] = gens[i].value;
  program.add(std::move(value_row), lp::Relation::Equal, -1);
  return lp::solve(program).status == lp::Status::Infeasible;
}

SetAlgebra generated_algebra(const FinSpace& ground, std::span<const Subset> generators) {
  // Two states share a cell iff every generator contains both or neither.
  std::vector<std::vector<bool>> signature(ground.size(), std::vector<bool>(generators.size()));
  for (std::size_t g = 0; g < generators.size(); ++g) {
    if (generators[g].size() != ground.size()) throw Error(ErrorCode::InvalidArgument, "generator is not a subset of the ground set");
    for (std::size_t s = 0; s < ground.size(); ++s) signature[s][g] = generators[g].test(s);
  }
  std::vector<Subset> blocks;
  std::map<std::vector<bool>, std::size_t> block_of;
  for (std::size_t s = 0; s < ground.size(); ++s) {
    auto [it, inserted] = block_of.emplace(signature[s], blocks.size());
    if (inserted) blocks.push_back(ground.empty_set());
    blocks[it->second].set(s);
  }
  return SetAlgebra(ground, std::move(blocks));
}

SetAlgebra preimage_algebra(const Morphism& h, const SetAlgebra& codomain_algebra) {
  if (!(codomain_algebra.ground() == h.codomain())) {
    throw Error(ErrorCode::SpaceMismatch, "algebra is not on the morphism's codomain");
  }
  std::vector<Subset> blocks;
  for (const auto& atom : codomain_algebra.atoms()) {
    Subset pre = h.preimage(atom);
    if (pre.any()) blocks.push_back(std::move(pre));
  }
  return SetAlgebra(h.domain(), std::move(blocks));
}

Rational eval_measure(const FinAddMeasure& nu, const Subset& subset) {
  const Subset selection = nu.algebra().atoms_in(subset);
  Rational total = 0;
  for (auto a = selection.find_first(); a != Subset::npos; a = selection.find_next(a)) total += nu.atom_mass()[a];
  return total;
}

Rational integral(const FinAddMeasure& nu, const SimpleFunction& f) {
  const auto& algebra = nu.algebra();
  if (!f.is_measurable(algebra)) throw Error(ErrorCode::NotMeasurable, "function is not constant on every atom");
  Rational total = 0;
  for (std::size_t a = 0; a < algebra.atom_count(); ++a) {
    total += f[algebra.atoms()[a].find_first()] * nu.atom_mass()[a];
  }
  return total;
}

}  // namespace semipb
