#include "semipb/extension.hpp"

#include <cstdint>

#include "semipb/error.hpp"

namespace semipb {

namespace {

constexpr std::size_t kMaxEnumeratedAtoms = 30;

void require_subalgebras(const FinAddMeasure& nu1, const FinAddMeasure& nu2, const SetAlgebra& ambient) {
  if (!nu1.algebra().is_subalgebra_of(ambient)) throw Error(ErrorCode::NotSubalgebra, "first algebra is not inside the ambient algebra");
  if (!nu2.algebra().is_subalgebra_of(ambient)) throw Error(ErrorCode::NotSubalgebra, "second algebra is not inside the ambient algebra");
}

Subset selection_from_mask(std::uint64_t mask, std::size_t atoms) {
  Subset s(atoms);
  for (std::size_t a = 0; a < atoms; ++a) {
    if (mask >> a & 1U) s.set(a);
  }
  return s;
}

std::uint64_t enumeration_limit(const SetAlgebra& algebra) {
  if (algebra.atom_count() > kMaxEnumeratedAtoms) {
    throw Error(ErrorCode::InvalidArgument, "algebra too large to enumerate (" +
                                                std::to_string(algebra.atom_count()) + " atoms)");
  }
  return std::uint64_t{1} << algebra.atom_count();
}

Rational selected_mass(const FinAddMeasure& nu, const Subset& selection) {
  Rational total = 0;
  for (auto a = selection.find_first(); a != Subset::npos; a = selection.find_next(a)) total += nu.atom_mass()[a];
  return total;
}

}  // namespace

StrassenResult strassen_condition(const FinAddMeasure& nu1, const FinAddMeasure& nu2, const SetAlgebra& ambient) {
  require_subalgebras(nu1, nu2, ambient);
  const auto& alg1 = nu1.algebra();
  const auto& alg2 = nu2.algebra();
  const std::uint64_t limit = enumeration_limit(alg1);
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    const Subset sel1 = selection_from_mask(mask, alg1.atom_count());
    const Subset a1 = alg1.element(sel1);
    Subset sel2(alg2.atom_count());
    for (std::size_t b = 0; b < alg2.atom_count(); ++b) {
      if (!alg2.atoms()[b].intersects(a1)) sel2.set(b);
    }
    Rational total = selected_mass(nu1, sel1) + selected_mass(nu2, sel2);
    if (total > 1) return {false, std::make_pair(a1, alg2.element(sel2)), std::move(total)};
  }
  return {};
}

StrassenResult strassen_condition_exhaustive(const FinAddMeasure& nu1, const FinAddMeasure& nu2,
                                             const SetAlgebra& ambient) {
  require_subalgebras(nu1, nu2, ambient);
  const auto& alg1 = nu1.algebra();
  const auto& alg2 = nu2.algebra();
  const std::uint64_t limit1 = enumeration_limit(alg1);
  const std::uint64_t limit2 = enumeration_limit(alg2);
  for (std::uint64_t m1 = 0; m1 < limit1; ++m1) {
    const Subset sel1 = selection_from_mask(m1, alg1.atom_count());
    const Subset a1 = alg1.element(sel1);
    const Rational mass1 = selected_mass(nu1, sel1);
    for (std::uint64_t m2 = 0; m2 < limit2; ++m2) {
      const Subset sel2 = selection_from_mask(m2, alg2.atom_count());
      const Subset a2 = alg2.element(sel2);
      if (a1.intersects(a2)) continue;
      Rational total = mass1 + selected_mass(nu2, sel2);
      if (total > 1) return {false, std::make_pair(a1, a2), std::move(total)};
    }
  }
  return {};
}

FinAddMeasure common_extension(const FinAddMeasure& nu1, const FinAddMeasure& nu2, const SetAlgebra& ambient) {
  require_subalgebras(nu1, nu2, ambient);
  if (nu1.total() != 1 || nu2.total() != 1) {
    throw Error(ErrorCode::NotNormalized, "common extension needs two probability measures");
  }
  const std::size_t n = ambient.atom_count();
  auto program = lp::LinearProgram::nonnegative(n);
  auto add_marginals = [&](const FinAddMeasure& nu) {
    const auto& alg = nu.algebra();
    for (std::size_t b = 0; b < alg.atom_count(); ++b) {
      RationalVector row(n);
      const Subset inside = ambient.atoms_in(alg.atoms()[b]);
      for (auto a = inside.find_first(); a != Subset::npos; a = inside.find_next(a)) row[a] = 1;
      program.add(std::move(row), lp::Relation::Equal, nu.atom_mass()[b]);
    }
  };
  add_marginals(nu1);
  add_marginals(nu2);
  program.objective.resize(n);
  for (std::size_t a = 0; a < n; ++a) program.objective[a] = static_cast<unsigned long>(a);

  auto solution = lp::solve(program);
  if (solution.status != lp::Status::Optimal) {
    throw Error(ErrorCode::Infeasible, "no finitely additive measure extends both marginals");
  }
  std::string why;
  if (!lp::satisfies(program, solution.values, &why)) {
    throw Error(ErrorCode::PipelineInfeasible, "solver returned an inexact extension: " + why);
  }
  return FinAddMeasure(ambient, std::move(solution.values));
}

HahnBanachResult hahn_banach_extend(const PositiveFunctional& psi, std::span<const SimpleFunction> v_basis) {
  if (!psi.contains_constants()) throw Error(ErrorCode::ConstantsMissing, "W must contain the constant functions");
  if (psi.at_one() != 1) throw Error(ErrorCode::NotNormalized, "Psi(1) = " + to_string(psi.at_one()));
  if (!psi.is_positive()) throw Error(ErrorCode::NotPositive, "Psi is negative somewhere on W+");

  const FinSpace& ground = psi.ground();
  LinearSpan target(ground.size());
  for (const auto& f : v_basis) {
    if (!(f.ground() == ground)) throw Error(ErrorCode::SpaceMismatch, "V basis element on a different ground");
    target.add(f.values(), 0);
  }
  for (const auto& w : psi.basis()) {
    if (!target.contains(w.values())) throw Error(ErrorCode::InvalidArgument, "W is not contained in V");
  }

  LinearSpan current = psi.span();
  std::vector<ExtensionStep> steps;
  RationalVector values;
  steps.reserve(v_basis.size());
  values.reserve(v_basis.size());

  for (std::size_t i = 0; i < v_basis.size(); ++i) {
    const auto& f0 = v_basis[i];
    if (auto known = current.evaluate(f0.values())) {
      steps.push_back({i, false, *known});
      values.push_back(std::move(*known));
      continue;
    }
    // Phi(f0) := inf { Phi(h) : h in U, h >= f0 } over coordinates of h in U.
    const auto& gens = current.generators();
    auto program = lp::LinearProgram::free(gens.size());
    for (std::size_t s = 0; s < ground.size(); ++s) {
      RationalVector row(gens.size());
      for (std::size_t k = 0; k < gens.size(); ++k) row[k] = gens[k].vector[s];
      program.add(std::move(row), lp::Relation::GreaterEqual, f0[s]);
    }
    program.objective.resize(gens.size());
    for (std::size_t k = 0; k < gens.size(); ++k) program.objective[k] = gens[k].value;

    auto solution = lp::solve(program);
    if (solution.status != lp::Status::Optimal) {
      throw Error(ErrorCode::NotPositive, std::string("majorant program is ") + lp::to_string(solution.status));
    }
    current.add(f0.values(), solution.objective_value);
    steps.push_back({i, true, solution.objective_value});
    values.push_back(std::move(solution.objective_value));
  }

  PositiveFunctional phi(ground, std::vector<SimpleFunction>(v_basis.begin(), v_basis.end()), std::move(values));
  if (phi.at_one() != 1) throw Error(ErrorCode::NotNormalized, "extension lost normalization");
  if (!phi.is_positive()) throw Error(ErrorCode::NotPositive, "extension is not positive on V+");
  return {std::move(phi), std::move(steps)};
}

RationalVector promote_to_sigma_additive(const FinAddMeasure& nu) {
  const auto& alg = nu.algebra();
  if (alg.atom_count() != alg.ground().size()) {
    throw Error(ErrorCode::InvalidArgument, "promotion needs the powerset algebra");
  }
  RationalVector row(alg.ground().size());
  for (std::size_t s = 0; s < row.size(); ++s) row[s] = nu.atom_mass()[alg.atom_of(s)];
  return row;
}

}  // namespace semipb
