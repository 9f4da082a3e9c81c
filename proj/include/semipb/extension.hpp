#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "semipb/lp.hpp"
#include "semipb/measure_algebra.hpp"

namespace semipb {

struct StrassenResult {
  bool holds = true;
  /// A disjoint pair (A1, A2) with nu1(A1) + nu2(A2) > 1, when one exists.
  std::optional<std::pair<Subset, Subset>> violation;
  Rational violating_sum;

  explicit operator bool() const noexcept { return holds; }
};

/// Checks nu1(A1) + nu2(A2) <= 1 over all disjoint A1 in the first algebra,
/// A2 in the second. For each A1 only the largest disjoint A2 (the union of
/// second-algebra atoms missing A1) is examined.
/// Throws Error(NotSubalgebra) if either algebra is not a subalgebra of `ambient`.
StrassenResult strassen_condition(const FinAddMeasure& nu1, const FinAddMeasure& nu2, const SetAlgebra& ambient);

/// Same condition by brute force over every pair of algebra elements.
StrassenResult strassen_condition_exhaustive(const FinAddMeasure& nu1, const FinAddMeasure& nu2,
                                             const SetAlgebra& ambient);

/// Finitely additive probability measure on `ambient` restricting to nu1 and
/// nu2. Among all such measures the solver returns the vertex minimizing
/// sum_i i * mass_i (atoms in canonical order), so the result is a fixed
/// function of the inputs.
///
/// Throws Error(Infeasible) when no common extension exists, Error(NotNormalized)
/// when either total mass differs from 1, and Error(NotSubalgebra).
FinAddMeasure common_extension(const FinAddMeasure& nu1, const FinAddMeasure& nu2, const SetAlgebra& ambient);

/// One step of the dimension-by-dimension extension.
struct ExtensionStep {
  std::size_t basis_index;  // position in the V basis
  bool extended;            // false: already in the span, value read off
  Rational value;
};

struct HahnBanachResult {
  PositiveFunctional functional;
  std::vector<ExtensionStep> steps;
};

/// Extends a positive, normalized functional on W to span(v_basis).
///
/// Elements of v_basis are processed in the given order. An element f0 not
/// yet in the current span U receives inf { Phi(h) : h in U, h >= f0 }, an
/// exact linear program. Throws Error(ConstantsMissing), Error(NotNormalized),
/// Error(NotPositive) for bad input and Error(InvalidArgument) when W is not
/// contained in span(v_basis).
HahnBanachResult hahn_banach_extend(const PositiveFunctional& psi, std::span<const SimpleFunction> v_basis);

/// Re-types a measure on the powerset algebra as a kernel row; on a finite
/// space finite additivity is already countable additivity.
/// Throws Error(InvalidArgument) if the algebra's atoms are not singletons.
RationalVector promote_to_sigma_additive(const FinAddMeasure& nu);

}  // namespace semipb
