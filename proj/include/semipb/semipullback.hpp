#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "semipb/core_model.hpp"
#include "semipb/extension.hpp"
#include "semipb/measure_algebra.hpp"

namespace semipb {

/// left --h1--> apex <--h2-- right, all kernels sharing one index space.
struct KernelCospan {
  Kernel apex;
  Kernel left;
  Kernel right;
  Morphism h1;
  Morphism h2;
};

struct LmpCospan {
  Lmp apex;
  Lmp left;
  Lmp right;
  Morphism h1;
  Morphism h2;
};

/// { (s1, s2) : h1(s1) = h2(s2) } with its coordinate projections.
struct SetPullback {
  FinSpace space;
  Morphism k1;
  Morphism k2;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Id of the state (s1, s2) of a pullback space.
StateId pair_id(const StateId& s1, const StateId& s2);

/// Pairs in lexicographic (S1, S2) order. Throws Error(NotSurjective) if a leg
/// is not onto the shared codomain, Error(SpaceMismatch) if the codomains differ.
SetPullback set_pullback(const Morphism& h1, const Morphism& h2, const std::string& name = "S3");

/// Audit trail of the construction at one index state x (and label, in LMP mode).
struct PointCertificate {
  std::string label;
  StateId index_state;
  FinAddMeasure nu1;     // on the preimage algebra of S1's singletons
  FinAddMeasure nu2;     // on the preimage algebra of S2's singletons
  FinAddMeasure common;  // common extension on the generated algebra
  std::vector<ExtensionStep> extension;
  RationalVector phi;    // extended functional on the V basis
  FinAddMeasure nu3;     // nu3(A) = Phi(indicator of A)
  bool strassen_direct = false;
  bool strassen_via_images = false;
  std::vector<RationalVector> product_mass;  // extended measure on S1 x S2
  std::size_t null_rectangles = 0;
  bool rectangles_cover_complement = false;
};

struct SemipullbackResult {
  SetPullback pullback;
  std::variant<Kernel, Lmp> vertex;
  std::vector<PointCertificate> certificates;

  const Kernel& kernel() const { return std::get<Kernel>(vertex); }
  const Lmp& lmp() const { return std::get<Lmp>(vertex); }
};

/// D = h(A) for a measure-preserving h, with mu0(D) >= mu(A) asserted.
/// Throws Error(NotMeasurePreserving) if the rows are not related by h.
Subset image_minorant(const Morphism& h, const RationalVector& mu, const RationalVector& mu0, const Subset& subset);

/// The two-sided bound nu1(A1) + nu2(A2) <= mu0(D1) + mu0(D2) <= 1 derived
/// through image minorants, for every A1 and its largest disjoint A2.
bool strassen_via_images(const KernelCospan& cospan, std::size_t x);

/// Semipullback of a cospan of probability kernels.
/// Throws Error(NotMeasurePreserving) naming the witness for a bad leg,
/// Error(InvalidArgument) for non-probability rows, Error(SpaceMismatch),
/// and Error(PipelineInfeasible) if any internal step fails.
SemipullbackResult semipullback_prob_kernels(const KernelCospan& cospan);

struct Completion {
  Kernel kernel;
  std::optional<Morphism> morphism;
};

/// Reserved dead-state id for a space: "⊥dead" followed by the space name.
StateId dead_state_id(const FinSpace& space);
/// The space with its dead state appended. Throws Error(ReservedIdCollision).
FinSpace complete_space(const FinSpace& space);

/// Adds a dead state absorbing each row's mass deficit. The optional leg is
/// extended by sending the dead state to the codomain's dead state.
Completion one_point_completion(const Kernel& mu, const std::optional<Morphism>& h = std::nullopt);

/// Completes, constructs, and restricts back to the original pullback.
SemipullbackResult semipullback_subprob_kernels(const KernelCospan& cospan);

/// LMP semipullback: the pullback space indexes per-label kernel cospans.
/// Throws Error(LabelMismatch), Error(NotMeasurePreserving) for a leg that is
/// not a zigzag, plus anything the kernel pipeline throws.
SemipullbackResult semipullback_lmp(const LmpCospan& cospan);

/// Fiberwise product coupling mu1(s1) mu2(s2) / mu0(s0) on the pullback.
Kernel independent_coupling(const KernelCospan& cospan);

struct SemipullbackCheck {
  bool commutes = false;
  bool marginals = false;
  bool totals = false;
  std::vector<std::string> failures;

  bool ok() const noexcept { return commutes && marginals && totals; }
};

/// Re-verifies commutativity, that both projections are kernel morphisms,
/// and that every row of the vertex carries the apex row's total mass.
SemipullbackCheck check_semipullback(const KernelCospan& cospan, const SemipullbackResult& result);
/// Commutativity and zigzag property of both projections.
SemipullbackCheck check_semipullback(const LmpCospan& cospan, const SemipullbackResult& result);

}  // namespace semipb
