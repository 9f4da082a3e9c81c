#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semipb/rational.hpp"

namespace semipb {

using StateId = std::string;

/// Subset of a FinSpace, one bit per state in space order.
using Subset = boost::dynamic_bitset<>;

/// Finite measurable space with the powerset sigma-algebra.
///
/// Immutable; copies share the underlying state list. Two spaces compare
/// equal when their ordered state lists are equal (the name is a label only).
class FinSpace {
 public:
  FinSpace(std::string name, std::vector<StateId> states);

  const std::string& name() const noexcept { return impl_->name; }
  const std::vector<StateId>& states() const noexcept { return impl_->states; }
  std::size_t size() const noexcept { return impl_->states.size(); }
  const StateId& state(std::size_t index) const { return impl_->states.at(index); }

  std::optional<std::size_t> find(const StateId& id) const;
  /// Throws Error(InvalidArgument) for an unknown id.
  std::size_t index_of(const StateId& id) const;

  Subset empty_set() const { return Subset(size()); }
  Subset full_set() const { return Subset(size()).set(); }
  Subset singleton(std::size_t index) const;

  /// Same space under a different name.
  FinSpace renamed(std::string name) const { return FinSpace(std::move(name), states()); }

  friend bool operator==(const FinSpace& a, const FinSpace& b) {
    return a.impl_ == b.impl_ || a.impl_->states == b.impl_->states;
  }

 private:
  struct Impl {
    std::string name;
    std::vector<StateId> states;
    std::map<StateId, std::size_t> index;
  };
  std::shared_ptr<const Impl> impl_;
};

std::string describe(const FinSpace& space, const Subset& subset);

enum class KernelKind { Probability, Subprobability };

const char* to_string(KernelKind kind);

/// Source-indexed family of (sub)probability rows over a target space.
class Kernel {
 public:
  /// Checks only the shape; the measure constraints are reported by validate_kernel.
  Kernel(FinSpace source, FinSpace target, std::vector<RationalVector> rows, KernelKind kind);

  const FinSpace& source() const noexcept { return source_; }
  const FinSpace& target() const noexcept { return target_; }
  KernelKind kind() const noexcept { return kind_; }
  const std::vector<RationalVector>& rows() const noexcept { return rows_; }
  const RationalVector& row(std::size_t x) const { return rows_.at(x); }

  Rational mass(std::size_t x, const Subset& subset) const;
  Rational total(std::size_t x) const { return sum(rows_.at(x)); }

 private:
  FinSpace source_;
  FinSpace target_;
  std::vector<RationalVector> rows_;
  KernelKind kind_;
};

/// Labelled Markov process: one subprobability kernel from the space to itself per label.
class Lmp {
 public:
  Lmp(FinSpace space, std::vector<std::string> labels, std::vector<Kernel> kernels);

  const FinSpace& space() const noexcept { return space_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Kernel>& kernels() const noexcept { return kernels_; }
  const Kernel& kernel(std::size_t label) const { return kernels_.at(label); }
  const Kernel& kernel(const std::string& label) const;

 private:
  FinSpace space_;
  std::vector<std::string> labels_;
  std::vector<Kernel> kernels_;
};

/// Total map between two finite spaces. Surjectivity is checked by validators.
class Morphism {
 public:
  Morphism(FinSpace domain, FinSpace codomain, std::vector<std::size_t> map);

  static Morphism from_ids(FinSpace domain, FinSpace codomain, const std::map<StateId, StateId>& map);
  static Morphism identity(const FinSpace& space);

  const FinSpace& domain() const noexcept { return domain_; }
  const FinSpace& codomain() const noexcept { return codomain_; }
  const std::vector<std::size_t>& map() const noexcept { return map_; }
  std::size_t operator()(std::size_t state) const { return map_.at(state); }

  Subset image(const Subset& subset) const;
  Subset preimage(const Subset& subset) const;
  Subset fiber(std::size_t target) const;
  bool is_surjective() const;
  std::optional<std::size_t> first_unhit() const;

  /// Pointwise equality of maps between equal spaces.
  friend bool operator==(const Morphism& a, const Morphism& b) {
    return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.map_ == b.map_;
  }

 private:
  FinSpace domain_;
  FinSpace codomain_;
  std::vector<std::size_t> map_;
};

/// `after` composed with `first`: state -> after(first(state)).
Morphism compose(const Morphism& after, const Morphism& first);

struct Violation {
  StateId row;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_kernel(const Kernel& kernel);
ValidationReport validate_lmp(const Lmp& lmp);

struct CounterexampleWitness {
  enum class Kind { NotSurjective, MassMismatch };
  Kind kind;
  std::string label;   // zigzag checks only
  StateId state;       // index state x, or source state s
  StateId target;      // codomain state s' (or Q = {s'}), or the unhit state
  Rational preimage_mass;
  Rational target_mass;

  std::string describe() const;
};

struct MorphismCheck {
  bool holds = true;
  std::optional<CounterexampleWitness> witness;

  explicit operator bool() const noexcept { return holds; }
};

/// Surjective and measure-preserving on every singleton of the codomain.
/// Throws Error(SpaceMismatch) when the spaces do not line up.
MorphismCheck is_kernel_morphism(const Morphism& h, const Kernel& mu1, const Kernel& mu2);

/// Zigzag morphism of LMPs. Throws Error(LabelMismatch) or Error(SpaceMismatch).
MorphismCheck is_zigzag(const Morphism& f, const Lmp& s, const Lmp& s_prime);

}  // namespace semipb
