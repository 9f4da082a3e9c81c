#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "semipb/core_model.hpp"
#include "semipb/rational.hpp"

namespace semipb {

/// Finite algebra of subsets, represented by its atom partition.
///
/// Atoms are ordered by their least member in ground order, so every
/// iteration over atoms is deterministic.
class SetAlgebra {
 public:
  /// Blocks must be nonempty, disjoint and cover the ground set; they are
  /// re-sorted into canonical order. Throws Error(InvalidArgument) otherwise.
  SetAlgebra(FinSpace ground, std::vector<Subset> blocks);

  static SetAlgebra powerset(const FinSpace& ground);
  static SetAlgebra trivial(const FinSpace& ground);

  const FinSpace& ground() const noexcept { return ground_; }
  const std::vector<Subset>& atoms() const noexcept { return atoms_; }
  std::size_t atom_count() const noexcept { return atoms_.size(); }
  std::size_t atom_of(std::size_t state) const { return atom_of_.at(state); }

  bool contains(const Subset& subset) const;
  /// Union of the atoms selected by `selection` (bit i = atom i).
  Subset element(const Subset& selection) const;
  /// Atoms inside `subset`; throws Error(NotInAlgebra) if it splits an atom.
  Subset atoms_in(const Subset& subset) const;
  /// Every atom of this algebra is a union of atoms of `ambient`.
  bool is_subalgebra_of(const SetAlgebra& ambient) const;

  friend bool operator==(const SetAlgebra& a, const SetAlgebra& b) {
    return a.ground_ == b.ground_ && a.atoms_ == b.atoms_;
  }

 private:
  FinSpace ground_;
  std::vector<Subset> atoms_;
  std::vector<std::size_t> atom_of_;
};

/// Finitely additive measure given by its atom masses.
class FinAddMeasure {
 public:
  /// Masses must be nonnegative, one per atom.
  FinAddMeasure(SetAlgebra algebra, RationalVector atom_mass);

  const SetAlgebra& algebra() const noexcept { return algebra_; }
  const RationalVector& atom_mass() const noexcept { return atom_mass_; }
  Rational total() const { return sum(atom_mass_); }

 private:
  SetAlgebra algebra_;
  RationalVector atom_mass_;
};

/// Rational-valued function on a finite ground set.
class SimpleFunction {
 public:
  SimpleFunction(FinSpace ground, RationalVector values);

  static SimpleFunction constant(const FinSpace& ground, const Rational& c);
  static SimpleFunction indicator(const FinSpace& ground, const Subset& subset);

  const FinSpace& ground() const noexcept { return ground_; }
  const RationalVector& values() const noexcept { return values_; }
  const Rational& operator[](std::size_t i) const { return values_.at(i); }

  bool is_measurable(const SetAlgebra& algebra) const;
  /// Pointwise f >= g.
  bool dominates(const SimpleFunction& other) const;

  friend SimpleFunction operator+(const SimpleFunction& f, const SimpleFunction& g);
  friend SimpleFunction operator-(const SimpleFunction& f, const SimpleFunction& g);
  friend SimpleFunction operator*(const Rational& c, const SimpleFunction& f);
  friend bool operator==(const SimpleFunction& f, const SimpleFunction& g) {
    return f.ground_ == g.ground_ && f.values_ == g.values_;
  }

 private:
  FinSpace ground_;
  RationalVector values_;
};

/// Incremental echelon basis of a subspace of rational vectors, carrying a
/// linear functional alongside. Reducing a vector reduces its functional
/// value in lockstep, so evaluation at any member of the span is exact.
class LinearSpan {
 public:
  explicit LinearSpan(std::size_t dimension) : dimension_(dimension) {}

  enum class AddResult { Added, Consistent, Inconsistent };

  /// Adds v with functional value `value`. When v is already in the span,
  /// reports whether `value` agrees with the value the span implies.
  AddResult add(const RationalVector& v, const Rational& value);

  bool contains(const RationalVector& v) const;
  /// Functional value of v, or nullopt if v is outside the span.
  std::optional<Rational> evaluate(const RationalVector& v) const;

  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }

  /// An independent basis of the span with the functional's values on it.
  struct Generator {
    RationalVector vector;
    Rational value;
  };
  const std::vector<Generator>& generators() const noexcept { return rows_; }

 private:
  struct Reduced {
    RationalVector residual;
    Rational value;
  };
  Reduced reduce(const RationalVector& v, const Rational& value) const;

  std::size_t dimension_;
  std::vector<Generator> rows_;  // rows_[i] has a unit entry at pivots_[i], zero at other pivots
  std::vector<std::size_t> pivots_;
};

/// Linear functional on span(basis) given by its values on the basis.
class PositiveFunctional {
 public:
  /// Throws Error(InvalidArgument) if the values are inconsistent with a
  /// linear relation among the basis elements.
  PositiveFunctional(FinSpace ground, std::vector<SimpleFunction> basis, RationalVector values);

  const FinSpace& ground() const noexcept { return ground_; }
  const std::vector<SimpleFunction>& basis() const noexcept { return basis_; }
  const RationalVector& values() const noexcept { return values_; }
  const LinearSpan& span() const noexcept { return span_; }

  bool in_domain(const SimpleFunction& f) const { return span_.contains(f.values()); }
  /// Throws Error(InvalidArgument) if f is outside the domain.
  Rational operator()(const SimpleFunction& f) const;

  bool contains_constants() const;
  /// Value at the constant 1 (requires constants in the domain).
  Rational at_one() const;
  /// Exact check that the functional is >= 0 on every nonnegative member of its domain.
  bool is_positive() const;

 private:
  FinSpace ground_;
  std::vector<SimpleFunction> basis_;
  RationalVector values_;
  LinearSpan span_;
};

/// Smallest algebra containing every generator: atoms are the nonempty cells
/// of their common refinement.
SetAlgebra generated_algebra(const FinSpace& ground, std::span<const Subset> generators);

/// Algebra on h's domain whose atoms are the nonempty preimages of `codomain_algebra`'s atoms.
SetAlgebra preimage_algebra(const Morphism& h, const SetAlgebra& codomain_algebra);

Rational eval_measure(const FinAddMeasure& nu, const Subset& subset);

/// Integral of f against nu. Throws Error(NotMeasurable) if f is not constant on some atom.
Rational integral(const FinAddMeasure& nu, const SimpleFunction& f);

}  // namespace semipb
