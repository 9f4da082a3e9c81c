#pragma once

// Symbolic shadow of the countable-cocountable construction on [0,1]: sets
// are "small" (countable) or "cosmall" (countable complement), each carried
// by a finite witness set of abstract points over an uncountable ground.

#include <set>
#include <string>
#include <vector>

#include "semipb/rational.hpp"

namespace semipb::coco {

using Point = std::string;

class CocoSet {
 public:
  enum class Mode { Small, Cosmall };

  CocoSet(Mode mode, std::set<Point> witness) : mode_(mode), witness_(std::move(witness)) {}

  static CocoSet empty() { return {Mode::Small, {}}; }
  static CocoSet full() { return {Mode::Cosmall, {}}; }

  Mode mode() const noexcept { return mode_; }
  const std::set<Point>& witness() const noexcept { return witness_; }
  bool is_small() const noexcept { return mode_ == Mode::Small; }
  bool is_empty() const noexcept { return is_small() && witness_.empty(); }
  bool contains(const Point& p) const { return is_small() == (witness_.count(p) > 0); }

  CocoSet complement() const;
  friend CocoSet operator&(const CocoSet& a, const CocoSet& b);
  friend CocoSet operator|(const CocoSet& a, const CocoSet& b);
  friend CocoSet operator-(const CocoSet& a, const CocoSet& b) { return a & b.complement(); }
  friend bool operator==(const CocoSet&, const CocoSet&) = default;

  std::string describe() const;

 private:
  Mode mode_;
  std::set<Point> witness_;
};

/// A member of sigma(Sigma + {V}): (C1 cap V) cup (C2 cap V^c), stored as its
/// two traces. Boolean operations act componentwise.
struct SigmaVSet {
  CocoSet inside_v;
  CocoSet outside_v;

  static SigmaVSet v() { return {CocoSet::full(), CocoSet::empty()}; }
  static SigmaVSet v_complement() { return {CocoSet::empty(), CocoSet::full()}; }
  static SigmaVSet full() { return {CocoSet::full(), CocoSet::full()}; }
  static SigmaVSet empty() { return {CocoSet::empty(), CocoSet::empty()}; }

  /// Membership in the countable-cocountable algebra itself.
  bool in_sigma() const noexcept { return inside_v.mode() == outside_v.mode(); }
  bool is_empty() const noexcept { return inside_v.is_empty() && outside_v.is_empty(); }
  bool disjoint_from(const SigmaVSet& other) const { return ((*this) & other).is_empty(); }

  SigmaVSet complement() const { return {inside_v.complement(), outside_v.complement()}; }
  friend SigmaVSet operator&(const SigmaVSet& a, const SigmaVSet& b) {
    return {a.inside_v & b.inside_v, a.outside_v & b.outside_v};
  }
  friend SigmaVSet operator|(const SigmaVSet& a, const SigmaVSet& b) {
    return {a.inside_v | b.inside_v, a.outside_v | b.outside_v};
  }
  friend bool operator==(const SigmaVSet&, const SigmaVSet&) = default;

  std::string describe() const;
};

/// 1 iff the set has countable complement.
Rational mu0(const CocoSet& q);
/// mu0 on members of Sigma (both traces of the same kind).
Rational mu0(const SigmaVSet& q);

/// Extension of mu0 with parameter r: mu0 on Sigma, r when Q \ V is
/// countable, 1 - r otherwise. Throws Error(ParamError) unless 0 < r < 1.
Rational mu_i(const SigmaVSet& q, const Rational& r);

/// Every SigmaVSet whose traces have witnesses drawn from three points inside
/// V and three points outside V.
std::vector<SigmaVSet> generated_family();

struct AdditivityReport {
  std::size_t pairs_checked = 0;
  std::size_t sigma_sets_checked = 0;
  std::vector<std::string> failures;
  bool ok() const noexcept { return failures.empty(); }
};

/// Checks mu_i(A cup B) = mu_i(A) + mu_i(B) on every pair, and mu_i = mu0 on
/// every member of Sigma met along the way. Non-disjoint pairs are reported.
AdditivityReport verify_finite_additivity(const Rational& r, const std::vector<std::pair<SigmaVSet, SigmaVSet>>& pairs);

/// Exhaustive check over all disjoint pairs of the generated family, plus
/// monotonicity.
AdditivityReport verify_finite_additivity(const Rational& r);

/// The three-case LMP kernel: 1 for s != s0 when s0 in A, mu_i(A) at s0, 0 otherwise.
struct ExampleLmp {
  Rational r;  // parameter of mu_i; unused for the base process
  bool base;   // the countable-cocountable process S0
  Point s0;

  Rational tau(const Point& s, const SigmaVSet& a) const;
};

struct ObstructionReport {
  Rational forced_first;   // tau(t, g^-1(V)) forced by the first zigzag
  Rational forced_second;  // the same quantity forced by the second zigzag
  std::vector<std::string> chain;
  bool contradiction = false;
};

/// Derives, step by step, that completing the identity cospan S1 -> S0 <- S2
/// would force r1 = r2. Throws Error(ParamError) when r1 == r2 or either lies
/// outside (0,1).
ObstructionReport demonstrate_obstruction(const Rational& r1, const Rational& r2);

}  // namespace semipb::coco
