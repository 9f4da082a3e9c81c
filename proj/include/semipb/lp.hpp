#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "semipb/rational.hpp"

namespace semipb::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
  RationalVector coefficients;
  Relation relation;
  Rational rhs;
};

enum class Domain { NonNegative, Free };

/// Minimize objective . x subject to the constraints and per-variable domains.
/// An empty objective asks for any feasible point.
struct LinearProgram {
  std::vector<Domain> domains;
  std::vector<Constraint> constraints;
  RationalVector objective;

  std::size_t variable_count() const noexcept { return domains.size(); }

  /// Builds a program over `n` nonnegative variables.
  static LinearProgram nonnegative(std::size_t n);
  static LinearProgram free(std::size_t n);

  void add(RationalVector coefficients, Relation relation, Rational rhs);
};

enum class Status { Optimal, Infeasible, Unbounded };

const char* to_string(Status status);

struct Solution {
  Status status = Status::Infeasible;
  RationalVector values;
  Rational objective_value;
};

/// Exact two-phase simplex with Bland's rule. Deterministic: the same program
/// always yields the same vertex. Throws Error(InvalidArgument) when a
/// constraint references undeclared variables.
Solution solve(const LinearProgram& program);

/// True iff `values` satisfies every constraint and domain exactly. On
/// failure `why` names the first violated constraint.
bool satisfies(const LinearProgram& program, const RationalVector& values, std::string* why = nullptr);

}  // namespace semipb::lp
