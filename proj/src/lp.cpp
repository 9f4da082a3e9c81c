#include "semipb/lp.hpp"

#include <optional>

#include "semipb/error.hpp"

namespace semipb::lp {

LinearProgram LinearProgram::nonnegative(std::size_t n) {
  return LinearProgram{std::vector<Domain>(n, Domain::NonNegative), {}, {}};
}

LinearProgram LinearProgram::free(std::size_t n) { return LinearProgram{std::vector<Domain>(n, Domain::Free), {}, {}}; }

void LinearProgram::add(RationalVector coefficients, Relation relation, Rational rhs) {
  canonicalize(coefficients);
  rhs.canonicalize();
  constraints.push_back({std::move(coefficients), relation, std::move(rhs)});
}

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// Dense tableau over columns [structural | slack/surplus | artificial], with
// the right-hand side kept in a separate vector.
class Tableau {
 public:
  std::vector<RationalVector> rows;
  RationalVector rhs;
  std::vector<std::size_t> basis;
  RationalVector reduced;  // reduced costs
  Rational reduced_rhs;    // minus the current objective value
  std::size_t columns = 0;

  void pivot(std::size_t row, std::size_t col) {
    auto& pr = rows[row];
    const Rational inv = 1 / pr[col];
    for (auto& v : pr) {
      if (v != 0) v *= inv;
    }
    rhs[row] *= inv;

    std::vector<std::size_t> nonzero;
    for (std::size_t k = 0; k < columns; ++k) {
      if (pr[k] != 0) nonzero.push_back(k);
    }
    auto eliminate = [&](RationalVector& target, Rational& target_rhs) {
      if (target[col] == 0) return;
      const Rational factor = target[col];
      for (auto k : nonzero) target[k] -= factor * pr[k];
      target_rhs -= factor * rhs[row];
    };
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != row) eliminate(rows[r], rhs[r]);
    }
    eliminate(reduced, reduced_rhs);
    basis[row] = col;
  }

  // Runs Bland's rule over columns [0, limit). Returns false if unbounded.
  bool optimize(std::size_t limit) {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < limit; ++j) {
        if (reduced[j] < 0) {
          entering = j;
          break;
        }
      }
      if (!entering) return true;
      const std::size_t col = *entering;

      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r][col] <= 0) continue;
        Rational ratio = rhs[r] / rows[r][col];
        if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[*leaving])) {
          leaving = r;
          best_ratio = std::move(ratio);
        }
      }
      if (!leaving) return false;
      pivot(*leaving, col);
    }
  }

  void set_costs(const RationalVector& costs) {
    reduced = costs;
    reduced_rhs = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Rational& cb = costs[basis[r]];
      if (cb == 0) continue;
      for (std::size_t k = 0; k < columns; ++k) {
        if (rows[r][k] != 0) reduced[k] -= cb * rows[r][k];
      }
      reduced_rhs -= cb * rhs[r];
    }
  }

  void drop_row(std::size_t r) {
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(r));
    rhs.erase(rhs.begin() + static_cast<std::ptrdiff_t>(r));
    basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(r));
  }
};

}  // namespace

Solution solve(const LinearProgram& input) {
  LinearProgram program = input;
  for (auto& c : program.constraints) {
    canonicalize(c.coefficients);
    c.rhs.canonicalize();
  }
  canonicalize(program.objective);
  const std::size_t n = program.variable_count();
  if (!program.objective.empty() && program.objective.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "objective length does not match variable count");
  }
  for (const auto& c : program.constraints) {
    if (c.coefficients.size() != n) {
      throw Error(ErrorCode::InvalidArgument, "constraint references undeclared variables");
    }
  }

  // Structural columns: free variables are split into a positive and a negative part.
  std::vector<std::size_t> positive_col(n), negative_col(n, SIZE_MAX);
  std::size_t structural = 0;
  for (std::size_t j = 0; j < n; ++j) {
    positive_col[j] = structural++;
    if (program.domains[j] == Domain::Free) negative_col[j] = structural++;
  }

  const std::size_t m = program.constraints.size();
  std::size_t slack_count = 0;
  for (const auto& c : program.constraints) {
    if (c.relation != Relation::Equal) ++slack_count;
  }

  // Flip rows so every right-hand side is nonnegative.
  std::vector<Relation> relation(m);
  std::vector<int> sign(m, 1);
  std::size_t artificial_count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = program.constraints[i];
    relation[i] = c.relation;
    if (c.rhs < 0) {
      sign[i] = -1;
      if (c.relation == Relation::LessEqual) relation[i] = Relation::GreaterEqual;
      else if (c.relation == Relation::GreaterEqual) relation[i] = Relation::LessEqual;
    }
    if (relation[i] != Relation::LessEqual) ++artificial_count;
  }

  Tableau t;
  t.columns = structural + slack_count + artificial_count;
  const std::size_t first_artificial = structural + slack_count;
  t.rows.assign(m, RationalVector(t.columns));
  t.rhs.resize(m);
  t.basis.resize(m);

  std::size_t next_slack = structural;
  std::size_t next_artificial = first_artificial;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = program.constraints[i];
    auto& row = t.rows[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (c.coefficients[j] == 0) continue;
      const Rational a = sign[i] * c.coefficients[j];
      row[positive_col[j]] = a;
      if (negative_col[j] != SIZE_MAX) row[negative_col[j]] = -a;
    }
    t.rhs[i] = sign[i] * c.rhs;
    switch (relation[i]) {
      case Relation::LessEqual:
        row[next_slack] = 1;
        t.basis[i] = next_slack++;
        break;
      case Relation::GreaterEqual:
        row[next_slack++] = -1;
        row[next_artificial] = 1;
        t.basis[i] = next_artificial++;
        break;
      case Relation::Equal:
        row[next_artificial] = 1;
        t.basis[i] = next_artificial++;
        break;
    }
  }

  // Phase 1: minimize the sum of artificials.
  if (artificial_count > 0) {
    RationalVector phase1(t.columns);
    for (std::size_t k = first_artificial; k < t.columns; ++k) phase1[k] = 1;
    t.set_costs(phase1);
    t.optimize(t.columns);
    if (t.reduced_rhs != 0) return Solution{Status::Infeasible, {}, 0};

    // Drive remaining (zero-valued) artificials out of the basis; rows where
    // that is impossible are linearly redundant.
    for (std::size_t r = t.rows.size(); r-- > 0;) {
      if (t.basis[r] < first_artificial) continue;
      std::optional<std::size_t> col;
      for (std::size_t k = 0; k < first_artificial; ++k) {
        if (t.rows[r][k] != 0) {
          col = k;
          break;
        }
      }
      if (col) t.pivot(r, *col);
      else t.drop_row(r);
    }
  }

  RationalVector costs(t.columns);
  if (!program.objective.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      costs[positive_col[j]] = program.objective[j];
      if (negative_col[j] != SIZE_MAX) costs[negative_col[j]] = -program.objective[j];
    }
  }
  t.set_costs(costs);
  if (!t.optimize(first_artificial)) return Solution{Status::Unbounded, {}, 0};

  RationalVector column_value(t.columns);
  for (std::size_t r = 0; r < t.rows.size(); ++r) column_value[t.basis[r]] = t.rhs[r];

  Solution solution{Status::Optimal, RationalVector(n), -t.reduced_rhs};
  for (std::size_t j = 0; j < n; ++j) {
    solution.values[j] = column_value[positive_col[j]];
    if (negative_col[j] != SIZE_MAX) solution.values[j] -= column_value[negative_col[j]];
  }
  return solution;
}

bool satisfies(const LinearProgram& program, const RationalVector& values, std::string* why) {
  auto fail = [&](const std::string& message) {
    if (why) *why = message;
    return false;
  };
  if (values.size() != program.variable_count()) return fail("wrong number of values");
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (program.domains[j] == Domain::NonNegative && values[j] < 0) {
      return fail("variable " + std::to_string(j) + " is negative");
    }
  }
  for (std::size_t i = 0; i < program.constraints.size(); ++i) {
    const auto& c = program.constraints[i];
    Rational lhs = 0;
    for (std::size_t j = 0; j < values.size(); ++j) lhs += c.coefficients[j] * values[j];
    const bool ok = c.relation == Relation::Equal       ? lhs == c.rhs
                    : c.relation == Relation::LessEqual ? lhs <= c.rhs
                                                        : lhs >= c.rhs;
    if (!ok) return fail("constraint " + std::to_string(i) + " violated: lhs " + semipb::to_string(lhs));
  }
  return true;
}

}  // namespace semipb::lp
