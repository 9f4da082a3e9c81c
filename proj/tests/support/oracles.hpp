#pragma once

// Reference computations written without the library's LP solver or
// extension code, used to cross-check their results.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "semipb/core_model.hpp"
#include "semipb/measure_algebra.hpp"
#include "semipb/semipullback.hpp"

namespace oracle {

using namespace semipb;
using Matrix = std::vector<RationalVector>;

/// Solves the square system a x = b by Gauss-Jordan elimination; nullopt if singular.
inline std::optional<RationalVector> solve_square(Matrix a, RationalVector b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

/// Indices of a maximal linearly independent subfamily, greedy in order.
inline std::vector<std::size_t> independent_subset(const Matrix& vectors) {
  std::vector<std::size_t> keep;
  Matrix echelon;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    RationalVector v = vectors[i];
    for (const auto& row : echelon) {
      std::size_t lead = 0;
      while (row[lead] == 0) ++lead;
      if (v[lead] != 0) {
        const Rational f = v[lead] / row[lead];
        for (std::size_t c = 0; c < v.size(); ++c) v[c] -= f * row[c];
      }
    }
    bool zero = true;
    for (const auto& x : v) zero = zero && x == 0;
    if (!zero) {
      echelon.push_back(v);
      keep.push_back(i);
    }
  }
  return keep;
}

/// min sum_j c_j value_j  subject to  sum_j c_j g_j >= f pointwise, c free,
/// by enumerating vertices of the feasible region. Generators must be
/// linearly independent and span a space containing the constants, so the
/// region is nonempty and its minimum, when finite, sits at a vertex.
/// Returns nullopt when no vertex exists (which cannot happen here).
inline std::optional<Rational> min_dominating(const Matrix& generators, const RationalVector& values,
                                              const RationalVector& f) {
  const std::size_t k = generators.size();
  const std::size_t n = f.size();
  std::optional<Rational> best;
  std::vector<std::size_t> pick(k);
  // Enumerate k-subsets of the n pointwise constraints.
  auto visit = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == k) {
      Matrix a(k, RationalVector(k));
      RationalVector b(k);
      for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t j = 0; j < k; ++j) a[r][j] = generators[j][pick[r]];
        b[r] = f[pick[r]];
      }
      const auto c = solve_square(a, b);
      if (!c) return;
      for (std::size_t s = 0; s < n; ++s) {
        Rational lhs = 0;
        for (std::size_t j = 0; j < k; ++j) lhs += (*c)[j] * generators[j][s];
        if (lhs < f[s]) return;
      }
      Rational objective = 0;
      for (std::size_t j = 0; j < k; ++j) objective += (*c)[j] * values[j];
      if (!best || objective < *best) best = objective;
      return;
    }
    for (std::size_t i = start; i + (k - depth) <= n; ++i) {
      pick[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  visit(visit, 0, 0);
  return best;
}

/// Sequential extension computed with vertex enumeration: returns the value
/// assigned to every element of v_basis, given psi's values on w_basis.
inline RationalVector extension_values(const Matrix& w_basis, const RationalVector& w_values, const Matrix& v_basis) {
  Matrix current;
  RationalVector current_values;
  for (std::size_t i : independent_subset(w_basis)) {
    current.push_back(w_basis[i]);
    current_values.push_back(w_values[i]);
  }
  RationalVector out;
  for (const auto& f : v_basis) {
    Matrix trial = current;
    trial.push_back(f);
    if (independent_subset(trial).size() == current.size()) {
      // f already in the span: solve for its coordinates on a square subsystem.
      const auto rows = independent_subset([&] {
        Matrix t(f.size(), RationalVector(current.size()));
        for (std::size_t s = 0; s < f.size(); ++s) {
          for (std::size_t j = 0; j < current.size(); ++j) t[s][j] = current[j][s];
        }
        return t;
      }());
      Matrix a;
      RationalVector b;
      for (std::size_t r : rows) {
        RationalVector row;
        for (const auto& g : current) row.push_back(g[r]);
        a.push_back(row);
        b.push_back(f[r]);
      }
      const auto c = solve_square(a, b);
      Rational v = 0;
      for (std::size_t j = 0; j < current.size(); ++j) v += (*c)[j] * current_values[j];
      out.push_back(v);
      continue;
    }
    const auto v = min_dominating(current, current_values, f);
    out.push_back(v.value());
    current.push_back(f);
    current_values.push_back(*v);
  }
  return out;
}

/// Every subset of an n-point ground, as bitsets.
inline std::vector<Subset> all_subsets(std::size_t n) {
  std::vector<Subset> out;
  for (unsigned long m = 0; m < (1UL << n); ++m) out.emplace_back(n, m);
  return out;
}

/// Singleton-based kernel morphism check replaced by the definition: every
/// subset Q of the codomain satisfies mu1(h^-1 Q) = mu2(Q).
inline bool preserves_all_subsets(const Morphism& h, const Kernel& mu1, const Kernel& mu2) {
  if (!h.is_surjective()) return false;
  for (std::size_t x = 0; x < mu1.source().size(); ++x) {
    for (const auto& q : all_subsets(h.codomain().size())) {
      if (mu1.mass(x, h.preimage(q)) != mu2.mass(x, q)) return false;
    }
  }
  return true;
}

inline bool zigzag_all_subsets(const Morphism& f, const Lmp& s, const Lmp& t) {
  if (!f.is_surjective()) return false;
  for (std::size_t a = 0; a < s.labels().size(); ++a) {
    for (std::size_t x = 0; x < s.space().size(); ++x) {
      for (const auto& q : all_subsets(t.space().size())) {
        if (s.kernel(a).mass(x, f.preimage(q)) != t.kernel(a).mass(f(x), q)) return false;
      }
    }
  }
  return true;
}

/// Rectangle condition on a product measure over S1 x S2: every rectangle
/// h1^-1(B) x h2^-1(S0 \ B) has mass zero and the rectangles cover exactly
/// the pairs off the pullback. Returns an empty string on success.
inline std::string rectangle_check(const Morphism& h1, const Morphism& h2, const Matrix& product) {
  const std::size_t n1 = h1.domain().size(), n2 = h2.domain().size(), n0 = h1.codomain().size();
  std::vector<std::vector<bool>> covered(n1, std::vector<bool>(n2, false));
  for (const auto& b : all_subsets(n0)) {
    Rational mass = 0;
    for (std::size_t i = 0; i < n1; ++i) {
      if (!b.test(h1(i))) continue;
      for (std::size_t j = 0; j < n2; ++j) {
        if (b.test(h2(j))) continue;
        mass += product[i][j];
        covered[i][j] = true;
      }
    }
    if (mass != 0) return "rectangle over " + describe(h1.codomain(), b) + " has mass " + to_string(mass);
  }
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      if (covered[i][j] == (h1(i) == h2(j))) return "cover mismatch at (" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
  }
  return "";
}

}  // namespace oracle
