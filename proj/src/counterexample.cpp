#include "semipb/counterexample.hpp"

#include <algorithm>
#include <iterator>

#include "semipb/error.hpp"

namespace semipb::coco {

namespace {

std::set<Point> intersect(const std::set<Point>& a, const std::set<Point>& b) {
  std::set<Point> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

std::set<Point> unite(const std::set<Point>& a, const std::set<Point>& b) {
  std::set<Point> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

std::set<Point> minus(const std::set<Point>& a, const std::set<Point>& b) {
  std::set<Point> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

void require_parameter(const Rational& r) {
  if (r <= 0 || r >= 1) throw Error(ErrorCode::ParamError, "parameter " + to_string(r) + " is not in (0,1)");
}

const Point kS0 = "s0";
const std::vector<Point> kInsidePool = {kS0, "v1", "v2"};
const std::vector<Point> kOutsidePool = {"w1", "w2", "w3"};

std::vector<CocoSet> traces(const std::vector<Point>& pool) {
  std::vector<CocoSet> out;
  for (unsigned mask = 0; mask < (1U << pool.size()); ++mask) {
    std::set<Point> w;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (mask >> i & 1U) w.insert(pool[i]);
    }
    out.emplace_back(CocoSet::Mode::Small, w);
    out.emplace_back(CocoSet::Mode::Cosmall, w);
  }
  return out;
}

}  // namespace

CocoSet CocoSet::complement() const { return {is_small() ? Mode::Cosmall : Mode::Small, witness_}; }

CocoSet operator&(const CocoSet& a, const CocoSet& b) {
  using Mode = CocoSet::Mode;
  if (a.is_small() && b.is_small()) return {Mode::Small, intersect(a.witness_, b.witness_)};
  if (a.is_small()) return {Mode::Small, minus(a.witness_, b.witness_)};
  if (b.is_small()) return {Mode::Small, minus(b.witness_, a.witness_)};
  return {Mode::Cosmall, unite(a.witness_, b.witness_)};
}

CocoSet operator|(const CocoSet& a, const CocoSet& b) { return (a.complement() & b.complement()).complement(); }

std::string CocoSet::describe() const {
  std::string w;
  for (const auto& p : witness_) w += (w.empty() ? "" : ",") + p;
  return is_small() ? "{" + w + "}" : "co{" + w + "}";
}

std::string SigmaVSet::describe() const {
  return "(" + inside_v.describe() + " in V) u (" + outside_v.describe() + " off V)";
}

Rational mu0(const CocoSet& q) { return q.is_small() ? 0 : 1; }

Rational mu0(const SigmaVSet& q) {
  if (!q.in_sigma()) throw Error(ErrorCode::InvalidArgument, q.describe() + " is not countable or cocountable");
  return mu0(q.inside_v);
}

Rational mu_i(const SigmaVSet& q, const Rational& r) {
  require_parameter(r);
  if (q.in_sigma()) return mu0(q);
  if (q.outside_v.is_small()) return r;
  return 1 - r;
}

std::vector<SigmaVSet> generated_family() {
  std::vector<SigmaVSet> out;
  for (const auto& in : traces(kInsidePool)) {
    for (const auto& off : traces(kOutsidePool)) out.push_back({in, off});
  }
  return out;
}

AdditivityReport verify_finite_additivity(const Rational& r,
                                          const std::vector<std::pair<SigmaVSet, SigmaVSet>>& pairs) {
  require_parameter(r);
  AdditivityReport report;
  auto check_extension = [&](const SigmaVSet& q) {
    if (!q.in_sigma()) return;
    ++report.sigma_sets_checked;
    if (mu_i(q, r) != mu0(q)) report.failures.push_back("does not extend mu0 on " + q.describe());
  };
  for (const auto& [a, b] : pairs) {
    if (!a.disjoint_from(b)) {
      report.failures.push_back("pair not disjoint: " + a.describe() + ", " + b.describe());
      continue;
    }
    ++report.pairs_checked;
    const Rational lhs = mu_i(a | b, r);
    const Rational rhs = mu_i(a, r) + mu_i(b, r);
    if (lhs != rhs) {
      report.failures.push_back("additivity fails on " + a.describe() + ", " + b.describe() + ": " +
                                to_string(lhs) + " != " + to_string(rhs));
    }
    check_extension(a);
    check_extension(b);
    check_extension(a | b);
  }
  return report;
}

AdditivityReport verify_finite_additivity(const Rational& r) {
  const auto family = generated_family();
  std::vector<std::pair<SigmaVSet, SigmaVSet>> pairs;
  for (const auto& a : family) {
    for (const auto& b : family) {
      if (a.disjoint_from(b)) pairs.emplace_back(a, b);
    }
  }
  AdditivityReport report = verify_finite_additivity(r, pairs);
  for (const auto& a : family) {
    for (const auto& b : family) {
      if ((a & b) == a && mu_i(a, r) > mu_i(b, r)) {
        report.failures.push_back("not monotone on " + a.describe() + " within " + b.describe());
      }
    }
  }
  return report;
}

Rational ExampleLmp::tau(const Point& s, const SigmaVSet& a) const {
  if (base && !a.in_sigma()) throw Error(ErrorCode::InvalidArgument, a.describe() + " is not measurable in the base process");
  if (s == s0) return base ? mu0(a) : mu_i(a, r);
  // s0 lies in V.
  return a.inside_v.contains(s0) ? 1 : 0;
}

ObstructionReport demonstrate_obstruction(const Rational& r1, const Rational& r2) {
  require_parameter(r1);
  require_parameter(r2);
  if (r1 == r2) throw Error(ErrorCode::ParamError, "r1 = r2 = " + to_string(r1) + " gives no obstruction");

  ObstructionReport report;
  auto& chain = report.chain;
  auto fail = [&](const std::string& step) {
    throw Error(ErrorCode::PipelineInfeasible, "derivation step failed: " + step);
  };

  for (const Rational& r : {r1, r2}) {
    const auto additivity = verify_finite_additivity(r);
    if (!additivity.ok()) fail(additivity.failures.front());
    chain.push_back("mu with r = " + to_string(r) + " is finitely additive and extends mu0 (" +
                    std::to_string(additivity.pairs_checked) + " disjoint pairs, " +
                    std::to_string(additivity.sigma_sets_checked) + " countable/cocountable sets)");
  }

  const ExampleLmp s1{r1, false, kS0};
  const ExampleLmp s2{r2, false, kS0};
  const ExampleLmp base{0, true, kS0};
  std::size_t checked = 0;
  for (const auto& q : generated_family()) {
    if (!q.in_sigma()) continue;
    for (const Point& s : {kS0, Point("v1"), Point("w1")}) {
      const Rational t0 = base.tau(s, q);
      if (s1.tau(s, q) != t0 || s2.tau(s, q) != t0) fail("identity is not a zigzag at " + s + ", " + q.describe());
      ++checked;
    }
  }
  chain.push_back("identity maps S1 -> S0 <- S2 are zigzags (" + std::to_string(checked) + " state/set checks)");
  chain.push_back("suppose zigzags g1: S -> S1, g2: S -> S2 with Id o g1 = Id o g2; then g1 = g2 =: g");
  chain.push_back("g is onto, so some state t has g(t) = s0");
  chain.push_back("V is measurable in S1 and S2, so g^-1(V) is measurable in S");

  const SigmaVSet v = SigmaVSet::v();
  report.forced_first = s1.tau(kS0, v);
  report.forced_second = s2.tau(kS0, v);
  if (report.forced_first != r1 || report.forced_second != r2) fail("tau_i(s0, V) differs from r_i");
  chain.push_back("g1 zigzag: tau(t, g^-1(V)) = tau1(s0, V) = mu1(V) = " + to_string(report.forced_first));
  chain.push_back("g2 zigzag: tau(t, g^-1(V)) = tau2(s0, V) = mu2(V) = " + to_string(report.forced_second));
  report.contradiction = report.forced_first != report.forced_second;
  chain.push_back("hence " + to_string(report.forced_first) + " = " + to_string(report.forced_second) +
                  (report.contradiction ? ", a contradiction: no semipullback exists" : ""));
  return report;
}

}  // namespace semipb::coco
