#include <doctest.h>

#include "semipb/error.hpp"
#include "semipb/semipullback.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace semipb;

namespace {

RationalVector row(std::initializer_list<const char*> entries) {
  RationalVector out;
  for (const char* e : entries) out.push_back(parse_rational(e));
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

const FinSpace X("X", {"x"});

Kernel prob(const FinSpace& target, std::initializer_list<const char*> r) {
  return Kernel(X, target, {row(r)}, KernelKind::Probability);
}

Kernel subprob(const FinSpace& target, std::initializer_list<const char*> r) {
  return Kernel(X, target, {row(r)}, KernelKind::Subprobability);
}

KernelCospan product_cospan(const Kernel& left, const Kernel& right, const Kernel& point) {
  const FinSpace& p = point.target();
  return {point, left, right, Morphism(left.target(), p, std::vector<std::size_t>(left.target().size(), 0)),
          Morphism(right.target(), p, std::vector<std::size_t>(right.target().size(), 0))};
}

std::vector<std::string> ids(const FinSpace& s) { return s.states(); }

}  // namespace

TEST_CASE("set pullbacks") {
  const FinSpace a("A", {"a", "b"}), c("C", {"c", "d"}), uv("U", {"u", "v"});
  const auto bij = set_pullback(Morphism::from_ids(a, uv, {{"a", "u"}, {"b", "v"}}),
                                Morphism::from_ids(c, uv, {{"c", "u"}, {"d", "v"}}));
  CHECK(ids(bij.space) == std::vector<std::string>{"(a,c)", "(b,d)"});

  const FinSpace pt("P", {"p"});
  CHECK(set_pullback(Morphism(a, pt, {0, 0}), Morphism(c, pt, {0, 0})).space.size() == 4);

  const FinSpace s1("S1", {"a", "b", "c"}), s2("S2", {"d", "e", "f"});
  const auto pb = set_pullback(Morphism::from_ids(s1, uv, {{"a", "u"}, {"b", "u"}, {"c", "v"}}),
                               Morphism::from_ids(s2, uv, {{"d", "u"}, {"e", "v"}, {"f", "v"}}));
  CHECK(ids(pb.space) == std::vector<std::string>{"(a,d)", "(b,d)", "(c,e)", "(c,f)"});
  CHECK(pb.k1.map() == std::vector<std::size_t>{0, 1, 2, 2});
  CHECK(pb.k2.map() == std::vector<std::size_t>{0, 0, 1, 2});

  CHECK(code_of([&] { set_pullback(Morphism(a, uv, {0, 0}), Morphism(c, uv, {0, 1})); }) == ErrorCode::NotSurjective);
  CHECK(code_of([&] { set_pullback(Morphism(a, uv, {0, 1}), Morphism(c, pt, {0, 0})); }) == ErrorCode::SpaceMismatch);
}

TEST_CASE("identity cospan gives the diagonal") {
  const FinSpace s("S", {"a", "b", "c"});
  const Kernel mu = prob(s, {"1/2", "1/3", "1/6"});
  const KernelCospan c{mu, mu, mu, Morphism::identity(s), Morphism::identity(s)};
  const auto r = semipullback_prob_kernels(c);
  CHECK(ids(r.pullback.space) == std::vector<std::string>{"(a,a)", "(b,b)", "(c,c)"});
  CHECK(r.kernel().row(0) == mu.row(0));
  CHECK(check_semipullback(c, r).ok());
  REQUIRE(r.certificates.size() == 1);
  CHECK(r.certificates[0].strassen_direct);
  CHECK(r.certificates[0].strassen_via_images);
  CHECK(r.certificates[0].rectangles_cover_complement);
  CHECK(oracle::rectangle_check(c.h1, c.h2, r.certificates[0].product_mass).empty());
}

TEST_CASE("product cospan couples the marginals") {
  const FinSpace a("A", {"a1", "a2"}), b("B", {"b1", "b2"}), p("P", {"p"});
  const KernelCospan c = product_cospan(prob(a, {"1/2", "1/2"}), prob(b, {"1/3", "2/3"}), prob(p, {"1"}));
  const auto r = semipullback_prob_kernels(c);
  CHECK(check_semipullback(c, r).ok());
  CHECK(independent_coupling(c).row(0) == row({"1/6", "1/3", "1/6", "1/3"}));
  const RationalVector& m = r.kernel().row(0);
  CHECK(m[0] + m[1] == Rational(1, 2));
  CHECK(m[0] + m[2] == Rational(1, 3));
}

TEST_CASE("a leg that is not measure preserving is rejected with its witness") {
  const FinSpace a("A", {"a", "b"}), u("U", {"u", "v"});
  const Kernel left = prob(a, {"1/3", "2/3"});
  const Kernel apex = prob(u, {"1/2", "1/2"});
  const KernelCospan c{apex, left, apex, Morphism::from_ids(a, u, {{"a", "u"}, {"b", "v"}}), Morphism::identity(u)};
  try {
    semipullback_prob_kernels(c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotMeasurePreserving);
    CHECK(std::string(e.what()).find("first leg") != std::string::npos);
  }
  CHECK(code_of([&] { semipullback_prob_kernels({subprob(u, {"1/2", "0"}), left, left, c.h1, c.h1}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("image minorants") {
  const FinSpace a("A", {"a", "b"}), u("U", {"u"});
  const Morphism h(a, u, {0, 0});
  const RationalVector mu = row({"1/4", "1/4"}), mu0 = row({"1/2"});
  CHECK(image_minorant(h, mu, mu0, a.full_set()) == u.full_set());
  CHECK(image_minorant(h, mu, mu0, a.empty_set()) == u.empty_set());
  CHECK(image_minorant(h, mu, mu0, a.singleton(0)) == u.full_set());
  CHECK(code_of([&] { image_minorant(h, mu, row({"1/3"}), a.singleton(0)); }) == ErrorCode::NotMeasurePreserving);
}

TEST_CASE("one-point completion") {
  const FinSpace s("S", {"a", "b"}), u("U", {"u"});
  CHECK(one_point_completion(subprob(s, {"1/3", "1/3"})).kernel.row(0) == row({"1/3", "1/3", "1/3"}));
  CHECK(one_point_completion(subprob(s, {"1/2", "1/2"})).kernel.row(0) == row({"1/2", "1/2", "0"}));
  const auto z = one_point_completion(subprob(s, {"0", "0"}), Morphism(s, u, {0, 0}));
  CHECK(z.kernel.row(0) == row({"0", "0", "1"}));
  CHECK(z.kernel.kind() == KernelKind::Probability);
  REQUIRE(z.morphism);
  CHECK(z.morphism->map() == std::vector<std::size_t>{0, 0, 1});
  CHECK(z.morphism->codomain().state(1) == dead_state_id(u));

  const FinSpace taken("S", {"a", dead_state_id(FinSpace("S", {"a"}))});
  CHECK(code_of([&] { complete_space(taken); }) == ErrorCode::ReservedIdCollision);
}

TEST_CASE("subprobability cospans") {
  const FinSpace a("A", {"a1", "a2"}), b("B", {"b1", "b2"}), p("P", {"p"});
  const KernelCospan half = product_cospan(subprob(a, {"1/4", "1/4"}), subprob(b, {"1/2", "0"}), subprob(p, {"1/2"}));
  const auto r = semipullback_subprob_kernels(half);
  CHECK(r.kernel().total(0) == Rational(1, 2));
  CHECK(check_semipullback(half, r).ok());
  CHECK(r.pullback.space.size() == 4);

  const KernelCospan zero = product_cospan(subprob(a, {"0", "0"}), subprob(b, {"0", "0"}), subprob(p, {"0"}));
  CHECK(semipullback_subprob_kernels(zero).kernel().row(0) == RationalVector(4));

  // Probability input: the dead state carries nothing and the result agrees.
  const KernelCospan full = product_cospan(prob(a, {"1/2", "1/2"}), prob(b, {"1/3", "2/3"}), prob(p, {"1"}));
  CHECK(semipullback_subprob_kernels(full).kernel().rows() == semipullback_prob_kernels(full).kernel().rows());
}

TEST_CASE("property: random cospans complete to commuting squares") {
  testgen::Rng rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    testgen::CospanShape shape;
    shape.max_side = 5;
    shape.max_index = 2;
    shape.subprobability = trial % 2 == 1;
    const KernelCospan c = testgen::random_cospan(rng, shape);
    const auto r = shape.subprobability ? semipullback_subprob_kernels(c) : semipullback_prob_kernels(c);
    const auto check = check_semipullback(c, r);
    CHECK_MESSAGE(check.ok(), (check.failures.empty() ? "" : check.failures.front()));
    CHECK(oracle::preserves_all_subsets(r.pullback.k1, r.kernel(), c.left));
    CHECK(oracle::preserves_all_subsets(r.pullback.k2, r.kernel(), c.right));
    // The construction is a function of its input.
    CHECK((shape.subprobability ? semipullback_subprob_kernels(c) : semipullback_prob_kernels(c)).kernel().rows() ==
          r.kernel().rows());
  }
}

TEST_CASE("deterministic legs force the fiberwise product") {
  testgen::Rng rng(52);
  testgen::CospanShape shape;
  shape.deterministic_right = true;
  for (int trial = 0; trial < 40; ++trial) {
    const KernelCospan c = testgen::random_cospan(rng, shape);
    CHECK(semipullback_prob_kernels(c).kernel().rows() == independent_coupling(c).rows());
  }
}

TEST_CASE("LMP semipullbacks") {
  const FinSpace s("S", {"s1", "s2"});
  const Lmp l(s, {"a", "b"},
              {Kernel(s, s, {row({"1/2", "1/4"}), row({"0", "1"})}, KernelKind::Subprobability),
               Kernel(s, s, {row({"0", "0"}), row({"0", "0"})}, KernelKind::Subprobability)});
  const LmpCospan c{l, l, l, Morphism::identity(s), Morphism::identity(s)};
  const auto r = semipullback_lmp(c);
  CHECK(ids(r.pullback.space) == std::vector<std::string>{"(s1,s1)", "(s2,s2)"});
  CHECK(r.lmp().kernel("a").rows() == l.kernel("a").rows());
  CHECK(r.lmp().kernel("b").rows() == l.kernel("b").rows());
  CHECK(check_semipullback(c, r).ok());

  const Lmp other(s, {"a"}, {l.kernel("a")});
  CHECK(code_of([&] { semipullback_lmp({l, other, l, Morphism::identity(s), Morphism::identity(s)}); }) ==
        ErrorCode::LabelMismatch);

  const Morphism swap(s, s, {1, 0});
  try {
    semipullback_lmp({l, l, l, Morphism::identity(s), swap});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotMeasurePreserving);
    CHECK(std::string(e.what()).find("(a, s1,") != std::string::npos);
  }
}
