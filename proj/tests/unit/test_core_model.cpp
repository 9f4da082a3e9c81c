#include <doctest.h>

#include "semipb/core_model.hpp"
#include "semipb/error.hpp"
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

}  // namespace

TEST_CASE("rationals parse and print canonically") {
  CHECK(to_string(parse_rational("2/4")) == "1/2");
  CHECK(to_string(parse_rational("-3/6")) == "-1/2");
  CHECK(to_string(parse_rational("4/2")) == "2");
  CHECK(to_string(parse_rational("0")) == "0");
  for (const char* bad : {"", "1/0", " 1/2", "1.5", "1/", "/2", "a", "1/-2", "+1"}) {
    CHECK(code_of([&] { parse_rational(bad); }) == ErrorCode::Parse);
  }
}

TEST_CASE("spaces reject empty, duplicate and blank state lists") {
  CHECK(code_of([] { FinSpace("S", {}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { FinSpace("S", {"a", "a"}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { FinSpace("S", {"a", ""}); }) == ErrorCode::InvalidArgument);
  const FinSpace s("S", {"a", "b", "c"});
  CHECK(s.index_of("c") == 2);
  CHECK_FALSE(s.find("d"));
  CHECK(s == FinSpace("T", {"a", "b", "c"}));
  CHECK_FALSE(s == FinSpace("S", {"a", "c", "b"}));
}

TEST_CASE("kernel validation") {
  const FinSpace x("X", {"x1", "x2"});
  const FinSpace s("S", {"a", "b"});

  SUBCASE("well-formed probability kernel") {
    CHECK(validate_kernel(Kernel(x, s, {row({"1/2", "1/2"}), row({"0", "1"})}, KernelKind::Probability)).ok());
  }
  SUBCASE("row sum above one names the row") {
    const auto report = validate_kernel(Kernel(x, s, {row({"1/2", "1/2"}), row({"1/2", "2/3"})}, KernelKind::Probability));
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].row == "x2");
    CHECK(report.violations[0].message.find("7/6") != std::string::npos);
  }
  SUBCASE("deficit is fine only for subprobability kernels") {
    const std::vector<RationalVector> rows{row({"1/4", "1/4"}), row({"0", "0"})};
    CHECK(validate_kernel(Kernel(x, s, rows, KernelKind::Subprobability)).ok());
    CHECK(validate_kernel(Kernel(x, s, rows, KernelKind::Probability)).violations.size() == 2);
  }
  SUBCASE("negative entries") {
    CHECK_FALSE(validate_kernel(Kernel(x, s, {row({"-1/2", "1"}), row({"0", "1"})}, KernelKind::Subprobability)).ok());
  }
  SUBCASE("shape errors are raised at construction") {
    CHECK(code_of([&] { Kernel(x, s, {row({"1"})}, KernelKind::Probability); }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("kernel morphisms and witnesses") {
  const FinSpace x("X", {"x"});
  const FinSpace s1("S1", {"a", "b", "c"});
  const FinSpace s0("S0", {"p", "q"});
  const Kernel mu1(x, s1, {row({"1/4", "1/4", "1/2"})}, KernelKind::Probability);
  const Kernel mu0(x, s0, {row({"1/2", "1/2"})}, KernelKind::Probability);
  const Morphism good = Morphism::from_ids(s1, s0, {{"a", "p"}, {"b", "p"}, {"c", "q"}});
  const Morphism bad = Morphism::from_ids(s1, s0, {{"a", "p"}, {"b", "q"}, {"c", "q"}});
  const Morphism not_onto = Morphism::from_ids(s1, s0, {{"a", "p"}, {"b", "p"}, {"c", "p"}});

  CHECK(is_kernel_morphism(good, mu1, mu0));
  const auto check = is_kernel_morphism(bad, mu1, mu0);
  REQUIRE_FALSE(check);
  CHECK(check.witness->kind == CounterexampleWitness::Kind::MassMismatch);
  CHECK(check.witness->target == "p");
  CHECK(check.witness->preimage_mass == Rational(1, 4));
  CHECK(check.witness->target_mass == Rational(1, 2));
  CHECK(is_kernel_morphism(not_onto, mu1, mu0).witness->kind == CounterexampleWitness::Kind::NotSurjective);
  CHECK(code_of([&] { is_kernel_morphism(good, mu0, mu1); }) == ErrorCode::SpaceMismatch);
}

TEST_CASE("zigzag checks compare rows label by label") {
  const FinSpace s("S", {"s1", "s2"});
  const FinSpace t("T", {"t"});
  const Lmp big(s, {"a"}, {Kernel(s, s, {row({"1/3", "1/3"}), row({"0", "2/3"})}, KernelKind::Subprobability)});
  const Lmp small(t, {"a"}, {Kernel(t, t, {row({"2/3"})}, KernelKind::Subprobability)});
  const Lmp other(t, {"b"}, {Kernel(t, t, {row({"2/3"})}, KernelKind::Subprobability)});
  const Morphism f(s, t, {0, 0});
  CHECK(is_zigzag(f, big, small));
  CHECK(code_of([&] { is_zigzag(f, big, other); }) == ErrorCode::LabelMismatch);

  const Lmp off(t, {"a"}, {Kernel(t, t, {row({"1/2"})}, KernelKind::Subprobability)});
  const auto check = is_zigzag(f, big, off);
  REQUIRE_FALSE(check);
  CHECK(check.witness->label == "a");
  CHECK(check.witness->state == "s1");
  CHECK(check.witness->describe().find("(a, s1, {t})") != std::string::npos);
}

TEST_CASE("property: the singleton check agrees with the all-subsets definition") {
  testgen::Rng rng(11);
  int positives = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n1 = rng.uniform(1, 5), n0 = rng.uniform(1, n1);
    const FinSpace x = testgen::space("X", rng.uniform(1, 2), "x");
    const FinSpace s1 = testgen::space("S1", n1, "a");
    const FinSpace s0 = testgen::space("S0", n0, "c");
    const Morphism h(s1, s0, rng.coin(0.9) ? rng.surjection(n1, n0) : std::vector<std::size_t>(n1, 0));
    std::vector<RationalVector> rows1, rows0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      rows1.push_back(rng.probability(n1));
      rows0.push_back(rng.coin() ? testgen::push_forward(h, rows1.back()) : rng.probability(n0));
    }
    const Kernel mu1(x, s1, rows1, KernelKind::Probability), mu0(x, s0, rows0, KernelKind::Probability);
    const bool fast = static_cast<bool>(is_kernel_morphism(h, mu1, mu0));
    CHECK(fast == oracle::preserves_all_subsets(h, mu1, mu0));
    positives += fast;
  }
  CHECK(positives > 50);
}

TEST_CASE("property: zigzags compose") {
  testgen::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto labels = testgen::label_names(rng.uniform(1, 3));
    const std::size_t n2 = rng.uniform(1, 3), n1 = rng.uniform(n2, 5), n0 = rng.uniform(n1, 7);
    const Lmp bottom = testgen::random_lmp(rng, testgen::space("U", n2, "u"), labels);
    const Morphism g(testgen::space("T", n1, "t"), bottom.space(), rng.surjection(n1, n2));
    const Lmp middle = testgen::unfold(rng, bottom, g);
    const Morphism f(testgen::space("S", n0, "s"), middle.space(), rng.surjection(n0, n1));
    const Lmp top = testgen::unfold(rng, middle, f);
    REQUIRE(is_zigzag(f, top, middle));
    REQUIRE(is_zigzag(g, middle, bottom));
    const Morphism gf = compose(g, f);
    CHECK(is_zigzag(gf, top, bottom));
    CHECK(oracle::zigzag_all_subsets(gf, top, bottom));
  }
}

TEST_CASE("identity is a zigzag and a kernel morphism") {
  testgen::Rng rng(13);
  const Lmp l = testgen::random_lmp(rng, testgen::space("S", 4, "s"), {"a", "b"});
  CHECK(is_zigzag(Morphism::identity(l.space()), l, l));
  CHECK(validate_lmp(l).ok());
}
