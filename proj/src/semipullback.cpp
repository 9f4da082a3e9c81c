#include "semipb/semipullback.hpp"

#include <cstdint>

#include "semipb/error.hpp"

namespace semipb {

namespace {

constexpr std::size_t kMaxEnumeratedStates = 24;

std::uint64_t subset_count(const FinSpace& space) {
  if (space.size() > kMaxEnumeratedStates) {
    throw Error(ErrorCode::InvalidArgument,
                "space '" + space.name() + "' is too large to enumerate its subsets");
  }
  return std::uint64_t{1} << space.size();
}

Subset subset_from_mask(std::uint64_t mask, std::size_t n) {
  Subset s(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (mask >> i & 1U) s.set(i);
  }
  return s;
}

Rational mass_of(const RationalVector& row, const Subset& subset) {
  Rational total = 0;
  for (auto i = subset.find_first(); i != Subset::npos; i = subset.find_next(i)) total += row[i];
  return total;
}

RationalVector push_forward(const Morphism& h, const RationalVector& row) {
  RationalVector out(h.codomain().size());
  for (std::size_t s = 0; s < row.size(); ++s) out[h(s)] += row[s];
  return out;
}

void require_kernel_morphism(const Morphism& h, const Kernel& mu, const Kernel& apex, const char* leg) {
  const auto check = is_kernel_morphism(h, mu, apex);
  if (!check) {
    const auto code = check.witness->kind == CounterexampleWitness::Kind::NotSurjective ? ErrorCode::NotSurjective
                                                                                        : ErrorCode::NotMeasurePreserving;
    throw Error(code, std::string(leg) + " is not a kernel morphism: " + check.witness->describe());
  }
}

void require_zigzag(const Morphism& f, const Lmp& s, const Lmp& target, const char* leg) {
  const auto check = is_zigzag(f, s, target);
  if (!check) {
    const auto code = check.witness->kind == CounterexampleWitness::Kind::NotSurjective ? ErrorCode::NotSurjective
                                                                                        : ErrorCode::NotMeasurePreserving;
    throw Error(code, std::string(leg) + " is not a zigzag: " + check.witness->describe());
  }
}

void require_shared_index(const KernelCospan& c) {
  if (!(c.left.source() == c.apex.source()) || !(c.right.source() == c.apex.source())) {
    throw Error(ErrorCode::SpaceMismatch, "cospan kernels have different index spaces");
  }
}

FinAddMeasure marginal_measure(const SetAlgebra& algebra, const Morphism& projection, const RationalVector& row) {
  // Atom k^-1({s}) carries mu(s).
  RationalVector mass(algebra.atom_count());
  for (std::size_t a = 0; a < algebra.atom_count(); ++a) mass[a] = row[projection(algebra.atoms()[a].find_first())];
  return FinAddMeasure(algebra, std::move(mass));
}

std::vector<SimpleFunction> atom_indicators(const SetAlgebra& algebra) {
  std::vector<SimpleFunction> out;
  out.reserve(algebra.atom_count());
  for (const auto& atom : algebra.atoms()) out.push_back(SimpleFunction::indicator(algebra.ground(), atom));
  return out;
}

[[noreturn]] void pipeline_failure(const Kernel& index, std::size_t x, const std::string& what) {
  throw Error(ErrorCode::PipelineInfeasible, "at x = " + index.source().state(x) + ": " + what);
}

}  // namespace

StateId pair_id(const StateId& s1, const StateId& s2) { return "(" + s1 + "," + s2 + ")"; }

SetPullback set_pullback(const Morphism& h1, const Morphism& h2, const std::string& name) {
  if (!(h1.codomain() == h2.codomain())) throw Error(ErrorCode::SpaceMismatch, "legs have different codomains");
  if (auto u = h1.first_unhit()) throw Error(ErrorCode::NotSurjective, "first leg misses " + h1.codomain().state(*u));
  if (auto u = h2.first_unhit()) throw Error(ErrorCode::NotSurjective, "second leg misses " + h2.codomain().state(*u));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<StateId> ids;
  for (std::size_t s1 = 0; s1 < h1.domain().size(); ++s1) {
    for (std::size_t s2 = 0; s2 < h2.domain().size(); ++s2) {
      if (h1(s1) != h2(s2)) continue;
      pairs.emplace_back(s1, s2);
      ids.push_back(pair_id(h1.domain().state(s1), h2.domain().state(s2)));
    }
  }
  FinSpace space(name, std::move(ids));
  std::vector<std::size_t> first(pairs.size()), second(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    first[p] = pairs[p].first;
    second[p] = pairs[p].second;
  }
  Morphism k1(space, h1.domain(), std::move(first));
  Morphism k2(space, h2.domain(), std::move(second));
  return {std::move(space), std::move(k1), std::move(k2), std::move(pairs)};
}

Subset image_minorant(const Morphism& h, const RationalVector& mu, const RationalVector& mu0, const Subset& subset) {
  if (mu.size() != h.domain().size() || mu0.size() != h.codomain().size()) {
    throw Error(ErrorCode::SpaceMismatch, "measure rows do not match the morphism's spaces");
  }
  if (push_forward(h, mu) != mu0) throw Error(ErrorCode::NotMeasurePreserving, "image measure differs from the apex row");
  Subset image = h.image(subset);
  if (mass_of(mu0, image) < mass_of(mu, subset)) {
    throw Error(ErrorCode::NotMeasurePreserving, "image carries less mass than its preimage");
  }
  return image;
}

bool strassen_via_images(const KernelCospan& c, std::size_t x) {
  const auto& row0 = c.apex.row(x);
  const auto& row1 = c.left.row(x);
  const auto& row2 = c.right.row(x);
  const FinSpace& s1 = c.h1.domain();
  const std::uint64_t limit = subset_count(s1);
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    const Subset b1 = subset_from_mask(mask, s1.size());
    const Subset d1 = image_minorant(c.h1, row1, row0, b1);
    // The largest A2 disjoint from k1^-1(B1) is k2^-1(B2) with B2 = S2 \ h2^-1(h1(B1)).
    Subset b2 = c.h2.preimage(d1);
    b2.flip();
    const Subset d2 = image_minorant(c.h2, row2, row0, b2);
    if (d1.intersects(d2)) return false;
    const Rational lhs = mass_of(row1, b1) + mass_of(row2, b2);
    const Rational bound = mass_of(row0, d1) + mass_of(row0, d2);
    if (lhs > bound || bound > 1) return false;
  }
  return true;
}

SemipullbackResult semipullback_prob_kernels(const KernelCospan& c) {
  require_shared_index(c);
  for (const Kernel* k : {&c.apex, &c.left, &c.right}) {
    const auto report = validate_kernel(*k);
    if (!report.ok()) throw Error(ErrorCode::InvalidArgument, "invalid kernel row " + report.violations.front().row + ": " + report.violations.front().message);
    for (std::size_t x = 0; x < k->source().size(); ++x) {
      if (k->total(x) != 1) throw Error(ErrorCode::InvalidArgument, "row " + k->source().state(x) + " is not a probability measure");
    }
  }
  require_kernel_morphism(c.h1, c.left, c.apex, "first leg");
  require_kernel_morphism(c.h2, c.right, c.apex, "second leg");

  SetPullback pb = set_pullback(c.h1, c.h2, "pullback(" + c.h1.domain().name() + "," + c.h2.domain().name() + ")");
  const FinSpace& s3 = pb.space;
  const FinSpace& s1 = c.h1.domain();
  const FinSpace& s2 = c.h2.domain();
  const FinSpace& s0 = c.h1.codomain();

  const SetAlgebra alg1 = preimage_algebra(pb.k1, SetAlgebra::powerset(s1));
  const SetAlgebra alg2 = preimage_algebra(pb.k2, SetAlgebra::powerset(s2));
  std::vector<Subset> generators = alg1.atoms();
  generators.insert(generators.end(), alg2.atoms().begin(), alg2.atoms().end());
  const SetAlgebra ambient = generated_algebra(s3, generators);

  // W is spanned by the atom indicators of both preimage algebras; V adds the
  // ambient atoms in canonical order.
  std::vector<SimpleFunction> w_basis = atom_indicators(alg1);
  const auto w2 = atom_indicators(alg2);
  w_basis.insert(w_basis.end(), w2.begin(), w2.end());
  std::vector<SimpleFunction> v_basis = w_basis;
  const auto ambient_indicators = atom_indicators(ambient);
  v_basis.insert(v_basis.end(), ambient_indicators.begin(), ambient_indicators.end());

  // Product cells, and the complement of S3 in S1 x S2.
  const std::size_t cells = s1.size() * s2.size();
  std::vector<std::optional<std::size_t>> cell_to_pair(cells);
  for (std::size_t p = 0; p < pb.pairs.size(); ++p) {
    cell_to_pair[pb.pairs[p].first * s2.size() + pb.pairs[p].second] = p;
  }
  Subset complement(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (!cell_to_pair[cell]) complement.set(cell);
  }
  const std::uint64_t b0_count = subset_count(s0);

  const FinSpace& index = c.apex.source();
  std::vector<RationalVector> rows;
  std::vector<PointCertificate> certificates;
  rows.reserve(index.size());
  certificates.reserve(index.size());

  for (std::size_t x = 0; x < index.size(); ++x) {
    FinAddMeasure nu1 = marginal_measure(alg1, pb.k1, c.left.row(x));
    FinAddMeasure nu2 = marginal_measure(alg2, pb.k2, c.right.row(x));

    const bool direct = static_cast<bool>(strassen_condition(nu1, nu2, ambient));
    const bool via_images = strassen_via_images(c, x);
    if (!direct || !via_images) pipeline_failure(c.apex, x, "Strassen condition fails");

    std::optional<FinAddMeasure> common;
    try {
      common = common_extension(nu1, nu2, ambient);
    } catch (const Error& e) {
      pipeline_failure(c.apex, x, e.what());
    }

    RationalVector psi_values;
    psi_values.reserve(w_basis.size());
    for (const auto& f : w_basis) psi_values.push_back(integral(*common, f));
    PositiveFunctional psi(s3, w_basis, std::move(psi_values));

    std::optional<HahnBanachResult> extended;
    try {
      extended = hahn_banach_extend(psi, v_basis);
    } catch (const Error& e) {
      pipeline_failure(c.apex, x, e.what());
    }
    const PositiveFunctional& phi = extended->functional;

    RationalVector nu3_mass;
    nu3_mass.reserve(ambient.atom_count());
    for (const auto& f : ambient_indicators) nu3_mass.push_back(phi(f));
    FinAddMeasure nu3(ambient, std::move(nu3_mass));
    if (nu3.total() != 1) pipeline_failure(c.apex, x, "nu3(S3) = " + to_string(nu3.total()));

    // mu(B) := nu3(B cap S3) on the product; every rectangle
    // h1^-1(B0) x h2^-1(S0 \ B0) must be null and together they must cover
    // exactly the complement of S3.
    RationalVector product(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
      if (!cell_to_pair[cell]) continue;
      product[cell] = eval_measure(nu3, s3.singleton(*cell_to_pair[cell]));
    }
    Subset covered(cells);
    for (std::uint64_t mask = 0; mask < b0_count; ++mask) {
      const Subset b0 = subset_from_mask(mask, s0.size());
      Subset rest = b0;
      rest.flip();
      const Subset left = c.h1.preimage(b0);
      const Subset right = c.h2.preimage(rest);
      Subset trace = s3.empty_set();
      for (auto i = left.find_first(); i != Subset::npos; i = left.find_next(i)) {
        for (auto j = right.find_first(); j != Subset::npos; j = right.find_next(j)) {
          const std::size_t cell = i * s2.size() + j;
          covered.set(cell);
          if (cell_to_pair[cell]) trace.set(*cell_to_pair[cell]);
        }
      }
      if (eval_measure(nu3, trace) != 0) pipeline_failure(c.apex, x, "a separating rectangle has positive measure");
    }
    if (covered != complement) pipeline_failure(c.apex, x, "separating rectangles do not cover the complement of S3");
    Rational on_s3 = 0;
    std::vector<RationalVector> product_matrix(s1.size(), RationalVector(s2.size()));
    for (std::size_t cell = 0; cell < cells; ++cell) {
      if (cell_to_pair[cell]) on_s3 += product[cell];
      product_matrix[cell / s2.size()][cell % s2.size()] = product[cell];
    }
    if (on_s3 != 1) pipeline_failure(c.apex, x, "extended measure of S3 is " + to_string(on_s3));

    rows.push_back(promote_to_sigma_additive(nu3));

    certificates.push_back(PointCertificate{{},
                                            index.state(x),
                                            std::move(nu1),
                                            std::move(nu2),
                                            std::move(*common),
                                            std::move(extended->steps),
                                            phi.values(),
                                            std::move(nu3),
                                            direct,
                                            via_images,
                                            std::move(product_matrix),
                                            static_cast<std::size_t>(b0_count),
                                            true});
  }

  Kernel mu3(index, s3, std::move(rows), KernelKind::Probability);
  try {
    require_kernel_morphism(pb.k1, mu3, c.left, "first projection");
    require_kernel_morphism(pb.k2, mu3, c.right, "second projection");
  } catch (const Error& e) {
    throw Error(ErrorCode::PipelineInfeasible, e.what());
  }
  return {std::move(pb), std::move(mu3), std::move(certificates)};
}

StateId dead_state_id(const FinSpace& space) { return "⊥dead" + space.name(); }

FinSpace complete_space(const FinSpace& space) {
  const StateId dead = dead_state_id(space);
  if (space.find(dead)) {
    throw Error(ErrorCode::ReservedIdCollision, "space '" + space.name() + "' already has a state named " + dead);
  }
  auto states = space.states();
  states.push_back(dead);
  return FinSpace(space.name(), std::move(states));
}

Completion one_point_completion(const Kernel& mu, const std::optional<Morphism>& h) {
  FinSpace target = complete_space(mu.target());
  std::vector<RationalVector> rows;
  rows.reserve(mu.source().size());
  for (std::size_t x = 0; x < mu.source().size(); ++x) {
    RationalVector row = mu.row(x);
    row.push_back(1 - sum(row));
    rows.push_back(std::move(row));
  }
  Completion out{Kernel(mu.source(), target, std::move(rows), KernelKind::Probability), std::nullopt};
  if (h) {
    if (!(h->domain() == mu.target())) throw Error(ErrorCode::SpaceMismatch, "leg does not start at the kernel's target");
    FinSpace codomain = complete_space(h->codomain());
    auto map = h->map();
    map.push_back(codomain.size() - 1);
    out.morphism = Morphism(std::move(target), std::move(codomain), std::move(map));
  }
  return out;
}

SemipullbackResult semipullback_subprob_kernels(const KernelCospan& c) {
  require_shared_index(c);
  for (const Kernel* k : {&c.apex, &c.left, &c.right}) {
    const auto report = validate_kernel(*k);
    if (!report.ok()) throw Error(ErrorCode::InvalidArgument, "invalid kernel row " + report.violations.front().row + ": " + report.violations.front().message);
  }
  require_kernel_morphism(c.h1, c.left, c.apex, "first leg");
  require_kernel_morphism(c.h2, c.right, c.apex, "second leg");

  Completion apex = one_point_completion(c.apex);
  Completion left = one_point_completion(c.left, c.h1);
  Completion right = one_point_completion(c.right, c.h2);
  KernelCospan completed{apex.kernel, left.kernel, right.kernel, *left.morphism, *right.morphism};
  SemipullbackResult full = semipullback_prob_kernels(completed);

  // The completed pullback is the original one followed by the pair of dead states.
  SetPullback pb = set_pullback(c.h1, c.h2, full.pullback.space.name());
  const std::size_t n = pb.space.size();
  const Kernel& full_kernel = full.kernel();
  std::vector<RationalVector> rows;
  rows.reserve(full_kernel.source().size());
  for (std::size_t x = 0; x < full_kernel.source().size(); ++x) {
    const auto& r = full_kernel.row(x);
    rows.emplace_back(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n));
  }
  Kernel mu3(c.apex.source(), pb.space, std::move(rows), KernelKind::Subprobability);
  try {
    require_kernel_morphism(pb.k1, mu3, c.left, "restricted first projection");
    require_kernel_morphism(pb.k2, mu3, c.right, "restricted second projection");
  } catch (const Error& e) {
    throw Error(ErrorCode::PipelineInfeasible, e.what());
  }
  for (std::size_t x = 0; x < mu3.source().size(); ++x) {
    if (mu3.total(x) != c.apex.total(x)) {
      throw Error(ErrorCode::PipelineInfeasible, "row " + mu3.source().state(x) + " lost mass in the restriction");
    }
  }
  return {std::move(pb), std::move(mu3), std::move(full.certificates)};
}

SemipullbackResult semipullback_lmp(const LmpCospan& c) {
  if (c.left.labels() != c.apex.labels() || c.right.labels() != c.apex.labels()) {
    throw Error(ErrorCode::LabelMismatch, "cospan LMPs have different label sets");
  }
  require_zigzag(c.h1, c.left, c.apex, "first leg");
  require_zigzag(c.h2, c.right, c.apex, "second leg");

  SetPullback pb = set_pullback(c.h1, c.h2, "pullback(" + c.h1.domain().name() + "," + c.h2.domain().name() + ")");
  const FinSpace& x_space = pb.space;
  std::vector<Kernel> kernels;
  std::vector<PointCertificate> certificates;
  for (std::size_t a = 0; a < c.apex.labels().size(); ++a) {
    std::vector<RationalVector> rows0, rows1, rows2;
    for (std::size_t x = 0; x < x_space.size(); ++x) {
      rows1.push_back(c.left.kernel(a).row(pb.k1(x)));
      rows2.push_back(c.right.kernel(a).row(pb.k2(x)));
      rows0.push_back(c.apex.kernel(a).row(c.h1(pb.k1(x))));
    }
    KernelCospan per_label{Kernel(x_space, c.h1.codomain(), std::move(rows0), KernelKind::Subprobability),
                           Kernel(x_space, c.h1.domain(), std::move(rows1), KernelKind::Subprobability),
                           Kernel(x_space, c.h2.domain(), std::move(rows2), KernelKind::Subprobability), c.h1, c.h2};
    SemipullbackResult r = semipullback_subprob_kernels(per_label);
    for (auto& cert : r.certificates) {
      cert.label = c.apex.labels()[a];
      certificates.push_back(std::move(cert));
    }
    kernels.emplace_back(x_space, x_space, r.kernel().rows(), KernelKind::Subprobability);
  }
  Lmp vertex(x_space, c.apex.labels(), std::move(kernels));
  try {
    require_zigzag(pb.k1, vertex, c.left, "first projection");
    require_zigzag(pb.k2, vertex, c.right, "second projection");
  } catch (const Error& e) {
    throw Error(ErrorCode::PipelineInfeasible, e.what());
  }
  return {std::move(pb), std::move(vertex), std::move(certificates)};
}

Kernel independent_coupling(const KernelCospan& c) {
  require_shared_index(c);
  SetPullback pb = set_pullback(c.h1, c.h2, "pullback(" + c.h1.domain().name() + "," + c.h2.domain().name() + ")");
  std::vector<RationalVector> rows;
  for (std::size_t x = 0; x < c.apex.source().size(); ++x) {
    RationalVector row(pb.space.size());
    for (std::size_t p = 0; p < pb.pairs.size(); ++p) {
      const auto [s1, s2] = pb.pairs[p];
      const Rational& m = c.apex.row(x)[c.h1(s1)];
      if (m == 0) continue;
      row[p] = c.left.row(x)[s1] * c.right.row(x)[s2] / m;
    }
    rows.push_back(std::move(row));
  }
  return Kernel(c.apex.source(), pb.space, std::move(rows), c.apex.kind());
}

namespace {

void check_commutes(const Morphism& h1, const Morphism& h2, const SemipullbackResult& r, SemipullbackCheck& out) {
  out.commutes = compose(h1, r.pullback.k1) == compose(h2, r.pullback.k2);
  if (!out.commutes) out.failures.push_back("square does not commute");
}

}  // namespace

SemipullbackCheck check_semipullback(const KernelCospan& c, const SemipullbackResult& r) {
  SemipullbackCheck out;
  check_commutes(c.h1, c.h2, r, out);
  const Kernel& mu3 = r.kernel();
  const auto m1 = is_kernel_morphism(r.pullback.k1, mu3, c.left);
  const auto m2 = is_kernel_morphism(r.pullback.k2, mu3, c.right);
  out.marginals = m1.holds && m2.holds;
  if (!m1) out.failures.push_back("first projection: " + m1.witness->describe());
  if (!m2) out.failures.push_back("second projection: " + m2.witness->describe());
  out.totals = true;
  for (std::size_t x = 0; x < mu3.source().size(); ++x) {
    if (mu3.total(x) != c.apex.total(x)) {
      out.totals = false;
      out.failures.push_back("row " + mu3.source().state(x) + " total " + to_string(mu3.total(x)) +
                             " differs from apex total " + to_string(c.apex.total(x)));
    }
  }
  return out;
}

SemipullbackCheck check_semipullback(const LmpCospan& c, const SemipullbackResult& r) {
  SemipullbackCheck out;
  check_commutes(c.h1, c.h2, r, out);
  const auto z1 = is_zigzag(r.pullback.k1, r.lmp(), c.left);
  const auto z2 = is_zigzag(r.pullback.k2, r.lmp(), c.right);
  out.marginals = z1.holds && z2.holds;
  if (!z1) out.failures.push_back("first projection: " + z1.witness->describe());
  if (!z2) out.failures.push_back("second projection: " + z2.witness->describe());
  out.totals = out.marginals;
  return out;
}

}  // namespace semipb
