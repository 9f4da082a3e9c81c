#include "semipb/bisim.hpp"

#include <map>

#include "semipb/error.hpp"

namespace semipb {

Partition::Partition(FinSpace space, std::vector<std::size_t> labels) : space_(std::move(space)) {
  if (labels.size() != space_.size()) throw Error(ErrorCode::InvalidArgument, "one block label per state required");
  // Renumber blocks in order of first appearance, i.e. by least member.
  std::map<std::size_t, std::size_t> renumber;
  block_of_.resize(labels.size());
  for (std::size_t s = 0; s < labels.size(); ++s) {
    auto [it, inserted] = renumber.emplace(labels[s], blocks_.size());
    if (inserted) blocks_.push_back(space_.empty_set());
    block_of_[s] = it->second;
    blocks_[it->second].set(s);
  }
}

Partition Partition::trivial(const FinSpace& space) { return Partition(space, std::vector<std::size_t>(space.size(), 0)); }

Partition Partition::discrete(const FinSpace& space) {
  std::vector<std::size_t> labels(space.size());
  for (std::size_t s = 0; s < labels.size(); ++s) labels[s] = s;
  return Partition(space, std::move(labels));
}

bool Partition::refines(const Partition& coarser) const {
  for (const auto& block : blocks_) {
    if (!block.is_subset_of(coarser.blocks_[coarser.block_of(block.find_first())])) return false;
  }
  return true;
}

namespace {

// Mass each state sends into each block, per label, prefixed by its current block.
std::vector<Rational> signature(const Lmp& lmp, const Partition& p, std::size_t s) {
  std::vector<Rational> sig;
  sig.reserve(1 + lmp.labels().size() * p.block_count());
  sig.emplace_back(static_cast<unsigned long>(p.block_of(s)));
  for (const auto& k : lmp.kernels()) {
    for (const auto& block : p.blocks()) sig.push_back(k.mass(s, block));
  }
  return sig;
}

}  // namespace

Partition refine_to_stable(const Lmp& lmp, const Partition& initial) {
  if (!(initial.space() == lmp.space())) throw Error(ErrorCode::SpaceMismatch, "partition is not over the LMP space");
  Partition current = initial;
  for (;;) {
    std::map<std::vector<Rational>, std::size_t> classes;
    std::vector<std::size_t> labels(lmp.space().size());
    for (std::size_t s = 0; s < labels.size(); ++s) {
      labels[s] = classes.emplace(signature(lmp, current, s), classes.size()).first->second;
    }
    Partition next(lmp.space(), std::move(labels));
    if (next.block_count() == current.block_count()) return current;
    current = std::move(next);
  }
}

bool is_stable(const Lmp& lmp, const Partition& partition) {
  return refine_to_stable(lmp, partition).block_count() == partition.block_count();
}

Quotient quotient_by(const Lmp& lmp, const Partition& partition, const std::string& name) {
  if (!is_stable(lmp, partition)) throw Error(ErrorCode::InvalidArgument, "partition is not stable");
  std::vector<StateId> ids;
  for (const auto& block : partition.blocks()) ids.push_back(lmp.space().state(block.find_first()));
  FinSpace space(name, std::move(ids));

  std::vector<Kernel> kernels;
  for (const auto& k : lmp.kernels()) {
    std::vector<RationalVector> rows;
    for (const auto& from : partition.blocks()) {
      RationalVector row;
      for (const auto& to : partition.blocks()) row.push_back(k.mass(from.find_first(), to));
      rows.push_back(std::move(row));
    }
    kernels.emplace_back(space, space, std::move(rows), KernelKind::Subprobability);
  }
  std::vector<std::size_t> map(lmp.space().size());
  for (std::size_t s = 0; s < map.size(); ++s) map[s] = partition.block_of(s);

  Quotient q{Lmp(space, lmp.labels(), std::move(kernels)), Morphism(lmp.space(), space, std::move(map)), partition};
  if (!is_zigzag(q.map, lmp, q.lmp)) throw Error(ErrorCode::PipelineInfeasible, "quotient map is not a zigzag");
  return q;
}

Quotient largest_zigzag_quotient(const Lmp& lmp) {
  const Partition stable = refine_to_stable(lmp, Partition::trivial(lmp.space()));
  return quotient_by(lmp, stable, lmp.space().name() + "/~");
}

std::optional<LmpCospan> cospan_from_quotients(const Lmp& left, const Lmp& right) {
  if (left.labels() != right.labels()) throw Error(ErrorCode::LabelMismatch, "LMPs have different label sets");

  // Disjoint union; left states come first.
  const std::size_t n1 = left.space().size();
  const std::size_t n2 = right.space().size();
  std::vector<StateId> ids;
  for (const auto& s : left.space().states()) ids.push_back("L/" + s);
  for (const auto& s : right.space().states()) ids.push_back("R/" + s);
  FinSpace joint_space("joint", std::move(ids));
  std::vector<Kernel> kernels;
  for (std::size_t a = 0; a < left.labels().size(); ++a) {
    std::vector<RationalVector> rows;
    for (std::size_t s = 0; s < n1; ++s) {
      RationalVector row = left.kernel(a).row(s);
      row.resize(n1 + n2);
      rows.push_back(std::move(row));
    }
    for (std::size_t s = 0; s < n2; ++s) {
      RationalVector row(n1);
      const auto& r = right.kernel(a).row(s);
      row.insert(row.end(), r.begin(), r.end());
      rows.push_back(std::move(row));
    }
    kernels.emplace_back(joint_space, joint_space, std::move(rows), KernelKind::Subprobability);
  }
  const Lmp joint(joint_space, left.labels(), std::move(kernels));
  const Partition p = refine_to_stable(joint, Partition::trivial(joint_space));

  // Behaviorally equivalent iff every joint class meets both sides.
  Subset left_side(n1 + n2);
  for (std::size_t s = 0; s < n1; ++s) left_side.set(s);
  for (const auto& block : p.blocks()) {
    if (!block.intersects(left_side) || block.is_subset_of(left_side)) return std::nullopt;
  }

  std::vector<std::size_t> left_labels(n1), right_labels(n2);
  for (std::size_t s = 0; s < n1; ++s) left_labels[s] = p.block_of(s);
  for (std::size_t s = 0; s < n2; ++s) right_labels[s] = p.block_of(n1 + s);
  const Partition left_partition(left.space(), left_labels);
  Quotient q = quotient_by(left, left_partition, left.space().name() + "/~");

  // Joint block -> quotient state, through any left member of the block.
  std::vector<std::size_t> block_to_state(p.block_count());
  for (std::size_t s = 0; s < n1; ++s) block_to_state[p.block_of(s)] = q.map(s);
  std::vector<std::size_t> map2(n2);
  for (std::size_t s = 0; s < n2; ++s) map2[s] = block_to_state[right_labels[s]];
  Morphism h2(right.space(), q.lmp.space(), std::move(map2));
  if (!is_zigzag(h2, right, q.lmp)) throw Error(ErrorCode::PipelineInfeasible, "right leg of the quotient cospan is not a zigzag");

  return LmpCospan{q.lmp, left, right, q.map, std::move(h2)};
}

SemipullbackResult span_from_cospan(const LmpCospan& cospan) {
  SemipullbackResult result = semipullback_lmp(cospan);
  const auto check = check_semipullback(cospan, result);
  if (!check.ok()) {
    throw Error(ErrorCode::PipelineInfeasible, "span legs fail: " + (check.failures.empty() ? std::string("unknown") : check.failures.front()));
  }
  return result;
}

}  // namespace semipb
