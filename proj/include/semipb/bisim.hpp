#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "semipb/core_model.hpp"
#include "semipb/semipullback.hpp"

namespace semipb {

/// Partition of a finite space into blocks, ordered by least member.
class Partition {
 public:
  Partition(FinSpace space, std::vector<std::size_t> block_of);

  static Partition trivial(const FinSpace& space);
  static Partition discrete(const FinSpace& space);

  const FinSpace& space() const noexcept { return space_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<Subset>& blocks() const noexcept { return blocks_; }
  std::size_t block_of(std::size_t state) const { return block_of_.at(state); }

  /// Every block of this partition lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.space_ == b.space_ && a.block_of_ == b.block_of_;
  }

 private:
  FinSpace space_;
  std::vector<std::size_t> block_of_;  // canonical block numbering
  std::vector<Subset> blocks_;
};

/// Splits blocks of `initial` until every two states of a block give equal
/// mass to every block under every label. The result is the coarsest stable
/// refinement of `initial`.
Partition refine_to_stable(const Lmp& lmp, const Partition& initial);

/// True iff the partition is stable, i.e. its quotient map is a zigzag.
bool is_stable(const Lmp& lmp, const Partition& partition);

struct Quotient {
  Lmp lmp;
  Morphism map;
  Partition partition;
};

/// Quotient by a stable partition. Blocks are named by their least member.
/// Throws Error(InvalidArgument) if the partition is not stable.
Quotient quotient_by(const Lmp& lmp, const Partition& partition, const std::string& name);

/// Largest zigzag quotient (probabilistic bisimilarity) by partition refinement.
Quotient largest_zigzag_quotient(const Lmp& lmp);

/// Cospan left -> U <- right through the common largest quotient, or nullopt
/// when the two LMPs are not behaviorally equivalent.
/// Throws Error(LabelMismatch).
std::optional<LmpCospan> cospan_from_quotients(const Lmp& left, const Lmp& right);

/// Semipullback of a cospan of zigzags: a span left <- S3 -> right whose legs
/// are zigzags, witnessing bisimilarity.
SemipullbackResult span_from_cospan(const LmpCospan& cospan);

}  // namespace semipb
