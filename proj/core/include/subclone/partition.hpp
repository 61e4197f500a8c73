#ifndef SUBCLONE_PARTITION_HPP
#define SUBCLONE_PARTITION_HPP

#include <vector>

#include "subclone/relation.hpp"

namespace subclone {

/// An equivalence relation on E_k stored as ordered blocks. Blocks are kept
/// sorted internally and ordered by least element, so equal partitions have
/// identical representations.
class Partition {
 public:
  Partition(int k, std::vector<std::vector<int>> blocks);

  static Partition finest(int k);    // all singletons, induces delta
  static Partition coarsest(int k);  // one block, induces nabla
  static Partition from_relation(const Relation& r);  // throws if not an equivalence

  int k() const { return k_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& block(int i) const { return blocks_[i]; }

  int class_of(int x) const { return class_of_[x]; }
  bool same_class(int a, int b) const { return class_of_[a] == class_of_[b]; }
  int class_min(int x) const { return blocks_[class_of_[x]][0]; }

  Relation to_relation() const;

  /// Neither delta nor nabla.
  bool nontrivial() const;

  /// Every block of this partition lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const;

  Partition meet(const Partition& other) const;

  bool operator==(const Partition& other) const {
    return k_ == other.k_ && blocks_ == other.blocks_;
  }

 private:
  int k_;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> class_of_;
};

}  // namespace subclone

#endif
