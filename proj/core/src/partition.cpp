#include "subclone/partition.hpp"

#include <algorithm>
#include <map>

namespace subclone {

Partition::Partition(int k, std::vector<std::vector<int>> blocks)
    : k_(k), blocks_(std::move(blocks)), class_of_(k, -1) {
  if (k < 2) throw Error("domain size must be at least 2");
  for (auto& b : blocks_) {
    if (b.empty()) throw Error("partition block is empty");
    std::sort(b.begin(), b.end());
  }
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    for (int x : blocks_[bi]) {
      if (x < 0 || x >= k) throw Error("partition element out of domain");
      if (class_of_[x] != -1) throw Error("partition blocks overlap");
      class_of_[x] = static_cast<int>(bi);
    }
  }
  for (int x = 0; x < k; ++x)
    if (class_of_[x] == -1) throw Error("partition does not cover the domain");
}

Partition Partition::finest(int k) {
  std::vector<std::vector<int>> blocks(k);
  for (int x = 0; x < k; ++x) blocks[x] = {x};
  return Partition(k, std::move(blocks));
}

Partition Partition::coarsest(int k) {
  std::vector<int> all(k);
  for (int x = 0; x < k; ++x) all[x] = x;
  return Partition(k, {all});
}

Partition Partition::from_relation(const Relation& r) {
  if (!is_equivalence(r)) throw Error("relation is not an equivalence");
  int k = r.k();
  std::vector<std::vector<int>> blocks;
  std::vector<bool> placed(k, false);
  for (int a = 0; a < k; ++a) {
    if (placed[a]) continue;
    std::vector<int> block;
    for (int b = 0; b < k; ++b)
      if (r.contains_rank(static_cast<std::uint64_t>(a) * k + b)) {
        block.push_back(b);
        placed[b] = true;
      }
    blocks.push_back(std::move(block));
  }
  return Partition(k, std::move(blocks));
}

Relation Partition::to_relation() const {
  Relation r(k_, 2);
  for (const auto& b : blocks_)
    for (int x : b)
      for (int y : b) r.insert_rank(static_cast<std::uint64_t>(x) * k_ + y);
  return r;
}

bool Partition::nontrivial() const {
  int t = block_count();
  return t > 1 && t < k_;
}

bool Partition::refines(const Partition& coarser) const {
  if (k_ != coarser.k_) throw Error("incompatible domains");
  for (const auto& b : blocks_) {
    int c = coarser.class_of(b[0]);
    for (int x : b)
      if (coarser.class_of(x) != c) return false;
  }
  return true;
}

Partition Partition::meet(const Partition& other) const {
  if (k_ != other.k_) throw Error("incompatible domains");
  std::map<std::pair<int, int>, std::vector<int>> cells;
  for (int x = 0; x < k_; ++x)
    cells[{class_of_[x], other.class_of_[x]}].push_back(x);
  std::vector<std::vector<int>> blocks;
  blocks.reserve(cells.size());
  for (auto& [key, cell] : cells) blocks.push_back(std::move(cell));
  return Partition(k_, std::move(blocks));
}

}  // namespace subclone
