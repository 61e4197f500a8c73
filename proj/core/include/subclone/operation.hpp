#ifndef SUBCLONE_OPERATION_HPP
#define SUBCLONE_OPERATION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "subclone/relation.hpp"

namespace subclone {

/// An n-ary operation on E_k as a total value table in row-major
/// (lexicographic argument) order.
class Operation {
 public:
  Operation(int k, int arity, std::vector<std::uint8_t> table);

  static Operation from_function(int k, int arity,
                                 const std::function<int(std::span<const int>)>& f);
  static Operation projection(int k, int arity, int index);
  static Operation constant(int k, int arity, int value);
  static Operation unary(int k, const std::vector<int>& images);

  int k() const { return space_.k(); }
  int arity() const { return space_.arity(); }
  const std::vector<std::uint8_t>& table() const { return table_; }

  int apply(std::span<const int> args) const {
    return table_[space_.rank(args)];
  }
  int at(std::uint64_t rank) const { return table_[rank]; }

  bool operator==(const Operation& other) const {
    return k() == other.k() && arity() == other.arity() && table_ == other.table_;
  }

 private:
  TupleSpace space_;
  std::vector<std::uint8_t> table_;
};

/// f preserves r: applying f row-wise to any choice of arity(f) member
/// tuples of r (as columns) lands in r. For unary r this is closure of the
/// subset under f. Plain |r|^n loop with early exit.
bool preserves(const Operation& f, const Relation& r);

/// Preservation scan that can run over several workers and reports the
/// lexicographically least violating column combination (as member indices
/// into r's lexicographic tuple list). Result is identical for any worker
/// count.
struct PreservationScan {
  bool preserved = true;
  std::vector<std::uint32_t> violation;  // column member-indices, empty if preserved
};
PreservationScan scan_preservation(const Operation& f, const Relation& r,
                                   int threads = 1);

/// A permutation of E_k with canonical cycle bookkeeping.
class Permutation {
 public:
  Permutation(int k, std::vector<int> images);  // must be a bijection

  static Permutation identity(int k);
  static Permutation from_cycles(int k, const std::vector<std::vector<int>>& cycles);

  int k() const { return k_; }
  int operator()(int x) const { return images_[x]; }
  const std::vector<int>& images() const { return images_; }

  /// Cycles sorted by least element, each starting at its least element.
  /// Fixed points appear as singleton cycles.
  std::vector<std::vector<int>> cycles() const;

  Permutation inverse() const;
  Operation as_operation() const;

  bool operator==(const Permutation& other) const = default;

 private:
  int k_;
  std::vector<int> images_;
};

/// All cycles share one prime length. Fixed points are cycles of length 1,
/// so any fixed point makes this false.
bool is_prime_permutation(const Permutation& p);

/// An abelian group on E_k given by its addition table; validated on
/// construction.
class GroupTable {
 public:
  GroupTable(Operation add, int zero);

  int k() const { return add_.k(); }
  int add(int a, int b) const {
    int args[2] = {a, b};
    return add_.apply(args);
  }
  int zero() const { return zero_; }
  const Operation& add_op() const { return add_; }

  int order_of(int a) const;

  /// Every non-zero element has the same prime order p (elementary abelian
  /// p-group). Returns p, or nullopt.
  std::optional<int> elementary_prime() const;

 private:
  Operation add_;
  int zero_;
};

}  // namespace subclone

#endif
