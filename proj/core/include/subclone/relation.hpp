#ifndef SUBCLONE_RELATION_HPP
#define SUBCLONE_RELATION_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace subclone {

/// Error raised on contract violations (bad arities, mismatched domains,
/// malformed inputs). The CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lexicographic rank/unrank of h-tuples over E_k = {0,...,k-1}.
/// rank(a) = sum a_i * k^(h-1-i), so tuple order equals rank order.
class TupleSpace {
 public:
  TupleSpace(int k, int arity);

  int k() const { return k_; }
  int arity() const { return arity_; }
  std::uint64_t size() const { return size_; }

  std::uint64_t rank(std::span<const int> tuple) const;
  void unrank(std::uint64_t r, std::span<int> out) const;

 private:
  int k_;
  int arity_;
  std::uint64_t size_;
  std::vector<std::uint64_t> pow_;  // pow_[i] = k^i
};

/// An h-ary relation on E_k stored as a dense bitset indexed by the
/// lexicographic rank of each tuple. Set semantics; iteration order is
/// always lexicographic, which keeps serialized output canonical.
class Relation {
 public:
  Relation(int k, int arity);  // empty relation

  static Relation empty(int k, int arity) { return Relation(k, arity); }
  static Relation full(int k, int arity);
  static Relation of_tuples(int k, int arity,
                            const std::vector<std::vector<int>>& tuples);

  int k() const { return space_.k(); }
  int arity() const { return space_.arity(); }
  const TupleSpace& space() const { return space_; }

  std::uint64_t size() const;
  bool is_empty() const;
  bool is_full() const { return size() == space_.size(); }

  bool contains(std::span<const int> tuple) const;
  bool contains_rank(std::uint64_t r) const;
  void insert(std::span<const int> tuple);
  void insert_rank(std::uint64_t r);
  void erase_rank(std::uint64_t r);

  Relation& operator&=(const Relation& other);
  Relation& operator|=(const Relation& other);
  Relation& operator-=(const Relation& other);
  friend Relation operator&(Relation a, const Relation& b) { return a &= b; }
  friend Relation operator|(Relation a, const Relation& b) { return a |= b; }
  friend Relation operator-(Relation a, const Relation& b) { return a -= b; }

  bool operator==(const Relation& other) const;
  bool subset_of(const Relation& other) const;

  /// Members in lexicographic order.
  std::vector<std::vector<int>> tuples() const;

  /// Visit member ranks in increasing (lexicographic) order.
  template <typename F>
  void for_each_rank(F&& f) const {
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      std::uint64_t word = bits_[w];
      while (word) {
        int bit = __builtin_ctzll(word);
        f(static_cast<std::uint64_t>(w) * 64 + bit);
        word &= word - 1;
      }
    }
  }

  /// Ranks of all members, increasing.
  std::vector<std::uint64_t> member_ranks() const;

 private:
  void check_compatible(const Relation& other) const;

  TupleSpace space_;
  std::vector<std::uint64_t> bits_;
};

// --- binary relation algebra -------------------------------------------

Relation delta(int k);  // {(a,a)}
Relation nabla(int k);  // E_k^2

/// Left-to-right composition: {(a,c) : exists b with (a,b) in r, (b,c) in s}.
Relation compose(const Relation& r, const Relation& s);
Relation inverse(const Relation& r);
bool is_reflexive(const Relation& r);
bool is_symmetric(const Relation& r);
bool is_transitive(const Relation& r);
bool is_equivalence(const Relation& r);
bool is_antisymmetric(const Relation& r);

/// Bounded partial order check: reflexive, antisymmetric, transitive, with
/// a least and a greatest element. Returns {least, greatest} when it is one.
struct BoundedOrderCheck {
  bool ok = false;
  int least = -1;
  int greatest = -1;
  std::string why;  // failure reason when !ok
};
BoundedOrderCheck check_bounded_order(const Relation& r);

// --- h-ary predicates ----------------------------------------------------

/// All h-tuples with at least one repeated component.
Relation repeats(int k, int h);

bool is_totally_reflexive(const Relation& r);  // requires h >= 2
bool is_totally_symmetric(const Relation& r);  // requires h >= 2

/// Central elements: a with (a, x_2, ..., x_h) in r for every choice of the
/// remaining components. Requires r totally reflexive and totally symmetric.
std::vector<int> center(const Relation& r);

/// h = 1: nonempty proper subset. h >= 2: totally reflexive, totally
/// symmetric, center nonempty and proper.
bool is_central(const Relation& r);

/// Coordinate permutation: {(a_{sigma(0)}, ..., a_{sigma(h-1)}) : a in r}.
Relation permute(const Relation& r, std::span<const int> sigma);

/// All permutations of {0,...,h-1} in lexicographic one-line order.
std::vector<std::vector<int>> index_permutations(int h);

}  // namespace subclone

#endif
