#ifndef SUBCLONE_CONSTRUCTIONS_HPP
#define SUBCLONE_CONSTRUCTIONS_HPP

#include <optional>
#include <vector>

#include "subclone/operation.hpp"
#include "subclone/partition.hpp"
#include "subclone/relation.hpp"

namespace subclone {

// Derived relations used by the decision procedures. All functions build the
// full tuple set; inputs stay untouched.

/// h-ary tuples whose first two components are theta-related.
Relation eta(const Partition& theta, int h);

/// i = 0: tuples componentwise theta-equivalent to some member of rho.
/// i >= 1: first i components fixed, the rest relaxed within their classes.
/// Always contains rho.
Relation rho_i_theta(const Relation& rho, const Partition& theta, int i);

/// n = 1: rho_0_theta. n >= 2: intersection over all index permutations
/// sigma of permuted rho_{n-1,theta}.
Relation beta(const Relation& rho, const Partition& theta, int n);

/// beta at level 2; for totally symmetric rho this matches the shared-
/// representative form with one relaxed pattern per coordinate.
Relation varsigma(const Relation& rho, const Partition& theta);

/// One shared representative system u_i in [a_i]_theta such that for every
/// coordinate i the tuple (a_i, u_{j != i}) lies in rho.
Relation zeta(const Relation& rho, const Partition& theta);

/// l-ary variant of zeta: one shared system u_i such that replacing u_i by
/// a_i keeps the value set's h-th power inside rho, for every i.
Relation zeta_extended(const Relation& rho, const Partition& theta, int l);

/// rho_{n,theta}^l: first n components kept, representatives for the rest,
/// with {a_1..a_n, u_{n+1}..u_l}^h contained in rho. Requires l > h >= n.
Relation extended_family(const Relation& rho, const Partition& theta, int n, int l);

/// Intersection over all sigma in S_l of permuted rho_{n-1,theta}^l
/// (n >= 2); the l-ary analogue of beta.
Relation beta_extended(const Relation& rho, const Partition& theta, int n, int l);
Relation varsigma_extended(const Relation& rho, const Partition& theta, int l);

/// Segmented relation over shape (m_1 > ... > m_n): the first m_1 + ... + m_n
/// coordinates form theta-constant segments; shared representatives for the
/// remaining t - n coordinates make every cross-segment selection's value
/// set h-th power land in rho. shape = {max block size} gives the paper's
/// (m + t - 1)-ary case.
Relation gamma_prime(const Relation& rho, const Partition& theta,
                     const std::vector<int>& shape);

/// Diagonal relation data: equality forced on eps1-blocks, theta-relatedness
/// on an equivalence over the least indices of eps1-blocks.
struct DiagonalSpec {
  int h = 0;
  std::vector<std::vector<int>> eps1;  // partition of {0..h-1}
  std::vector<std::vector<int>> eps2;  // partition of the eps1 block minima

  void validate() const;
  std::vector<int> eps1_minima() const;
};

Relation diagonal(const DiagonalSpec& spec, const Partition& theta);

/// Canonical spec whose diagonal reproduces tau, if one exists. The returned
/// spec carries the constraint-maximal eps1/eps2 (every equality and
/// theta-constraint that holds across all of tau).
std::optional<DiagonalSpec> recognize_diagonal(const Relation& tau,
                                               const Partition& theta);

/// Comparison diagonal for gamma_prime's shape: equality nowhere, theta-
/// relatedness within each shape segment.
DiagonalSpec segment_diagonal_spec(const Partition& theta, const std::vector<int>& shape);

/// A family of h-block partitions with the nonempty cross-intersection
/// property.
class RegularFamily {
 public:
  RegularFamily(int h, std::vector<Partition> members);

  int k() const { return members_.front().k(); }
  int h() const { return h_; }
  const std::vector<Partition>& members() const { return members_; }

 private:
  int h_;
  std::vector<Partition> members_;
};

/// Checks block counts and the cross-intersection property; reports the
/// first failure in `why` when given.
bool is_regular_family(int h, const std::vector<Partition>& members,
                       std::string* why = nullptr);

/// All h-tuples whose component set meets at most h-1 classes of every
/// family member.
Relation h_regular(const RegularFamily& family);

/// Quotient of an h-ary relation along theta's class map (classes indexed by
/// least element); tuples of class indices on E_t.
Relation quotient_by(const Relation& r, const Partition& theta);
/// Preimage of a relation on E_t under theta's class map.
Relation preimage_under(const Relation& r_on_classes, const Partition& theta);

/// 4-ary affine relation {(a,b,c,d) : a + b = c + d}.
Relation affine(const GroupTable& g);

/// {(a,b,c,d) in alpha : (a,b),(a,c),(a,d) in theta}.
Relation alpha_1(const Relation& alpha, const Partition& theta);

/// {(x, p(x))}.
Relation graph(const Permutation& p);

/// Membership of every h-tuple over each value subset of E_k, keyed by the
/// subset bitmask. Shared by the extended constructions.
class PowerMembership {
 public:
  explicit PowerMembership(const Relation& rho);
  bool contains_power(std::uint32_t mask) const { return ok_[mask]; }

 private:
  std::vector<char> ok_;
};

}  // namespace subclone

#endif
