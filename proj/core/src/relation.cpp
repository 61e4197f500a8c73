#include "subclone/relation.hpp"

#include <algorithm>
#include <numeric>

namespace subclone {

namespace {

// Dense bitsets over E_k^h; 2^27 bits (16 MiB) is plenty for desk scale
// (k <= 12, arities through zeta^k on E_8) and keeps mistakes cheap.
constexpr std::uint64_t kMaxBits = std::uint64_t{1} << 27;

}  // namespace

TupleSpace::TupleSpace(int k, int arity) : k_(k), arity_(arity) {
  if (k < 2) throw Error("domain size must be at least 2");
  if (arity < 1) throw Error("arity must be at least 1");
  pow_.resize(arity + 1);
  pow_[0] = 1;
  for (int i = 1; i <= arity; ++i) {
    if (pow_[i - 1] > kMaxBits / static_cast<std::uint64_t>(k))
      throw Error("tuple space exceeds size limit");
    pow_[i] = pow_[i - 1] * static_cast<std::uint64_t>(k);
  }
  size_ = pow_[arity];
  if (size_ > kMaxBits) throw Error("tuple space exceeds size limit");
}

std::uint64_t TupleSpace::rank(std::span<const int> tuple) const {
  std::uint64_t r = 0;
  for (int i = 0; i < arity_; ++i) {
    int a = tuple[i];
    if (a < 0 || a >= k_) throw Error("tuple component out of domain");
    r = r * static_cast<std::uint64_t>(k_) + static_cast<std::uint64_t>(a);
  }
  return r;
}

void TupleSpace::unrank(std::uint64_t r, std::span<int> out) const {
  for (int i = arity_ - 1; i >= 0; --i) {
    out[i] = static_cast<int>(r % static_cast<std::uint64_t>(k_));
    r /= static_cast<std::uint64_t>(k_);
  }
}

Relation::Relation(int k, int arity)
    : space_(k, arity), bits_((space_.size() + 63) / 64, 0) {}

Relation Relation::full(int k, int arity) {
  Relation r(k, arity);
  std::uint64_t n = r.space_.size();
  for (std::size_t w = 0; w < r.bits_.size(); ++w) r.bits_[w] = ~std::uint64_t{0};
  int spare = static_cast<int>(r.bits_.size() * 64 - n);
  if (spare > 0) r.bits_.back() >>= spare;
  return r;
}

Relation Relation::of_tuples(int k, int arity,
                             const std::vector<std::vector<int>>& tuples) {
  Relation r(k, arity);
  for (const auto& t : tuples) {
    if (static_cast<int>(t.size()) != arity)
      throw Error("tuple has wrong arity");
    r.insert(t);
  }
  return r;
}

std::uint64_t Relation::size() const {
  std::uint64_t n = 0;
  for (std::uint64_t w : bits_) n += static_cast<std::uint64_t>(__builtin_popcountll(w));
  return n;
}

bool Relation::is_empty() const {
  for (std::uint64_t w : bits_)
    if (w) return false;
  return true;
}

bool Relation::contains(std::span<const int> tuple) const {
  return contains_rank(space_.rank(tuple));
}

bool Relation::contains_rank(std::uint64_t r) const {
  return (bits_[r >> 6] >> (r & 63)) & 1;
}

void Relation::insert(std::span<const int> tuple) { insert_rank(space_.rank(tuple)); }

void Relation::insert_rank(std::uint64_t r) { bits_[r >> 6] |= std::uint64_t{1} << (r & 63); }

void Relation::erase_rank(std::uint64_t r) { bits_[r >> 6] &= ~(std::uint64_t{1} << (r & 63)); }

void Relation::check_compatible(const Relation& other) const {
  if (k() != other.k()) throw Error("incompatible domains");
  if (arity() != other.arity()) throw Error("arity mismatch");
}

Relation& Relation::operator&=(const Relation& other) {
  check_compatible(other);
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] &= other.bits_[w];
  return *this;
}

Relation& Relation::operator|=(const Relation& other) {
  check_compatible(other);
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] |= other.bits_[w];
  return *this;
}

Relation& Relation::operator-=(const Relation& other) {
  check_compatible(other);
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] &= ~other.bits_[w];
  return *this;
}

bool Relation::operator==(const Relation& other) const {
  return k() == other.k() && arity() == other.arity() && bits_ == other.bits_;
}

bool Relation::subset_of(const Relation& other) const {
  check_compatible(other);
  for (std::size_t w = 0; w < bits_.size(); ++w)
    if (bits_[w] & ~other.bits_[w]) return false;
  return true;
}

std::vector<std::vector<int>> Relation::tuples() const {
  std::vector<std::vector<int>> out;
  out.reserve(size());
  std::vector<int> buf(arity());
  for_each_rank([&](std::uint64_t r) {
    space_.unrank(r, buf);
    out.push_back(buf);
  });
  return out;
}

std::vector<std::uint64_t> Relation::member_ranks() const {
  std::vector<std::uint64_t> out;
  out.reserve(size());
  for_each_rank([&](std::uint64_t r) { out.push_back(r); });
  return out;
}

Relation delta(int k) {
  Relation r(k, 2);
  for (int a = 0; a < k; ++a) {
    int t[2] = {a, a};
    r.insert(t);
  }
  return r;
}

Relation nabla(int k) { return Relation::full(k, 2); }

Relation compose(const Relation& r, const Relation& s) {
  if (r.arity() != 2 || s.arity() != 2) throw Error("compose requires binary relations");
  if (r.k() != s.k()) throw Error("incompatible domains");
  int k = r.k();
  // successor sets as bitmasks over E_k (k <= 64 by the size guard)
  std::vector<std::uint64_t> rs(k, 0), ss(k, 0);
  r.for_each_rank([&](std::uint64_t q) {
    rs[q / k] |= std::uint64_t{1} << (q % k);
  });
  s.for_each_rank([&](std::uint64_t q) {
    ss[q / k] |= std::uint64_t{1} << (q % k);
  });
  Relation out(k, 2);
  for (int a = 0; a < k; ++a) {
    std::uint64_t reach = 0;
    std::uint64_t mid = rs[a];
    while (mid) {
      int b = __builtin_ctzll(mid);
      mid &= mid - 1;
      reach |= ss[b];
    }
    while (reach) {
      int c = __builtin_ctzll(reach);
      reach &= reach - 1;
      out.insert_rank(static_cast<std::uint64_t>(a) * k + c);
    }
  }
  return out;
}

Relation inverse(const Relation& r) {
  if (r.arity() != 2) throw Error("inverse requires a binary relation");
  int k = r.k();
  Relation out(k, 2);
  r.for_each_rank([&](std::uint64_t q) {
    out.insert_rank((q % k) * static_cast<std::uint64_t>(k) + q / k);
  });
  return out;
}

bool is_reflexive(const Relation& r) {
  if (r.arity() != 2) throw Error("reflexivity requires a binary relation");
  for (int a = 0; a < r.k(); ++a)
    if (!r.contains_rank(static_cast<std::uint64_t>(a) * r.k() + a)) return false;
  return true;
}

bool is_symmetric(const Relation& r) { return r == inverse(r); }

bool is_transitive(const Relation& r) {
  Relation rr = compose(r, r);
  return rr.subset_of(r);
}

bool is_equivalence(const Relation& r) {
  return is_reflexive(r) && is_symmetric(r) && is_transitive(r);
}

bool is_antisymmetric(const Relation& r) {
  if (r.arity() != 2) throw Error("antisymmetry requires a binary relation");
  int k = r.k();
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      if (r.contains_rank(static_cast<std::uint64_t>(a) * k + b) &&
          r.contains_rank(static_cast<std::uint64_t>(b) * k + a))
        return false;
  return true;
}

BoundedOrderCheck check_bounded_order(const Relation& r) {
  BoundedOrderCheck res;
  if (r.arity() != 2) {
    res.why = "not binary";
    return res;
  }
  if (!is_reflexive(r)) {
    res.why = "not reflexive";
    return res;
  }
  if (!is_antisymmetric(r)) {
    res.why = "not antisymmetric";
    return res;
  }
  if (!is_transitive(r)) {
    res.why = "not transitive";
    return res;
  }
  int k = r.k();
  for (int a = 0; a < k; ++a) {
    bool least = true, greatest = true;
    for (int b = 0; b < k; ++b) {
      if (!r.contains_rank(static_cast<std::uint64_t>(a) * k + b)) least = false;
      if (!r.contains_rank(static_cast<std::uint64_t>(b) * k + a)) greatest = false;
    }
    if (least && res.least < 0) res.least = a;
    if (greatest && res.greatest < 0) res.greatest = a;
  }
  if (res.least < 0) {
    res.why = "no least element";
    return res;
  }
  if (res.greatest < 0) {
    res.why = "no greatest element";
    return res;
  }
  res.ok = true;
  return res;
}

Relation repeats(int k, int h) {
  Relation out(k, h);
  std::vector<int> buf(h);
  for (std::uint64_t r = 0; r < out.space().size(); ++r) {
    out.space().unrank(r, buf);
    bool rep = false;
    for (int i = 0; i < h && !rep; ++i)
      for (int j = i + 1; j < h; ++j)
        if (buf[i] == buf[j]) {
          rep = true;
          break;
        }
    if (rep) out.insert_rank(r);
  }
  return out;
}

bool is_totally_reflexive(const Relation& r) {
  if (r.arity() < 2) throw Error("undefined for unary");
  return repeats(r.k(), r.arity()).subset_of(r);
}

bool is_totally_symmetric(const Relation& r) {
  if (r.arity() < 2) throw Error("undefined for unary");
  int h = r.arity();
  std::vector<int> buf(h), perm(h);
  bool ok = true;
  r.for_each_rank([&](std::uint64_t q) {
    if (!ok) return;
    r.space().unrank(q, buf);
    std::vector<int> sorted = buf;
    std::sort(sorted.begin(), sorted.end());
    do {
      if (!r.contains(sorted)) {
        ok = false;
        return;
      }
    } while (std::next_permutation(sorted.begin(), sorted.end()));
  });
  return ok;
}

std::vector<int> center(const Relation& r) {
  if (r.arity() < 2 || !is_totally_reflexive(r) || !is_totally_symmetric(r))
    throw Error("center undefined");
  int k = r.k(), h = r.arity();
  std::vector<int> result;
  TupleSpace rest(k, h - 1);
  std::vector<int> buf(h);
  for (int a = 0; a < k; ++a) {
    bool central = true;
    for (std::uint64_t q = 0; q < rest.size() && central; ++q) {
      buf[0] = a;
      rest.unrank(q, std::span<int>(buf).subspan(1));
      if (!r.contains(buf)) central = false;
    }
    if (central) result.push_back(a);
  }
  return result;
}

bool is_central(const Relation& r) {
  if (r.arity() == 1) {
    std::uint64_t n = r.size();
    return n > 0 && n < static_cast<std::uint64_t>(r.k());
  }
  if (!is_totally_reflexive(r) || !is_totally_symmetric(r)) return false;
  std::vector<int> c = center(r);
  return !c.empty() && c.size() < static_cast<std::size_t>(r.k());
}

Relation permute(const Relation& r, std::span<const int> sigma) {
  int h = r.arity();
  if (static_cast<int>(sigma.size()) != h) throw Error("invalid index permutation");
  std::vector<bool> seen(h, false);
  for (int s : sigma) {
    if (s < 0 || s >= h || seen[s]) throw Error("invalid index permutation");
    seen[s] = true;
  }
  Relation out(r.k(), h);
  std::vector<int> buf(h), img(h);
  r.for_each_rank([&](std::uint64_t q) {
    r.space().unrank(q, buf);
    for (int i = 0; i < h; ++i) img[i] = buf[sigma[i]];
    out.insert(img);
  });
  return out;
}

std::vector<std::vector<int>> index_permutations(int h) {
  std::vector<int> sigma(h);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

}  // namespace subclone
