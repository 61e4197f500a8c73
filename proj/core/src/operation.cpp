#include "subclone/operation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace subclone {

Operation::Operation(int k, int arity, std::vector<std::uint8_t> table)
    : space_(k, arity), table_(std::move(table)) {
  if (table_.size() != space_.size()) throw Error("operation table has wrong size");
  for (std::uint8_t v : table_)
    if (v >= k) throw Error("operation value out of domain");
}

Operation Operation::from_function(int k, int arity,
                                   const std::function<int(std::span<const int>)>& f) {
  TupleSpace space(k, arity);
  std::vector<std::uint8_t> table(space.size());
  std::vector<int> args(arity);
  for (std::uint64_t r = 0; r < space.size(); ++r) {
    space.unrank(r, args);
    int v = f(args);
    if (v < 0 || v >= k) throw Error("operation value out of domain");
    table[r] = static_cast<std::uint8_t>(v);
  }
  return Operation(k, arity, std::move(table));
}

Operation Operation::projection(int k, int arity, int index) {
  if (index < 0 || index >= arity) throw Error("projection index out of range");
  return from_function(k, arity, [index](std::span<const int> a) { return a[index]; });
}

Operation Operation::constant(int k, int arity, int value) {
  if (value < 0 || value >= k) throw Error("constant out of domain");
  std::vector<std::uint8_t> table(TupleSpace(k, arity).size(),
                                  static_cast<std::uint8_t>(value));
  return Operation(k, arity, std::move(table));
}

Operation Operation::unary(int k, const std::vector<int>& images) {
  if (static_cast<int>(images.size()) != k) throw Error("unary table has wrong size");
  std::vector<std::uint8_t> table(k);
  for (int i = 0; i < k; ++i) {
    if (images[i] < 0 || images[i] >= k) throw Error("operation value out of domain");
    table[i] = static_cast<std::uint8_t>(images[i]);
  }
  return Operation(k, 1, std::move(table));
}

namespace {

struct ColumnData {
  // members[row][idx] = component `row` of the idx-th member tuple of r
  std::vector<std::vector<std::uint8_t>> members;
  std::uint32_t count = 0;
};

ColumnData decode_members(const Relation& r) {
  ColumnData d;
  int h = r.arity();
  d.count = static_cast<std::uint32_t>(r.size());
  d.members.assign(h, std::vector<std::uint8_t>());
  for (auto& v : d.members) v.reserve(d.count);
  std::vector<int> buf(h);
  r.for_each_rank([&](std::uint64_t q) {
    r.space().unrank(q, buf);
    for (int row = 0; row < h; ++row)
      d.members[row].push_back(static_cast<std::uint8_t>(buf[row]));
  });
  return d;
}

// Scans column combinations in [first, last) of the first index, ascending,
// and records the least violating combo rank. Stops early once the global
// best is below anything this range can still produce.
void scan_range(const Operation& f, const Relation& r, const ColumnData& d,
                std::uint32_t first, std::uint32_t last,
                std::atomic<std::uint64_t>& best) {
  const int n = f.arity();
  const int h = r.arity();
  const int k = f.k();
  const std::uint32_t m = d.count;
  const std::uint8_t* table = f.table().data();

  std::vector<std::uint32_t> c(n, 0);
  std::vector<std::uint64_t> pref(h, 0);
  std::vector<std::uint64_t> weight(n);  // weight[i] = m^(n-1-i)
  weight[n - 1] = 1;
  for (int i = n - 2; i >= 0; --i) weight[i] = weight[i + 1] * m;

  if (n == 1) {
    for (std::uint32_t c0 = first; c0 < last; ++c0) {
      if (best.load(std::memory_order_relaxed) < c0) return;
      std::uint64_t out_rank = 0;
      for (int row = 0; row < h; ++row)
        out_rank = out_rank * k + table[d.members[row][c0]];
      if (!r.contains_rank(out_rank)) {
        std::uint64_t cur = best.load(std::memory_order_relaxed);
        std::uint64_t combo = c0;
        while (combo < cur &&
               !best.compare_exchange_weak(cur, combo, std::memory_order_relaxed)) {
        }
        return;
      }
    }
    return;
  }

  for (std::uint32_t c0 = first; c0 < last; ++c0) {
    if (best.load(std::memory_order_relaxed) < static_cast<std::uint64_t>(c0) * weight[0])
      return;
    c.assign(n, 0);
    c[0] = c0;
    bool done = false;
    while (!done) {
      // prefix code over the first n-1 columns, per row
      for (int row = 0; row < h; ++row) {
        std::uint64_t p = 0;
        for (int i = 0; i < n - 1; ++i) p = p * k + d.members[row][c[i]];
        pref[row] = p;
      }
      std::uint64_t combo_base = 0;
      for (int i = 0; i < n - 1; ++i) combo_base += static_cast<std::uint64_t>(c[i]) * weight[i];

      for (std::uint32_t cn = 0; cn < m; ++cn) {
        std::uint64_t out_rank = 0;
        for (int row = 0; row < h; ++row)
          out_rank = out_rank * k + table[pref[row] * k + d.members[row][cn]];
        if (!r.contains_rank(out_rank)) {
          std::uint64_t combo = combo_base + cn;
          std::uint64_t cur = best.load(std::memory_order_relaxed);
          while (combo < cur &&
                 !best.compare_exchange_weak(cur, combo, std::memory_order_relaxed)) {
          }
          return;  // ascending scan: nothing smaller left in this range
        }
      }

      // advance the odometer over columns 1..n-2 (c0 fixed, cn handled above)
      done = true;
      for (int i = n - 2; i >= 1; --i) {
        if (++c[i] < m) {
          std::fill(c.begin() + i + 1, c.end(), 0);
          done = false;
          break;
        }
      }
      if (n <= 2) done = true;
      if (!done && best.load(std::memory_order_relaxed) <
                       static_cast<std::uint64_t>(c0) * weight[0])
        return;
    }
  }
}

}  // namespace

PreservationScan scan_preservation(const Operation& f, const Relation& r, int threads) {
  if (f.k() != r.k()) throw Error("incompatible domains");
  PreservationScan result;
  ColumnData d = decode_members(r);
  if (d.count == 0) return result;  // no columns to pick: vacuously preserved

  const int n = f.arity();
  double total_log = n * std::log2(static_cast<double>(d.count));
  if (total_log > 62) throw Error("preservation scan exceeds size limit");

  std::atomic<std::uint64_t> best{~std::uint64_t{0}};
  threads = std::max(1, std::min({threads, static_cast<int>(d.count), 256}));
  if (threads == 1) {
    scan_range(f, r, d, 0, d.count, best);
  } else {
    std::vector<std::thread> pool;
    std::uint32_t chunk = (d.count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::uint32_t lo = t * chunk;
      std::uint32_t hi = std::min(d.count, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] { scan_range(f, r, d, lo, hi, best); });
    }
    for (auto& th : pool) th.join();
  }

  std::uint64_t b = best.load();
  if (b != ~std::uint64_t{0}) {
    result.preserved = false;
    result.violation.resize(n);
    for (int i = n - 1; i >= 0; --i) {
      result.violation[i] = static_cast<std::uint32_t>(b % d.count);
      b /= d.count;
    }
  }
  return result;
}

bool preserves(const Operation& f, const Relation& r) {
  return scan_preservation(f, r, 1).preserved;
}

Permutation::Permutation(int k, std::vector<int> images) : k_(k), images_(std::move(images)) {
  if (k < 2) throw Error("domain size must be at least 2");
  if (static_cast<int>(images_.size()) != k) throw Error("permutation table has wrong size");
  std::vector<bool> seen(k, false);
  for (int v : images_) {
    if (v < 0 || v >= k || seen[v]) throw Error("not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(int k) {
  std::vector<int> img(k);
  for (int i = 0; i < k; ++i) img[i] = i;
  return Permutation(k, std::move(img));
}

Permutation Permutation::from_cycles(int k, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> img(k);
  for (int i = 0; i < k; ++i) img[i] = i;
  std::vector<bool> used(k, false);
  for (const auto& cyc : cycles) {
    for (int x : cyc) {
      if (x < 0 || x >= k) throw Error("cycle element out of domain");
      if (used[x]) throw Error("element repeated across cycles");
      used[x] = true;
    }
    for (std::size_t i = 0; i < cyc.size(); ++i)
      img[cyc[i]] = cyc[(i + 1) % cyc.size()];
  }
  return Permutation(k, std::move(img));
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(k_, false);
  for (int a = 0; a < k_; ++a) {
    if (seen[a]) continue;
    std::vector<int> cyc;
    int x = a;
    do {
      cyc.push_back(x);
      seen[x] = true;
      x = images_[x];
    } while (x != a);
    out.push_back(std::move(cyc));
  }
  return out;
}

Permutation Permutation::inverse() const {
  std::vector<int> img(k_);
  for (int i = 0; i < k_; ++i) img[images_[i]] = i;
  return Permutation(k_, std::move(img));
}

Operation Permutation::as_operation() const { return Operation::unary(k_, images_); }

namespace {
bool is_prime_number(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}
}  // namespace

bool is_prime_permutation(const Permutation& p) {
  auto cycles = p.cycles();
  std::size_t len = cycles.front().size();
  for (const auto& c : cycles)
    if (c.size() != len) return false;
  return is_prime_number(static_cast<int>(len));
}

GroupTable::GroupTable(Operation add, int zero) : add_(std::move(add)), zero_(zero) {
  if (add_.arity() != 2) throw Error("group addition must be binary");
  int k = add_.k();
  if (zero < 0 || zero >= k) throw Error("group zero out of domain");
  for (int a = 0; a < k; ++a) {
    if (this->add(zero, a) != a || this->add(a, zero) != a)
      throw Error("group zero is not an identity");
  }
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      if (this->add(a, b) != this->add(b, a)) throw Error("group is not abelian");
      for (int c = 0; c < k; ++c)
        if (this->add(this->add(a, b), c) != this->add(a, this->add(b, c)))
          throw Error("group addition is not associative");
    }
  for (int a = 0; a < k; ++a) {
    bool inv = false;
    for (int b = 0; b < k && !inv; ++b)
      if (this->add(a, b) == zero_) inv = true;
    if (!inv) throw Error("group element has no inverse");
  }
}

int GroupTable::order_of(int a) const {
  int x = a, n = 1;
  while (x != zero_) {
    x = add(x, a);
    ++n;
    if (n > k()) throw Error("group order computation diverged");
  }
  return n;
}

std::optional<int> GroupTable::elementary_prime() const {
  std::optional<int> p;
  for (int a = 0; a < k(); ++a) {
    if (a == zero_) continue;
    int o = order_of(a);
    if (!p) {
      if (!is_prime_number(o)) return std::nullopt;
      p = o;
    } else if (o != *p) {
      return std::nullopt;
    }
  }
  return p;
}

}  // namespace subclone
