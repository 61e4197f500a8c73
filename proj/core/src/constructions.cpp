#include "subclone/constructions.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace subclone {

namespace {

void check_same_domain(const Relation& rho, const Partition& theta) {
  if (rho.k() != theta.k()) throw Error("incompatible domains");
}

// Odometer over one representative per listed block, invoking fn(reps) until
// it returns true (found) or choices are exhausted.
bool any_rep_choice(const std::vector<const std::vector<int>*>& blocks,
                    const std::function<bool(const std::vector<int>&)>& fn) {
  std::vector<std::size_t> idx(blocks.size(), 0);
  std::vector<int> reps(blocks.size());
  for (;;) {
    for (std::size_t i = 0; i < blocks.size(); ++i) reps[i] = (*blocks[i])[idx[i]];
    if (fn(reps)) return true;
    std::size_t i = blocks.size();
    while (i > 0) {
      --i;
      if (++idx[i] < blocks[i]->size()) break;
      idx[i] = 0;
      if (i == 0) return false;
    }
    if (blocks.empty()) return false;
  }
}

}  // namespace

Relation eta(const Partition& theta, int h) {
  if (h < 2) throw Error("eta requires arity at least 2");
  int k = theta.k();
  Relation out(k, h);
  std::vector<int> buf(h);
  for (std::uint64_t r = 0; r < out.space().size(); ++r) {
    out.space().unrank(r, buf);
    if (theta.same_class(buf[0], buf[1])) out.insert_rank(r);
  }
  return out;
}

Relation rho_i_theta(const Relation& rho, const Partition& theta, int i) {
  check_same_domain(rho, theta);
  int h = rho.arity();
  if (i < 0 || i >= h) throw Error("index out of range");
  Relation out(rho.k(), h);
  std::vector<int> member(h), img(h);
  rho.for_each_rank([&](std::uint64_t q) {
    rho.space().unrank(q, member);
    // push the member's theta-saturation over the relaxed coordinates
    std::vector<const std::vector<int>*> blocks;
    for (int j = i; j < h; ++j) blocks.push_back(&theta.block(theta.class_of(member[j])));
    for (int j = 0; j < i; ++j) img[j] = member[j];
    any_rep_choice(blocks, [&](const std::vector<int>& reps) {
      for (int j = i; j < h; ++j) img[j] = reps[j - i];
      out.insert(img);
      return false;  // visit all choices
    });
  });
  return out;
}

Relation beta(const Relation& rho, const Partition& theta, int n) {
  check_same_domain(rho, theta);
  int h = rho.arity();
  if (n < 1 || n > h) throw Error("level out of range");
  if (n == 1) return rho_i_theta(rho, theta, 0);
  Relation base = rho_i_theta(rho, theta, n - 1);
  Relation out = Relation::full(rho.k(), h);
  for (const auto& sigma : index_permutations(h)) out &= permute(base, sigma);
  return out;
}

Relation varsigma(const Relation& rho, const Partition& theta) {
  return beta(rho, theta, 2);
}

Relation zeta(const Relation& rho, const Partition& theta) {
  check_same_domain(rho, theta);
  int h = rho.arity();
  if (h < 2) throw Error("zeta requires arity at least 2");
  int k = rho.k();
  Relation out(k, h);
  std::vector<int> a(h), pattern(h);
  for (std::uint64_t r = 0; r < out.space().size(); ++r) {
    out.space().unrank(r, a);
    std::vector<const std::vector<int>*> blocks;
    for (int i = 0; i < h; ++i) blocks.push_back(&theta.block(theta.class_of(a[i])));
    bool found = any_rep_choice(blocks, [&](const std::vector<int>& u) {
      for (int i = 0; i < h; ++i) {
        pattern[0] = a[i];
        int p = 1;
        for (int j = 0; j < h; ++j)
          if (j != i) pattern[p++] = u[j];
        if (!rho.contains(pattern)) return false;
      }
      return true;
    });
    if (found) out.insert_rank(r);
  }
  return out;
}

PowerMembership::PowerMembership(const Relation& rho) {
  int k = rho.k(), h = rho.arity();
  if (k > 20) throw Error("power membership table limited to k <= 20");
  ok_.assign(std::size_t{1} << k, 0);
  ok_[0] = 1;
  std::vector<int> elems;
  std::vector<int> tuple(h);
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << k); ++mask) {
    // antitone in the value set: any failing subset settles it
    std::uint32_t sub = mask;
    bool subs_ok = true;
    while (sub) {
      std::uint32_t bit = sub & -sub;
      if (!ok_[mask ^ bit]) {
        subs_ok = false;
        break;
      }
      sub ^= bit;
    }
    if (!subs_ok) continue;
    elems.clear();
    for (int v = 0; v < k; ++v)
      if (mask >> v & 1) elems.push_back(v);
    std::vector<std::size_t> idx(h, 0);
    bool all_in = true;
    for (;;) {
      for (int i = 0; i < h; ++i) tuple[i] = elems[idx[i]];
      if (!rho.contains(tuple)) {
        all_in = false;
        break;
      }
      int i = h;
      bool done = true;
      while (i > 0) {
        --i;
        if (++idx[i] < elems.size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
      if (done) break;
    }
    ok_[mask] = all_in ? 1 : 0;
  }
}

Relation zeta_extended(const Relation& rho, const Partition& theta, int l) {
  check_same_domain(rho, theta);
  int h = rho.arity();
  if (l < h) throw Error("extension arity below relation arity");
  int k = rho.k();
  PowerMembership power(rho);
  Relation out(k, l);
  std::vector<int> a(l);
  for (std::uint64_t r = 0; r < out.space().size(); ++r) {
    out.space().unrank(r, a);
    std::vector<const std::vector<int>*> blocks;
    for (int i = 0; i < l; ++i) blocks.push_back(&theta.block(theta.class_of(a[i])));
    bool found = any_rep_choice(blocks, [&](const std::vector<int>& u) {
      std::uint32_t base = 0;
      int cnt[32] = {0};
      for (int v : u) {
        base |= std::uint32_t{1} << v;
        ++cnt[v];
      }
      for (int i = 0; i < l; ++i) {
        std::uint32_t mask = base;
        if (cnt[u[i]] == 1) mask &= ~(std::uint32_t{1} << u[i]);
        mask |= std::uint32_t{1} << a[i];
        if (!power.contains_power(mask)) return false;
      }
      return true;
    });
    if (found) out.insert_rank(r);
  }
  return out;
}

Relation extended_family(const Relation& rho, const Partition& theta, int n, int l) {
  check_same_domain(rho, theta);
  int h = rho.arity();
  if (l <= h) throw Error("extension arity must exceed relation arity");
  if (n < 0 || n > h) throw Error("fixed-prefix length out of range");
  int k = rho.k();
  PowerMembership power(rho);
  Relation out(k, l);
  std::vector<int> a(l);
  for (std::uint64_t r = 0; r < out.space().size(); ++r) {
    out.space().unrank(r, a);
    std::uint32_t fixed = 0;
    for (int i = 0; i < n; ++i) fixed |= std::uint32_t{1} << a[i];
    std::vector<const std::vector<int>*> blocks;
    for (int i = n; i < l; ++i) blocks.push_back(&theta.block(theta.class_of(a[i])));
    bool found = any_rep_choice(blocks, [&](const std::vector<int>& u) {
      std::uint32_t mask = fixed;
      for (int v : u) mask |= std::uint32_t{1} << v;
      return power.contains_power(mask);
    });
    if (found) out.insert_rank(r);
  }
  return out;
}

Relation beta_extended(const Relation& rho, const Partition& theta, int n, int l) {
  if (n < 2) throw Error("level out of range");
  if (l > 7) throw Error("extension arity exceeds desk-scale budget");
  Relation base = extended_family(rho, theta, n - 1, l);
  Relation out = Relation::full(rho.k(), l);
  for (const auto& sigma : index_permutations(l)) out &= permute(base, sigma);
  return out;
}

Relation varsigma_extended(const Relation& rho, const Partition& theta, int l) {
  return beta_extended(rho, theta, 2, l);
}

Relation gamma_prime(const Relation& rho, const Partition& theta,
                     const std::vector<int>& shape) {
  check_same_domain(rho, theta);
  int h = rho.arity();
  int t = theta.block_count();
  int n = static_cast<int>(shape.size());
  if (n < 1 || n > t) throw Error("inconsistent shape");
  for (int i = 0; i < n; ++i) {
    if (shape[i] < 1) throw Error("inconsistent shape");
    if (i > 0 && shape[i] >= shape[i - 1]) throw Error("inconsistent shape");
  }
  int max_block = 0;
  for (const auto& b : theta.blocks()) max_block = std::max(max_block, (int)b.size());
  if (n == 1) {
    if (shape[0] != max_block) throw Error("inconsistent shape");
  } else {
    for (const auto& b : theta.blocks()) {
      int s = static_cast<int>(b.size());
      bool listed = std::find(shape.begin(), shape.end(), s) != shape.end();
      if (!(s <= shape.back() || listed)) throw Error("inconsistent shape");
    }
  }
  int m = std::accumulate(shape.begin(), shape.end(), 0);
  int arity = m + t - n;
  int k = rho.k();
  PowerMembership power(rho);
  Relation out(k, arity);

  // segment start offsets
  std::vector<int> seg_start(n + 1, 0);
  for (int s = 0; s < n; ++s) seg_start[s + 1] = seg_start[s] + shape[s];

  std::vector<int> a(arity);
  for (std::uint64_t r = 0; r < out.space().size(); ++r) {
    out.space().unrank(r, a);
    bool segments_ok = true;
    for (int s = 0; s < n && segments_ok; ++s)
      for (int i = seg_start[s] + 1; i < seg_start[s + 1]; ++i)
        if (!theta.same_class(a[i], a[seg_start[s]])) {
          segments_ok = false;
          break;
        }
    if (!segments_ok) continue;

    std::vector<const std::vector<int>*> blocks;
    for (int i = m; i < arity; ++i) blocks.push_back(&theta.block(theta.class_of(a[i])));
    bool found = any_rep_choice(blocks, [&](const std::vector<int>& u) {
      std::uint32_t reps_mask = 0;
      for (int v : u) reps_mask |= std::uint32_t{1} << v;
      // one index per segment
      std::vector<int> sel(n, 0);
      for (;;) {
        std::uint32_t mask = reps_mask;
        for (int s = 0; s < n; ++s) mask |= std::uint32_t{1} << a[seg_start[s] + sel[s]];
        if (!power.contains_power(mask)) return false;
        int s = n;
        bool done = true;
        while (s > 0) {
          --s;
          if (++sel[s] < shape[s]) {
            done = false;
            break;
          }
          sel[s] = 0;
        }
        if (done) return true;
      }
    });
    if (found) out.insert_rank(r);
  }
  return out;
}

void DiagonalSpec::validate() const {
  if (h < 1) throw Error("malformed diagonal spec");
  std::vector<int> owner(h, -1);
  for (std::size_t b = 0; b < eps1.size(); ++b) {
    if (eps1[b].empty()) throw Error("malformed diagonal spec");
    for (int i : eps1[b]) {
      if (i < 0 || i >= h || owner[i] != -1) throw Error("malformed diagonal spec");
      owner[i] = static_cast<int>(b);
    }
  }
  for (int i = 0; i < h; ++i)
    if (owner[i] == -1) throw Error("malformed diagonal spec");
  std::vector<int> minima = eps1_minima();
  std::vector<int> seen;
  for (const auto& b : eps2) {
    if (b.empty()) throw Error("malformed diagonal spec");
    for (int i : b) seen.push_back(i);
  }
  std::sort(seen.begin(), seen.end());
  std::vector<int> sorted_min = minima;
  std::sort(sorted_min.begin(), sorted_min.end());
  if (seen != sorted_min) throw Error("malformed diagonal spec");
}

std::vector<int> DiagonalSpec::eps1_minima() const {
  std::vector<int> minima;
  minima.reserve(eps1.size());
  for (const auto& b : eps1) minima.push_back(*std::min_element(b.begin(), b.end()));
  return minima;
}

namespace {
std::vector<int> index_class_map(int h, const std::vector<std::vector<int>>& blocks) {
  std::vector<int> cls(h, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (int i : blocks[b]) cls[i] = static_cast<int>(b);
  return cls;
}
}  // namespace

Relation diagonal(const DiagonalSpec& spec, const Partition& theta) {
  spec.validate();
  int h = spec.h, k = theta.k();
  std::vector<int> cls1 = index_class_map(h, spec.eps1);
  std::vector<int> cls2(h, -1);
  for (std::size_t b = 0; b < spec.eps2.size(); ++b)
    for (int i : spec.eps2[b]) cls2[i] = static_cast<int>(b);

  Relation out(k, h);
  std::vector<int> a(h);
  for (std::uint64_t r = 0; r < out.space().size(); ++r) {
    out.space().unrank(r, a);
    bool ok = true;
    for (int i = 0; i < h && ok; ++i)
      for (int j = i + 1; j < h; ++j) {
        if (cls1[i] == cls1[j] && a[i] != a[j]) {
          ok = false;
          break;
        }
        if (cls2[i] >= 0 && cls2[i] == cls2[j] && !theta.same_class(a[i], a[j])) {
          ok = false;
          break;
        }
      }
    if (ok) out.insert_rank(r);
  }
  return out;
}

std::optional<DiagonalSpec> recognize_diagonal(const Relation& tau, const Partition& theta) {
  if (tau.k() != theta.k()) throw Error("incompatible domains");
  if (tau.is_empty()) return std::nullopt;
  int h = tau.arity();
  std::vector<std::vector<bool>> eq(h, std::vector<bool>(h, true));
  std::vector<std::vector<bool>> rel(h, std::vector<bool>(h, true));
  std::vector<int> a(h);
  tau.for_each_rank([&](std::uint64_t r) {
    tau.space().unrank(r, a);
    for (int i = 0; i < h; ++i)
      for (int j = i + 1; j < h; ++j) {
        if (a[i] != a[j]) eq[i][j] = eq[j][i] = false;
        if (!theta.same_class(a[i], a[j])) rel[i][j] = rel[j][i] = false;
      }
  });
  DiagonalSpec spec;
  spec.h = h;
  std::vector<bool> placed(h, false);
  for (int i = 0; i < h; ++i) {
    if (placed[i]) continue;
    std::vector<int> block;
    for (int j = i; j < h; ++j)
      if (eq[i][j] && !placed[j]) {
        block.push_back(j);
        placed[j] = true;
      }
    spec.eps1.push_back(std::move(block));
  }
  std::vector<int> minima = spec.eps1_minima();
  std::vector<bool> placed2(h, false);
  for (int mi : minima) {
    if (placed2[mi]) continue;
    std::vector<int> block;
    for (int mj : minima)
      if (rel[mi][mj] && !placed2[mj]) {
        block.push_back(mj);
        placed2[mj] = true;
      }
    spec.eps2.push_back(std::move(block));
  }
  if (diagonal(spec, theta) == tau) return spec;
  return std::nullopt;
}

DiagonalSpec segment_diagonal_spec(const Partition& theta, const std::vector<int>& shape) {
  int t = theta.block_count();
  int n = static_cast<int>(shape.size());
  int m = std::accumulate(shape.begin(), shape.end(), 0);
  DiagonalSpec spec;
  spec.h = m + t - n;
  for (int i = 0; i < spec.h; ++i) spec.eps1.push_back({i});
  int pos = 0;
  for (int s = 0; s < n; ++s) {
    std::vector<int> block;
    for (int i = 0; i < shape[s]; ++i) block.push_back(pos++);
    spec.eps2.push_back(std::move(block));
  }
  for (int i = m; i < spec.h; ++i) spec.eps2.push_back({i});
  spec.validate();
  return spec;
}

RegularFamily::RegularFamily(int h, std::vector<Partition> members)
    : h_(h), members_(std::move(members)) {
  std::string why;
  if (!is_regular_family(h_, members_, &why)) throw Error("invalid family: " + why);
}

bool is_regular_family(int h, const std::vector<Partition>& members, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (h < 3) return fail("arity must be at least 3");
  if (members.empty()) return fail("family is empty");
  int k = members.front().k();
  for (const auto& p : members) {
    if (p.k() != k) return fail("members live on different domains");
    if (p.block_count() != h) return fail("member does not have exactly h blocks");
  }
  // one block per member, intersection must be nonempty
  std::size_t m = members.size();
  double combos = std::pow(static_cast<double>(h), static_cast<double>(m));
  if (combos > 1e6) return fail("cross-intersection check exceeds budget");
  std::vector<int> choice(m, 0);
  for (;;) {
    bool nonempty = false;
    for (int x = 0; x < k && !nonempty; ++x) {
      bool in_all = true;
      for (std::size_t i = 0; i < m; ++i)
        if (members[i].class_of(x) != choice[i]) {
          in_all = false;
          break;
        }
      nonempty = in_all;
    }
    if (!nonempty) return fail("empty cross-intersection of member blocks");
    std::size_t i = m;
    bool done = true;
    while (i > 0) {
      --i;
      if (++choice[i] < h) {
        done = false;
        break;
      }
      choice[i] = 0;
    }
    if (done) break;
  }
  if (why) why->clear();
  return true;
}

Relation h_regular(const RegularFamily& family) {
  int k = family.k(), h = family.h();
  Relation out(k, h);
  std::vector<int> a(h);
  for (std::uint64_t r = 0; r < out.space().size(); ++r) {
    out.space().unrank(r, a);
    bool all_members = true;
    for (const auto& p : family.members()) {
      bool collision = false;
      for (int i = 0; i < h && !collision; ++i)
        for (int j = i + 1; j < h; ++j)
          if (p.same_class(a[i], a[j])) {
            collision = true;
            break;
          }
      if (!collision) {
        all_members = false;
        break;
      }
    }
    if (all_members) out.insert_rank(r);
  }
  return out;
}

Relation quotient_by(const Relation& r, const Partition& theta) {
  if (r.k() != theta.k()) throw Error("incompatible domains");
  int t = theta.block_count();
  if (t < 2) throw Error("quotient domain too small");
  Relation out(t, r.arity());
  std::vector<int> a(r.arity()), img(r.arity());
  r.for_each_rank([&](std::uint64_t q) {
    r.space().unrank(q, a);
    for (int i = 0; i < r.arity(); ++i) img[i] = theta.class_of(a[i]);
    out.insert(img);
  });
  return out;
}

Relation preimage_under(const Relation& r_on_classes, const Partition& theta) {
  if (r_on_classes.k() != theta.block_count())
    throw Error("relation does not live on the class domain");
  int k = theta.k();
  Relation out(k, r_on_classes.arity());
  std::vector<int> a(r_on_classes.arity()), img(r_on_classes.arity());
  for (std::uint64_t q = 0; q < out.space().size(); ++q) {
    out.space().unrank(q, a);
    for (int i = 0; i < r_on_classes.arity(); ++i) img[i] = theta.class_of(a[i]);
    if (r_on_classes.contains(img)) out.insert_rank(q);
  }
  return out;
}

Relation affine(const GroupTable& g) {
  int k = g.k();
  Relation out(k, 4);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      int sum = g.add(a, b);
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d)
          if (g.add(c, d) == sum) {
            int t[4] = {a, b, c, d};
            out.insert(t);
          }
    }
  return out;
}

Relation alpha_1(const Relation& alpha, const Partition& theta) {
  if (alpha.arity() != 4) throw Error("affine relation must be 4-ary");
  if (alpha.k() != theta.k()) throw Error("incompatible domains");
  Relation out(alpha.k(), 4);
  std::vector<int> a(4);
  alpha.for_each_rank([&](std::uint64_t r) {
    alpha.space().unrank(r, a);
    if (theta.same_class(a[0], a[1]) && theta.same_class(a[0], a[2]) &&
        theta.same_class(a[0], a[3]))
      out.insert_rank(r);
  });
  return out;
}

Relation graph(const Permutation& p) {
  Relation out(p.k(), 2);
  for (int x = 0; x < p.k(); ++x)
    out.insert_rank(static_cast<std::uint64_t>(x) * p.k() + p(x));
  return out;
}

}  // namespace subclone
