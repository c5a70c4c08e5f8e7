#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "mgibbs/error.hpp"
#include "mgibbs/numeric.hpp"
#include "mgibbs/parallel.hpp"

namespace mgibbs {

using SubsetMask = std::uint32_t;

inline constexpr int kDefaultGroundCap = 16;

/// A real functional on all subsets of a ground set {0..n-1}, indexed by bitmask.
class ConfigFunctional {
 public:
  ConfigFunctional() : ConfigFunctional(0) {}

  explicit ConfigFunctional(int ground_size, int cap = kDefaultGroundCap) : n_(ground_size) {
    require(ground_size >= 0, ErrorKind::invalid_argument, "negative ground size");
    require(ground_size <= cap && ground_size <= 24, ErrorKind::size_limit, "ground configuration above cap");
    values_.assign(std::size_t{1} << ground_size, 0.0);
  }

  /// The unit 1*: 1 at the empty set, 0 elsewhere.
  static ConfigFunctional unit(int ground_size) {
    ConfigFunctional f(ground_size);
    f.values_[0] = 1.0;
    return f;
  }

  static ConfigFunctional indicator(int ground_size, SubsetMask mask) {
    ConfigFunctional f(ground_size);
    f[mask] = 1.0;
    return f;
  }

  int ground_size() const { return n_; }
  SubsetMask full() const { return static_cast<SubsetMask>(values_.size() - 1); }
  std::size_t table_size() const { return values_.size(); }

  double& operator[](SubsetMask s) { return values_[s]; }
  double operator[](SubsetMask s) const { return values_[s]; }
  const std::vector<double>& values() const { return values_; }

  ConfigFunctional operator-() const {
    ConfigFunctional r = *this;
    for (double& v : r.values_) v = -v;
    return r;
  }

  ConfigFunctional& operator+=(const ConfigFunctional& o) {
    require(o.n_ == n_, ErrorKind::ground_mismatch, "functionals live on different grounds");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }

  ConfigFunctional& operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
  }

  bool operator==(const ConfigFunctional&) const = default;

 private:
  int n_;
  std::vector<double> values_;
};

namespace detail {

inline constexpr std::size_t kParallelStarThreshold = std::size_t{1} << 12;

/// Fills out[s] = entry(s) for every mask, in parallel chunks for large tables.
template <class Entry>
void fill_table(ConfigFunctional& out, Entry&& entry) {
  const std::size_t size = out.table_size();
  if (size < kParallelStarThreshold) {
    for (std::size_t s = 0; s < size; ++s) out[static_cast<SubsetMask>(s)] = entry(static_cast<SubsetMask>(s));
    return;
  }
  const std::size_t chunk = 1024;
  const std::size_t chunks = (size + chunk - 1) / chunk;
  auto parts = run_chunks<std::vector<double>>(chunks, 0, [&](std::size_t c) {
    std::vector<double> part;
    for (std::size_t s = c * chunk; s < std::min(size, (c + 1) * chunk); ++s) {
      part.push_back(entry(static_cast<SubsetMask>(s)));
    }
    return part;
  });
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t i = 0; i < parts[c].size(); ++i) out[static_cast<SubsetMask>(c * chunk + i)] = parts[c][i];
  }
}

inline SubsetMask lowest_bit(SubsetMask s) { return s & (~s + 1); }

}  // namespace detail

/// (a*b)(S) = sum over T subset of S of a(T) b(S \ T).
inline ConfigFunctional star_mul(const ConfigFunctional& a, const ConfigFunctional& b) {
  require(a.ground_size() == b.ground_size(), ErrorKind::ground_mismatch, "functionals live on different grounds");
  ConfigFunctional out(a.ground_size());
  detail::fill_table(out, [&](SubsetMask s) {
    CompensatedSum acc;
    SubsetMask t = s;
    for (;;) {
      acc += a[t] * b[s ^ t];
      if (t == 0) break;
      t = (t - 1) & s;
    }
    return acc.value();
  });
  return out;
}

/// exp* by the anchored recursion g(S) = sum over T subset of S containing min(S) of psi(T) g(S \ T).
inline ConfigFunctional star_exp(const ConfigFunctional& psi) {
  require(psi[0] == 0.0, ErrorKind::not_in_ideal, "exp* needs psi(empty) = 0");
  ConfigFunctional g(psi.ground_size());
  g[0] = 1.0;
  for (SubsetMask s = 1; s <= g.full() && s != 0; ++s) {
    const SubsetMask anchor = detail::lowest_bit(s);
    const SubsetMask rest = s ^ anchor;
    CompensatedSum acc;
    SubsetMask t = rest;
    for (;;) {
      acc += psi[t | anchor] * g[rest ^ t];
      if (t == 0) break;
      t = (t - 1) & rest;
    }
    g[s] = acc.value();
    if (s == g.full()) break;
  }
  return g;
}

/// ln*: the unique psi with psi(empty) = 0 and exp* psi = f.
inline ConfigFunctional star_log(const ConfigFunctional& f) {
  require(f[0] == 1.0, ErrorKind::not_normalized, "ln* needs f(empty) = 1");
  ConfigFunctional psi(f.ground_size());
  for (SubsetMask s = 1; s <= psi.full() && s != 0; ++s) {
    const SubsetMask anchor = detail::lowest_bit(s);
    const SubsetMask rest = s ^ anchor;
    CompensatedSum acc(f[s]);
    // Proper subsets T of `rest`; T = rest is the term being solved for.
    SubsetMask t = (rest - 1) & rest;
    if (rest != 0) {
      for (;;) {
        acc += -psi[t | anchor] * f[rest ^ t];
        if (t == 0) break;
        t = (t - 1) & rest;
      }
    }
    psi[s] = acc.value();
    if (s == psi.full()) break;
  }
  return psi;
}

/// (D_A psi)(S) = psi(S u A) when S and A are disjoint, else 0.
inline ConfigFunctional d_shift(const ConfigFunctional& psi, SubsetMask attach) {
  require(attach <= psi.full(), ErrorKind::invalid_argument, "attach set outside the ground");
  ConfigFunctional out(psi.ground_size());
  for (SubsetMask s = 0;; ++s) {
    out[s] = (s & attach) ? 0.0 : psi[s | attach];
    if (s == out.full()) break;
  }
  return out;
}

/// Restriction of a functional to the sub-ground `mask`, reindexed to 0..popcount-1.
inline ConfigFunctional restrict_ground(const ConfigFunctional& psi, SubsetMask mask) {
  const int m = std::popcount(mask);
  ConfigFunctional out(m);
  std::vector<SubsetMask> bits;
  for (SubsetMask b = mask; b != 0; b &= b - 1) bits.push_back(detail::lowest_bit(b));
  for (SubsetMask local = 0;; ++local) {
    SubsetMask global = 0;
    for (int i = 0; i < m; ++i) {
      if (local & (1u << i)) global |= bits[static_cast<std::size_t>(i)];
    }
    out[local] = psi[global];
    if (local == out.full()) break;
  }
  return out;
}

}  // namespace mgibbs
