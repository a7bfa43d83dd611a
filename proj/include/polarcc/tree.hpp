#pragma once

#include "polarcc/convolve.hpp"
#include "polarcc/functionals.hpp"

#include <cstdint>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarcc {

/// Identifies one synthetic channel: a height-n tree whose level j applies a
/// check (bit 0) or variable (bit 1) self-convolution.  The bit string is the
/// binary expansion of the channel index, most significant bit first, and the
/// leading bit selects the convolution applied first, directly above the
/// channel observations.
struct TreeType {
  int n = 0;
  std::uint64_t index = 0;

  TreeType() = default;
  TreeType(int height, std::uint64_t idx) : n(height), index(idx) {
    if (height < 0 || height > 62) throw std::invalid_argument("bad tree height");
    if (idx >> height) throw std::invalid_argument("tree index out of range");
  }

  static TreeType from_bits(const std::string& bits) {
    TreeType t;
    t.n = static_cast<int>(bits.size());
    if (t.n > 62) throw std::invalid_argument("bad tree height");
    for (char c : bits) {
      if (c != '0' && c != '1') throw std::invalid_argument("tree type must be a bit string");
      t.index = (t.index << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return t;
  }

  /// j-th level bit, j = 1..n (j = 1 is applied first).
  int bit(int j) const { return static_cast<int>((index >> (n - j)) & 1u); }

  std::string bits() const {
    std::string s(static_cast<size_t>(n), '0');
    for (int j = 1; j <= n; ++j) s[static_cast<size_t>(j - 1)] = char('0' + bit(j));
    return s;
  }
};

/// Capacity and Bhattacharyya values of all 2^n tree channels, in index order.
struct TreeProfile {
  int n = 0;
  QuantizerMode mode;
  Eigen::ArrayXd capacity;
  Eigen::ArrayXd bhattacharyya;

  Eigen::Index size() const { return capacity.size(); }
};

/// Density of the single tree channel of type sigma.
template <typename Scalar>
BasicDensity<Scalar> evaluate_tree_channel(const BasicDensity<Scalar>& w,
                                           const TreeType& sigma,
                                           const QuantizerMode& mode) {
  BasicDensity<Scalar> d = w;
  for (int j = 1; j <= sigma.n; ++j)
    d = conv_binned(d, d, sigma.bit(j) ? ConvKind::Variable : ConvKind::Check, mode);
  return d;
}

namespace detail {

// Shared-prefix recursion: 2(2^n - 1) convolutions total instead of n*2^n.
// Each node writes its functionals at a fixed offset, so results do not
// depend on the execution schedule.  The subtree below a check child is
// evaluated concurrently while the variable child is expanded in place.
inline void profile_recurse(const Density& d, int depth, std::uint64_t prefix,
                            int spawn, const QuantizerMode& mode,
                            std::vector<TreeProfile>& levels) {
  levels[static_cast<size_t>(depth)].capacity[static_cast<Eigen::Index>(prefix)] =
      capacity(d);
  levels[static_cast<size_t>(depth)].bhattacharyya[static_cast<Eigen::Index>(prefix)] =
      bhattacharyya(d);
  if (depth == levels.back().n) return;
  Density child0 = conv_binned(d, d, ConvKind::Check, mode);
  Density child1 = conv_binned(d, d, ConvKind::Variable, mode);
  if (spawn > 0) {
    auto fut = std::async(std::launch::async, [c0 = std::move(child0), depth, prefix,
                                               spawn, &mode, &levels]() {
      profile_recurse(c0, depth + 1, prefix << 1, spawn - 1, mode, levels);
    });
    profile_recurse(child1, depth + 1, (prefix << 1) | 1u, spawn - 1, mode, levels);
    fut.get();
  } else {
    profile_recurse(child0, depth + 1, prefix << 1, 0, mode, levels);
    profile_recurse(child1, depth + 1, (prefix << 1) | 1u, 0, mode, levels);
  }
}

inline int spawn_depth(int threads) {
  int d = 0;
  while ((1 << d) < threads && d < 6) ++d;
  return d;
}

}  // namespace detail

/// Profiles of every level 0..n of the evolution tree in one pass.
inline std::vector<TreeProfile> evaluate_levels(const Density& w, int n,
                                                const QuantizerMode& mode,
                                                int threads = 1) {
  if (n < 0 || n > 30) throw std::invalid_argument("bad tree height");
  std::vector<TreeProfile> levels(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    levels[static_cast<size_t>(k)].n = k;
    levels[static_cast<size_t>(k)].mode = mode;
    levels[static_cast<size_t>(k)].capacity.resize(Eigen::Index(1) << k);
    levels[static_cast<size_t>(k)].bhattacharyya.resize(Eigen::Index(1) << k);
  }
  levels.back().n = n;
  detail::profile_recurse(w, 0, 0, detail::spawn_depth(threads), mode, levels);
  return levels;
}

/// Profile of all 2^n tree channels at height n.
inline TreeProfile evaluate_all(const Density& w, int n, const QuantizerMode& mode,
                                int threads = 1) {
  auto levels = evaluate_levels(w, n, mode, threads);
  return std::move(levels.back());
}

/// Closed-form fast path for erasure channels: the erasure probability obeys
/// e -> 2e - e^2 (check) and e -> e^2 (variable); Z = e and I = 1 - e exactly.
inline TreeProfile bec_tree_profile(double eps, int n) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("erasure probability out of [0,1]");
  if (n < 0 || n > 30) throw std::invalid_argument("bad tree height");
  Eigen::ArrayXd e(1);
  e[0] = eps;
  for (int k = 0; k < n; ++k) {
    Eigen::ArrayXd next(e.size() * 2);
    for (Eigen::Index s = 0; s < e.size(); ++s) {
      const double known = 1.0 - e[s];
      next[2 * s] = 1.0 - known * known;  // erased unless both observations known
      next[2 * s + 1] = e[s] * e[s];      // erased only if both are erased
    }
    e.swap(next);
  }
  TreeProfile p;
  p.n = n;
  p.mode = QuantizerMode::exact();
  p.bhattacharyya = e;
  p.capacity = 1.0 - e;
  return p;
}

/// Fraction of indices whose capacity lies in the closed band [delta, 1-delta].
inline double polarization_fraction(const TreeProfile& profile, double delta) {
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("band parameter out of (0,1/2)");
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < profile.size(); ++i)
    if (profile.capacity[i] >= delta && profile.capacity[i] <= 1.0 - delta) ++hits;
  return static_cast<double>(hits) / static_cast<double>(profile.size());
}

}  // namespace polarcc
