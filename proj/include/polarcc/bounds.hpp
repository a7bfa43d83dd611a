#pragma once

#include "polarcc/channel_spec.hpp"
#include "polarcc/tree.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace polarcc {

/// One row of the compound-rate bound table.  `upper` is evaluated on
/// upgraded quantizations and `lower` on degraded ones, so both remain valid
/// bounds under quantization; the slack fields give the upgrade/degrade
/// spread of each side.
struct BoundRow {
  int n = 0;
  double upper = 0.0;
  double lower = 0.0;
  double upper_slack = 0.0;
  double lower_slack = 0.0;
};

/// (upper, lower) pair at height zero: min capacity and one minus max
/// Bhattacharyya over the two channels.
inline std::pair<double, double> trivial_bounds(const Density& p, const Density& q) {
  return {std::min(capacity(p), capacity(q)),
          1.0 - std::max(bhattacharyya(p), bhattacharyya(q))};
}

namespace detail {

struct LevelSet {
  std::vector<TreeProfile> degrade;
  std::vector<TreeProfile> upgrade;
};

inline std::vector<BoundRow> rows_from_levels(const std::vector<LevelSet>& members,
                                              int n_max) {
  std::vector<BoundRow> rows;
  rows.reserve(static_cast<size_t>(n_max) + 1);
  for (int k = 0; k <= n_max; ++k) {
    const Eigen::Index count = Eigen::Index(1) << k;
    Kahan<double> up_hi, up_lo, z_hi, z_lo;
    for (Eigen::Index s = 0; s < count; ++s) {
      double min_iu = 1.0, min_id = 1.0, max_zu = 0.0, max_zd = 0.0;
      for (const LevelSet& mem : members) {
        const auto& dk = mem.degrade[static_cast<size_t>(k)];
        const auto& uk = mem.upgrade[static_cast<size_t>(k)];
        min_iu = std::min(min_iu, uk.capacity[s]);
        min_id = std::min(min_id, dk.capacity[s]);
        max_zu = std::max(max_zu, uk.bhattacharyya[s]);
        max_zd = std::max(max_zd, dk.bhattacharyya[s]);
      }
      up_hi.add(min_iu);
      up_lo.add(min_id);
      z_hi.add(max_zd);
      z_lo.add(max_zu);
    }
    const double scale = 1.0 / static_cast<double>(count);
    BoundRow row;
    row.n = k;
    row.upper = up_hi.value * scale;
    row.upper_slack = (up_hi.value - up_lo.value) * scale;
    row.lower = 1.0 - z_hi.value * scale;
    row.lower_slack = (z_hi.value - z_lo.value) * scale;
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<LevelSet> member_levels(const std::vector<Density>& channels,
                                           int n, int m, int threads) {
  std::vector<LevelSet> members;
  members.reserve(channels.size());
  for (const Density& w : channels)
    members.push_back({evaluate_levels(w, n, QuantizerMode::degrade(m), threads),
                       evaluate_levels(w, n, QuantizerMode::upgrade(m), threads)});
  return members;
}

}  // namespace detail

/// Bound rows for heights 0..n_max of the channel pair (p, q).
inline std::vector<BoundRow> bound_table(const Density& p, const Density& q, int n_max,
                                         int m = QuantizerMode::default_grid,
                                         int threads = 1) {
  return detail::rows_from_levels(detail::member_levels({p, q}, n_max, m, threads),
                                  n_max);
}

/// Bound row at a single height for the channel pair (p, q).
inline BoundRow pairwise_bounds(const Density& p, const Density& q, int n,
                                int m = QuantizerMode::default_grid, int threads = 1) {
  return bound_table(p, q, n, m, threads).back();
}

/// Bound row at a single height with the per-type min/max taken over a finite
/// channel set.
inline BoundRow set_bounds(const std::vector<Density>& channels, int n,
                           int m = QuantizerMode::default_grid, int threads = 1) {
  if (channels.empty()) throw std::invalid_argument("channel set is empty");
  return detail::rows_from_levels(detail::member_levels(channels, n, m, threads), n)
      .back();
}

namespace detail {

enum class Family { Erasure, Symmetric, Other };

struct FamilyMember {
  Family family = Family::Other;
  double reliability = 0.0;  // BEC: 1 - eps; BSC: |1 - 2p|
};

inline FamilyMember classify(const ChannelSpec& spec) {
  switch (spec.kind) {
    case ChannelKind::Bec:
      return {Family::Erasure, 1.0 - spec.parameter};
    case ChannelKind::Bsc:
      return {Family::Symmetric, std::abs(1.0 - 2.0 * spec.parameter)};
    case ChannelKind::Mixture: {
      const Density d = to_density(spec);
      if (d.is_erasure_form()) return {Family::Erasure, d.mass_at(1.0)};
      if (d.size() == 1) return {Family::Symmetric, d.support(0)};
      return {Family::Other, 0.0};
    }
  }
  return {Family::Other, 0.0};
}

// Whether channel a can be obtained from channel b by further processing.
inline bool family_degraded(const FamilyMember& a, const FamilyMember& b) {
  if (b.family == Family::Symmetric && b.reliability == 1.0) return true;  // b perfect
  if (b.family == Family::Erasure && b.reliability == 1.0) return true;
  if (a.reliability == 0.0) return true;  // a useless
  if (a.family == b.family) return a.reliability <= b.reliability;
  if (a.family == Family::Symmetric)  // BSC vs BEC: resolve erasures by coin flip
    return 1.0 - b.reliability <= 1.0 - a.reliability;
  // An erasure channel with certain outputs is never reachable from a
  // nontrivial symmetric channel.
  return false;
}

}  // namespace detail

/// When some member of the set is degraded with respect to every other, the
/// compound rate collapses to that member's capacity.  Only the BEC/BSC
/// family (including mixtures reducible to it) is certified analytically;
/// anything else yields an absent result.
inline std::optional<double> degradation_shortcut(const std::vector<ChannelSpec>& specs) {
  if (specs.empty()) return std::nullopt;
  std::vector<detail::FamilyMember> fam;
  fam.reserve(specs.size());
  for (const ChannelSpec& s : specs) {
    fam.push_back(detail::classify(s));
    if (fam.back().family == detail::Family::Other) return std::nullopt;
  }
  for (size_t i = 0; i < fam.size(); ++i) {
    bool dominated = true;
    for (size_t j = 0; j < fam.size() && dominated; ++j)
      dominated = detail::family_degraded(fam[i], fam[j]);
    if (dominated) return capacity(to_density(specs[i]));
  }
  return std::nullopt;
}

/// Result of a reliable-index selection under a block-error budget.
struct IndexSelection {
  std::vector<std::uint32_t> indices;  // ascending
  double rate = 0.0;
  double union_bound = 0.0;  // sum of selected worst-case Z values
};

namespace detail {

inline IndexSelection greedy_select(const Eigen::ArrayXd& z, double budget) {
  std::vector<std::uint32_t> order(static_cast<size_t>(z.size()));
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&z](std::uint32_t a, std::uint32_t b) {
    if (z[a] != z[b]) return z[a] < z[b];
    return a < b;  // deterministic tie break
  });
  IndexSelection sel;
  Kahan<double> sum;
  for (std::uint32_t idx : order) {
    if (sum.value + z[idx] > budget) break;
    sum.add(z[idx]);
    sel.indices.push_back(idx);
  }
  std::sort(sel.indices.begin(), sel.indices.end());
  sel.union_bound = sum.value;
  sel.rate = static_cast<double>(sel.indices.size()) / static_cast<double>(z.size());
  return sel;
}

}  // namespace detail

/// Greedily selects tree-channel indices in increasing order of the
/// worst-case (degraded-quantized) Bhattacharyya parameter over the pair,
/// while the running sum stays within the block-error budget.
inline IndexSelection select_compound_good_indices(const Density& p, const Density& q,
                                                   int n, double budget,
                                                   int m = QuantizerMode::default_grid,
                                                   int threads = 1) {
  if (!(budget > 0.0)) throw std::invalid_argument("block-error budget must be positive");
  const TreeProfile pp = evaluate_all(p, n, QuantizerMode::degrade(m), threads);
  const TreeProfile qp = evaluate_all(q, n, QuantizerMode::degrade(m), threads);
  return detail::greedy_select(pp.bhattacharyya.max(qp.bhattacharyya), budget);
}

/// Conservative alternative: selects the indices that are reliable for the
/// proxy erasure channel with erasure probability max(Z(p), Z(q)); its exact
/// profile dominates both members' Z profiles index-wise.
inline IndexSelection bec_proxy_select(const Density& p, const Density& q, int n,
                                       double budget) {
  if (!(budget > 0.0)) throw std::invalid_argument("block-error budget must be positive");
  const double eps = std::max(bhattacharyya(p), bhattacharyya(q));
  return detail::greedy_select(bec_tree_profile(eps, n).bhattacharyya, budget);
}

}  // namespace polarcc
