#pragma once

#include "polarcc/density.hpp"
#include "polarcc/functionals.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace polarcc {

/// How densities are capped after each convolution.  Degrade yields a channel
/// degraded with respect to the exact one (capacity under-, Bhattacharyya
/// over-estimated), Upgrade the reverse, so the two runs bracket the truth.
struct QuantizerMode {
  enum class Kind { Exact, Degrade, Upgrade };

  Kind kind = Kind::Exact;
  int grid = default_grid;

  static constexpr int default_grid = 4097;

  static QuantizerMode exact() { return {Kind::Exact, default_grid}; }
  static QuantizerMode degrade(int m = default_grid) {
    check_grid(m);
    return {Kind::Degrade, m};
  }
  static QuantizerMode upgrade(int m = default_grid) {
    check_grid(m);
    return {Kind::Upgrade, m};
  }

  static void check_grid(int m) {
    if (m < 2) throw std::invalid_argument("grid size must be at least 2");
  }
};

namespace detail {

// Locates d on the uniform grid {i/(m-1)}: returns the cell index k with
// d in [p_k, p_{k+1}) and whether d hits a grid point exactly.  Comparisons
// are against the stored grid values so that previously quantized supports
// are recognized as exact.
template <typename Scalar>
struct GridRef {
  Eigen::Index index;
  bool exact;
};

template <typename Scalar>
GridRef<Scalar> grid_locate(Scalar d, int m) {
  const Scalar g = Scalar(m - 1);
  auto pt = [g](Eigen::Index i) { return Scalar(i) / g; };
  Eigen::Index k = static_cast<Eigen::Index>(d * g);
  if (k < 0) k = 0;
  if (k > m - 2) k = m - 2;
  while (k > 0 && pt(k) > d) --k;  // d*g may round across a grid point
  while (k < m - 2 && pt(k + 1) <= d) ++k;
  if (pt(k) == d) return {k, true};
  if (pt(k + 1) == d) return {k + 1, true};
  return {k, false};
}

}  // namespace detail

/// Degrading grid quantizer: mass strictly inside a cell moves to the lower
/// grid point; grid-point atoms are fixed.
template <typename Scalar>
BasicDensity<Scalar> quantize_down(const BasicDensity<Scalar>& a, int m) {
  QuantizerMode::check_grid(m);
  const Scalar g = Scalar(m - 1);
  std::vector<std::pair<Scalar, Scalar>> pts;
  pts.reserve(static_cast<size_t>(a.size()));
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const auto loc = detail::grid_locate(a.support(i), m);
    pts.emplace_back(loc.exact ? a.support(i) : Scalar(loc.index) / g, a.mass(i));
  }
  return BasicDensity<Scalar>::from_sorted(std::move(pts));
}

/// Upgrading grid quantizer: mass strictly inside a cell moves to the upper
/// grid point; grid-point atoms are fixed.
template <typename Scalar>
BasicDensity<Scalar> quantize_up(const BasicDensity<Scalar>& a, int m) {
  QuantizerMode::check_grid(m);
  const Scalar g = Scalar(m - 1);
  std::vector<std::pair<Scalar, Scalar>> pts;
  pts.reserve(static_cast<size_t>(a.size()));
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const auto loc = detail::grid_locate(a.support(i), m);
    pts.emplace_back(loc.exact ? a.support(i) : Scalar(loc.index + 1) / g, a.mass(i));
  }
  return BasicDensity<Scalar>::from_sorted(std::move(pts));
}

/// On-grid density with the same entropy as a, built as the convex
/// combination t*Qu(a) + (1-t)*Qd(a); entropy is linear in the density, so
/// t has a closed form.  Degenerate case (both quantizers agree) returns
/// the degraded quantization unchanged.
template <typename Scalar>
BasicDensity<Scalar> entropy_matching_mix(const BasicDensity<Scalar>& a, int m) {
  const BasicDensity<Scalar> qd = quantize_down(a, m);
  const BasicDensity<Scalar> qu = quantize_up(a, m);
  const Scalar hd = entropy(qd), hu = entropy(qu), h = entropy(a);
  if (hd == hu) return qd;
  const Scalar t = (hd - h) / (hd - hu);
  std::vector<std::pair<Scalar, Scalar>> pts;
  for (Eigen::Index i = 0; i < qu.size(); ++i)
    pts.emplace_back(qu.support(i), t * qu.mass(i));
  for (Eigen::Index i = 0; i < qd.size(); ++i)
    pts.emplace_back(qd.support(i), (Scalar(1) - t) * qd.mass(i));
  return BasicDensity<Scalar>::from_points(std::move(pts));
}

/// Worst-case error of the grid quantizers on the Bhattacharyya parameter of
/// a self check-convolution: sqrt(1 - (1 - 1/(m-1))^4).
inline double quantization_delta(int m) {
  QuantizerMode::check_grid(m);
  const double r = 1.0 - 1.0 / (m - 1);
  return std::sqrt(std::max(0.0, 1.0 - r * r * r * r));
}

/// Smallest grid size whose worst-case quantization error is at most delta.
/// The bound exceeds two for every delta below one, so the coarsest possible
/// grid is only reached at delta = 1 exactly.
inline int min_grid_size(double delta) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("tolerance must lie in (0,1]");
  if (delta == 1.0) return 2;
  const double root = std::pow(1.0 - delta * delta, 0.25);
  double bound = 1.0 + 1.0 / (1.0 - root);
  if (!(bound < 2.0e9)) throw std::invalid_argument("tolerance too small");
  int m = std::max(2, static_cast<int>(std::ceil(bound)) - 2);
  while (quantization_delta(m) > delta) ++m;
  return m;
}

}  // namespace polarcc
