#pragma once

#include "polarcc/convolve.hpp"
#include "polarcc/functionals.hpp"

#include <random>
#include <vector>

namespace testutil {

using polarcc::Density;

inline double uniform(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Random mixture with up to max_points atoms and normalized weights.
inline Density random_mixture(std::mt19937_64& g, int max_points = 8) {
  const int k = 1 + static_cast<int>(g() % static_cast<std::uint64_t>(max_points));
  std::vector<std::pair<double, double>> pts;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double w = 0.05 + uniform(g);
    pts.emplace_back(uniform(g), w);
    total += w;
  }
  for (auto& p : pts) p.second /= total;
  return Density::from_points(std::move(pts));
}

/// Blends a with an endpoint atom so that the entropy equals target exactly
/// (entropy is linear in the density, and the endpoint atoms have entropy
/// one and zero).
inline Density with_entropy(const Density& a, double target) {
  const double h = polarcc::entropy(a);
  std::vector<std::pair<double, double>> pts;
  double t, atom;
  if (h <= target) {  // raise entropy with the useless atom
    t = (1.0 - target) / (1.0 - h);
    atom = 0.0;
  } else {  // lower entropy with the perfect atom
    t = target / h;
    atom = 1.0;
  }
  for (Eigen::Index i = 0; i < a.size(); ++i)
    pts.emplace_back(a.support(i), t * a.mass(i));
  if (t < 1.0) pts.emplace_back(atom, 1.0 - t);
  return Density::from_points(std::move(pts));
}

/// Independent oracle for the Bhattacharyya parameter of a check
/// self-convolution: direct double sum over atom pairs.
inline double brute_z_check_self(const Density& a) {
  double z = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < a.size(); ++j) {
      const double prod = a.support(i) * a.support(j);
      z += a.mass(i) * a.mass(j) * std::sqrt(std::max(0.0, 1.0 - prod * prod));
    }
  return z;
}

}  // namespace testutil
