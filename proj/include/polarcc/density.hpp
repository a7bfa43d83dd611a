#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace polarcc {

template <typename Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// A binary-input memoryless output-symmetric channel represented as a finite
/// mixture of point masses on reliability values d = |difference of the two
/// conditional output laws| in [0, 1].  An atom at d = 0 is a useless output
/// (erasure), an atom at d = 1 is a perfect one.
///
/// Canonical form: supports strictly increasing (points closer than 1e-14 are
/// merged, mass-summed), all masses positive, masses summing to one.
template <typename Scalar = double>
class BasicDensity {
 public:
  using Array = ArrayX<Scalar>;

  static constexpr Scalar merge_tol = Scalar(1e-14);
  static constexpr Scalar input_mass_tol = Scalar(1e-9);

  BasicDensity() : sup_(1), mas_(1) {
    sup_[0] = Scalar(0);
    mas_[0] = Scalar(1);
  }

  /// Builds a canonical density from arbitrary (support, mass) points.
  /// Zero-mass points are dropped; near-duplicate supports are merged; the
  /// total mass is normalized if it is within 1e-9 of one, otherwise the
  /// input is rejected.
  static BasicDensity from_points(std::vector<std::pair<Scalar, Scalar>> pts) {
    std::sort(pts.begin(), pts.end());
    return merge_sorted(std::move(pts));
  }

  /// Same as from_points but the caller guarantees supports are already
  /// sorted in non-decreasing order.
  static BasicDensity from_sorted(std::vector<std::pair<Scalar, Scalar>> pts) {
    return merge_sorted(std::move(pts));
  }

  const Array& supports() const { return sup_; }
  const Array& masses() const { return mas_; }
  Eigen::Index size() const { return sup_.size(); }
  Scalar support(Eigen::Index i) const { return sup_[i]; }
  Scalar mass(Eigen::Index i) const { return mas_[i]; }

  /// True when every atom sits exactly at 0 or 1 (erasure-channel form).
  bool is_erasure_form() const {
    for (Eigen::Index i = 0; i < sup_.size(); ++i)
      if (sup_[i] != Scalar(0) && sup_[i] != Scalar(1)) return false;
    return true;
  }

  /// Mass at exact support value d (0 if absent).
  Scalar mass_at(Scalar d) const {
    for (Eigen::Index i = 0; i < sup_.size(); ++i)
      if (sup_[i] == d) return mas_[i];
    return Scalar(0);
  }

  bool operator==(const BasicDensity& o) const {
    return sup_.size() == o.sup_.size() && (sup_ == o.sup_).all() &&
           (mas_ == o.mas_).all();
  }
  bool operator!=(const BasicDensity& o) const { return !(*this == o); }

 private:
  static BasicDensity merge_sorted(std::vector<std::pair<Scalar, Scalar>> pts) {
    std::vector<Scalar> sup, mas;
    sup.reserve(pts.size());
    mas.reserve(pts.size());
    for (const auto& [d, w] : pts) {
      if (w == Scalar(0)) continue;
      if (!(w > Scalar(0)))
        throw std::invalid_argument("density mass must be positive");
      if (!(d >= Scalar(0) && d <= Scalar(1)))
        throw std::invalid_argument("density support must lie in [0,1]");
      if (!sup.empty() && d - sup.back() <= merge_tol) {
        // Merge the cluster; an exact endpoint atom pins the merged support.
        Scalar wm = mas.back();
        Scalar s = (sup.back() == Scalar(0) || sup.back() == Scalar(1) ||
                    d == sup.back())
                       ? sup.back()
                       : (d == Scalar(1) ? d : (sup.back() * wm + d * w) / (wm + w));
        sup.back() = s;
        mas.back() = wm + w;
      } else {
        sup.push_back(d);
        mas.push_back(w);
      }
    }
    if (sup.empty()) throw std::invalid_argument("density has no mass");
    Scalar total(0), c(0);
    for (Scalar w : mas) {  // compensated sum
      Scalar y = w - c, t = total + y;
      c = (t - total) - y;
      total = t;
    }
    using std::abs;
    if (abs(total - Scalar(1)) > input_mass_tol)
      throw std::invalid_argument("density masses must sum to one");
    BasicDensity out;
    out.sup_ = Eigen::Map<Array>(sup.data(), static_cast<Eigen::Index>(sup.size()));
    out.mas_ = Eigen::Map<Array>(mas.data(), static_cast<Eigen::Index>(mas.size()));
    if (total != Scalar(1)) out.mas_ /= total;
    return out;
  }

  Array sup_;
  Array mas_;
};

using Density = BasicDensity<double>;

/// Erasure channel with erasure probability eps: mass eps at 0, 1-eps at 1.
template <typename Scalar = double>
BasicDensity<Scalar> make_bec(Scalar eps) {
  if (!(eps >= Scalar(0) && eps <= Scalar(1)))
    throw std::invalid_argument("erasure probability out of [0,1]");
  std::vector<std::pair<Scalar, Scalar>> pts;
  if (eps > Scalar(0)) pts.emplace_back(Scalar(0), eps);
  if (eps < Scalar(1)) pts.emplace_back(Scalar(1), Scalar(1) - eps);
  return BasicDensity<Scalar>::from_sorted(std::move(pts));
}

/// Symmetric channel with crossover probability p: single atom at |1-2p|.
template <typename Scalar = double>
BasicDensity<Scalar> make_bsc(Scalar p) {
  if (!(p >= Scalar(0) && p <= Scalar(1)))
    throw std::invalid_argument("crossover probability out of [0,1]");
  using std::abs;
  return BasicDensity<Scalar>::from_sorted({{abs(Scalar(1) - Scalar(2) * p), Scalar(1)}});
}

/// Arbitrary mixture from (support, weight) pairs.
template <typename Scalar = double>
BasicDensity<Scalar> make_mixture(std::vector<std::pair<Scalar, Scalar>> pts) {
  return BasicDensity<Scalar>::from_points(std::move(pts));
}

}  // namespace polarcc
