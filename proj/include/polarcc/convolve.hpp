#pragma once

#include "polarcc/density.hpp"
#include "polarcc/quantize.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace polarcc {

enum class ConvKind { Check, Variable };

namespace detail {

template <typename Scalar>
struct Kahan {
  Scalar value{0}, comp{0};
  void add(Scalar x) {
    const Scalar y = x - comp;
    const Scalar t = value + y;
    comp = (t - value) - y;
    value = t;
  }
};

// Emits every output atom of the point-mass convolution of a and b.
// Check:    (x, y) -> atom at x*y with the pair mass.
// Variable: (x, y) -> atoms at (x+y)/(1+xy) and |x-y|/(1-xy) with masses
//           (1+xy)/2 and (1-xy)/2 times the pair mass; the second atom is
//           dropped when xy = 1 (both observations perfect).
// Self-convolutions enumerate unordered pairs with doubled off-diagonal mass.
template <typename Scalar, typename Emit>
void enumerate_conv(const BasicDensity<Scalar>& a, const BasicDensity<Scalar>& b,
                    ConvKind kind, Emit&& emit) {
  auto pair_atoms = [kind, &emit](Scalar x, Scalar y, Scalar w) {
    if (kind == ConvKind::Check) {
      emit(x * y, w);
      return;
    }
    const Scalar t = x * y;
    if (t >= Scalar(1)) {  // only reachable with x = y = 1 (up to rounding)
      emit(Scalar(1), w);
      return;
    }
    Scalar s1 = (x + y) / (Scalar(1) + t);
    if (s1 > Scalar(1)) s1 = Scalar(1);
    emit(s1, w * (Scalar(1) + t) / Scalar(2));
    const Scalar w2 = w * (Scalar(1) - t) / Scalar(2);
    if (w2 > Scalar(0)) {
      using std::abs;
      Scalar s2 = abs(x - y) / (Scalar(1) - t);
      if (s2 > Scalar(1)) s2 = Scalar(1);
      emit(s2, w2);
    }
  };

  if (&a == &b || a == b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      pair_atoms(a.support(i), a.support(i), a.mass(i) * a.mass(i));
      for (Eigen::Index j = i + 1; j < a.size(); ++j)
        pair_atoms(a.support(i), a.support(j), Scalar(2) * a.mass(i) * a.mass(j));
    }
    return;
  }
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j)
      pair_atoms(a.support(i), b.support(j), a.mass(i) * b.mass(j));
}

// Closed form for inputs whose atoms all sit at 0 or 1: the erasure-channel
// family is closed under both convolutions.
template <typename Scalar>
BasicDensity<Scalar> erasure_conv(const BasicDensity<Scalar>& a,
                                  const BasicDensity<Scalar>& b, ConvKind kind) {
  Scalar erased, known;
  if (kind == ConvKind::Check) {  // known only when both are known
    known = a.mass_at(Scalar(1)) * b.mass_at(Scalar(1));
    erased = Scalar(1) - known;
  } else {  // erased only when both are erased
    erased = a.mass_at(Scalar(0)) * b.mass_at(Scalar(0));
    known = Scalar(1) - erased;
  }
  std::vector<std::pair<Scalar, Scalar>> pts;
  if (erased > Scalar(0)) pts.emplace_back(Scalar(0), erased);
  if (known > Scalar(0)) pts.emplace_back(Scalar(1), known);
  return BasicDensity<Scalar>::from_sorted(std::move(pts));
}

// Degrading cap: atoms falling in the same grid cell [p_k, p_{k+1}) are
// merged into one atom at their mass-weighted mean (merging output symbols
// is always a degradation).  Atoms exactly at 1 keep their own bucket.
template <typename Scalar>
class DegradeMerger {
 public:
  explicit DegradeMerger(int m)
      : m_(m), wsum_(m), wmean_(m), first_(m, Scalar(-1)), mixed_(m, 0) {}

  void operator()(Scalar d, Scalar w) {
    const Eigen::Index k = d >= Scalar(1) ? m_ - 1 : cell_of(d);
    wsum_[static_cast<size_t>(k)].add(w);
    wmean_[static_cast<size_t>(k)].add(w * d);
    Scalar& f = first_[static_cast<size_t>(k)];
    if (f == Scalar(-1))
      f = d;
    else if (f != d)
      mixed_[static_cast<size_t>(k)] = 1;
  }

  BasicDensity<Scalar> take() const {
    std::vector<std::pair<Scalar, Scalar>> pts;
    for (int k = 0; k < m_; ++k) {
      const Scalar w = wsum_[static_cast<size_t>(k)].value;
      if (w <= Scalar(0)) continue;
      Scalar d = mixed_[static_cast<size_t>(k)]
                     ? wmean_[static_cast<size_t>(k)].value / w
                     : first_[static_cast<size_t>(k)];
      if (d > Scalar(1)) d = Scalar(1);
      if (d < Scalar(0)) d = Scalar(0);
      pts.emplace_back(d, w);
    }
    return BasicDensity<Scalar>::from_sorted(std::move(pts));
  }

 private:
  Eigen::Index cell_of(Scalar d) const {
    const Scalar g = Scalar(m_ - 1);
    Eigen::Index k = static_cast<Eigen::Index>(d * g);
    if (k < 0) k = 0;
    if (k > m_ - 2) k = m_ - 2;
    while (k > 0 && Scalar(k) / g > d) --k;
    while (k < m_ - 2 && Scalar(k + 1) / g <= d) ++k;
    return k;
  }

  int m_;
  std::vector<Kahan<Scalar>> wsum_, wmean_;
  std::vector<Scalar> first_;
  std::vector<uint8_t> mixed_;
};

// Upgrading cap: an atom strictly inside a cell is split between the two
// bounding grid points so that the mean reliability is preserved (the split
// mixture degrades back to the original atom, hence is upgraded).
template <typename Scalar>
class UpgradeSplitter {
 public:
  explicit UpgradeSplitter(int m) : m_(m), bins_(m) {}

  void operator()(Scalar d, Scalar w) {
    const auto loc = grid_locate(d, m_);
    if (loc.exact) {
      bins_[static_cast<size_t>(loc.index)].add(w);
      return;
    }
    const Scalar g = Scalar(m_ - 1);
    const Scalar lo = Scalar(loc.index) / g;
    const Scalar hi = Scalar(loc.index + 1) / g;
    const Scalar whi = w * (d - lo) / (hi - lo);
    bins_[static_cast<size_t>(loc.index)].add(w - whi);
    bins_[static_cast<size_t>(loc.index + 1)].add(whi);
  }

  BasicDensity<Scalar> take() const {
    const Scalar g = Scalar(m_ - 1);
    std::vector<std::pair<Scalar, Scalar>> pts;
    for (int k = 0; k < m_; ++k)
      if (bins_[static_cast<size_t>(k)].value > Scalar(0))
        pts.emplace_back(Scalar(k) / g, bins_[static_cast<size_t>(k)].value);
    return BasicDensity<Scalar>::from_sorted(std::move(pts));
  }

 private:
  int m_;
  std::vector<Kahan<Scalar>> bins_;
};

template <typename Scalar>
BasicDensity<Scalar> conv_exact(const BasicDensity<Scalar>& a,
                                const BasicDensity<Scalar>& b, ConvKind kind) {
  std::vector<std::pair<Scalar, Scalar>> pts;
  pts.reserve(static_cast<size_t>(a.size()) * static_cast<size_t>(b.size()) *
              (kind == ConvKind::Variable ? 2 : 1));
  enumerate_conv(a, b, kind, [&pts](Scalar d, Scalar w) { pts.emplace_back(d, w); });
  return BasicDensity<Scalar>::from_points(std::move(pts));
}

}  // namespace detail

/// Check-node convolution: atom supports multiply.
template <typename Scalar>
BasicDensity<Scalar> chk_conv(const BasicDensity<Scalar>& a,
                              const BasicDensity<Scalar>& b) {
  if (a.is_erasure_form() && b.is_erasure_form())
    return detail::erasure_conv(a, b, ConvKind::Check);
  return detail::conv_exact(a, b, ConvKind::Check);
}

/// Variable-node convolution: each atom pair splits into a sum atom and a
/// difference atom.  The Bhattacharyya parameter is exactly multiplicative.
template <typename Scalar>
BasicDensity<Scalar> var_conv(const BasicDensity<Scalar>& a,
                              const BasicDensity<Scalar>& b) {
  if (a.is_erasure_form() && b.is_erasure_form())
    return detail::erasure_conv(a, b, ConvKind::Variable);
  return detail::conv_exact(a, b, ConvKind::Variable);
}

/// Caps a density's point count according to the quantizer mode: identity
/// for Exact, degrading cell merge for Degrade, upgrading grid split for
/// Upgrade.  Atoms at 0 and 1 pass through unchanged in all modes, so
/// erasure-form densities are fixed points.
template <typename Scalar>
BasicDensity<Scalar> bin(const BasicDensity<Scalar>& a, const QuantizerMode& mode) {
  switch (mode.kind) {
    case QuantizerMode::Kind::Exact:
      return a;
    case QuantizerMode::Kind::Degrade: {
      detail::DegradeMerger<Scalar> sink(mode.grid);
      for (Eigen::Index i = 0; i < a.size(); ++i) sink(a.support(i), a.mass(i));
      return sink.take();
    }
    case QuantizerMode::Kind::Upgrade: {
      detail::UpgradeSplitter<Scalar> sink(mode.grid);
      for (Eigen::Index i = 0; i < a.size(); ++i) sink(a.support(i), a.mass(i));
      return sink.take();
    }
  }
  return a;
}

/// bin(conv(a, b), mode) without materializing the intermediate atom list.
template <typename Scalar>
BasicDensity<Scalar> conv_binned(const BasicDensity<Scalar>& a,
                                 const BasicDensity<Scalar>& b, ConvKind kind,
                                 const QuantizerMode& mode) {
  if (a.is_erasure_form() && b.is_erasure_form())
    return detail::erasure_conv(a, b, kind);
  switch (mode.kind) {
    case QuantizerMode::Kind::Exact:
      return detail::conv_exact(a, b, kind);
    case QuantizerMode::Kind::Degrade: {
      detail::DegradeMerger<Scalar> sink(mode.grid);
      detail::enumerate_conv(a, b, kind, [&sink](Scalar d, Scalar w) { sink(d, w); });
      return sink.take();
    }
    case QuantizerMode::Kind::Upgrade: {
      detail::UpgradeSplitter<Scalar> sink(mode.grid);
      detail::enumerate_conv(a, b, kind, [&sink](Scalar d, Scalar w) { sink(d, w); });
      return sink.take();
    }
  }
  return detail::conv_exact(a, b, kind);
}

}  // namespace polarcc
