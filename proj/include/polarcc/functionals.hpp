#pragma once

#include "polarcc/density.hpp"

#include <cmath>
#include <stdexcept>

namespace polarcc {

/// Binary entropy, base-2 logs, with the 0*log(0) = 0 convention.
template <typename Scalar = double>
Scalar binary_entropy(Scalar x) {
  if (!(x >= Scalar(0) && x <= Scalar(1)))
    throw std::invalid_argument("binary_entropy argument out of [0,1]");
  if (x == Scalar(0) || x == Scalar(1)) return Scalar(0);
  using std::log2;
  return -x * log2(x) - (Scalar(1) - x) * log2(Scalar(1) - x);
}

/// Channel entropy H = sum of mass * h2((1-d)/2).
template <typename Scalar>
Scalar entropy(const BasicDensity<Scalar>& a) {
  return (a.masses() *
          ((Scalar(1) - a.supports()) / Scalar(2))
              .unaryExpr([](Scalar x) { return binary_entropy(x); }))
      .sum();
}

/// Channel capacity I = 1 - H under uniform inputs.
template <typename Scalar>
Scalar capacity(const BasicDensity<Scalar>& a) {
  return Scalar(1) - entropy(a);
}

/// Bhattacharyya parameter Z = sum of mass * sqrt(1 - d^2).
template <typename Scalar>
Scalar bhattacharyya(const BasicDensity<Scalar>& a) {
  return (a.masses() *
          (Scalar(1) - a.supports().square()).max(Scalar(0)).sqrt())
      .sum();
}

template <typename Scalar = double>
struct BasicFunctionals {
  Scalar capacity;
  Scalar entropy;
  Scalar bhattacharyya;
};

using Functionals = BasicFunctionals<double>;

template <typename Scalar>
BasicFunctionals<Scalar> functionals(const BasicDensity<Scalar>& a) {
  const Scalar h = entropy(a);
  return {Scalar(1) - h, h, bhattacharyya(a)};
}

/// Crossover probability p in [0, 1/2] with 1 - h2(p) = target capacity,
/// found by bisection to 1e-12 in both the argument and the value.
template <typename Scalar = double>
Scalar bsc_with_capacity(Scalar target) {
  if (!(target >= Scalar(0) && target <= Scalar(1)))
    throw std::invalid_argument("capacity out of [0,1]");
  if (target == Scalar(0)) return Scalar(0.5);  // h2 is flat at its maximum
  if (target == Scalar(1)) return Scalar(0);
  const Scalar want = Scalar(1) - target;  // entropy target, increasing in p
  Scalar lo = Scalar(0), hi = Scalar(0.5);
  for (int it = 0; it < 200; ++it) {
    const Scalar mid = (lo + hi) / Scalar(2);
    const Scalar h = binary_entropy(mid);
    using std::abs;
    if (abs(h - want) <= Scalar(1e-12) && hi - lo <= Scalar(1e-12)) return mid;
    (h < want ? lo : hi) = mid;
  }
  return (lo + hi) / Scalar(2);
}

/// Whether the symmetric channel with crossover p can be obtained from the
/// erasure channel with erasure probability eps by further processing
/// (erasures resolved by a fair coin give a crossover of eps/2).
template <typename Scalar = double>
bool is_degraded_bsc_wrt_bec(Scalar p, Scalar eps) {
  if (!(p >= Scalar(0) && p <= Scalar(0.5)))
    throw std::invalid_argument("crossover out of [0,1/2]");
  if (!(eps >= Scalar(0) && eps <= Scalar(1)))
    throw std::invalid_argument("erasure probability out of [0,1]");
  return eps <= Scalar(2) * p;
}

}  // namespace polarcc
