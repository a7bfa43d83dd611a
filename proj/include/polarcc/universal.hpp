#pragma once

#include "polarcc/convolve.hpp"
#include "polarcc/functionals.hpp"
#include "polarcc/quantize.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace polarcc {

/// Discretization of the class of symmetric channels with fixed capacity:
/// mixtures on a uniform reliability grid whose weights satisfy the two
/// equality constraints (total mass one, entropy equal to the target).
struct PolytopeProblem {
  int m = 0;
  Eigen::VectorXd p;       // grid points, p(0) = 0, p(m-1) = 1
  Eigen::VectorXd h;       // h(i) = h2((1 - p_i)/2)
  Eigen::MatrixXd pmat;    // pmat(i,j) = sqrt(1 - (p_i p_j)^2) = Z of a check pair
  double target_entropy = 0.0;
};

/// Stationary point of the relaxed quadratic maximization (weights free of
/// sign constraints) over the polytope's affine constraint set.
struct KktSolution {
  Eigen::VectorXd alpha;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double objective = 0.0;  // alpha' P alpha
};

inline PolytopeProblem build_polytope(double capacity_target, int m) {
  if (m < 3) throw std::invalid_argument("polytope grid needs at least 3 points");
  if (!(capacity_target >= 0.0 && capacity_target <= 1.0))
    throw std::invalid_argument("capacity out of [0,1]");
  PolytopeProblem prob;
  prob.m = m;
  prob.p = Eigen::VectorXd::LinSpaced(m, 0.0, 1.0);
  prob.h = ((1.0 - prob.p.array()) / 2.0)
               .unaryExpr([](double x) { return binary_entropy(x); })
               .matrix();
  prob.pmat = (1.0 - (prob.p * prob.p.transpose()).array().square())
                  .max(0.0)
                  .sqrt()
                  .matrix();
  prob.target_entropy = 1.0 - capacity_target;
  return prob;
}

/// Solves the stationarity system
///   [ 2P  1  h ] [ alpha   ]   [ 0 ]
///   [ 1'  0  0 ] [ lambda1 ] = [ 1 ]
///   [ h'  0  0 ] [ lambda2 ]   [ t ]
/// by dense LU with partial pivoting and returns the objective alpha' P alpha
/// (compensated summation; the weights carry mixed signs).  The objective is
/// concave on the constraint set, so the stationary point is its maximum and
/// dominates every feasible mixture.
inline KktSolution solve_kkt(const PolytopeProblem& prob) {
  const int m = prob.m;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 2, m + 2);
  a.topLeftCorner(m, m) = 2.0 * prob.pmat;
  a.col(m).head(m).setOnes();
  a.col(m + 1).head(m) = prob.h;
  a.row(m).head(m).setOnes();
  a.row(m + 1).head(m) = prob.h.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 2);
  rhs(m) = 1.0;
  rhs(m + 1) = prob.target_entropy;

  const Eigen::VectorXd sol = a.partialPivLu().solve(rhs);
  if (!sol.allFinite())
    throw std::runtime_error("KKT system is numerically singular (pivot failure)");

  KktSolution out;
  out.alpha = sol.head(m);
  out.lambda1 = sol(m);
  out.lambda2 = sol(m + 1);

  detail::Kahan<double> mass, ent;
  for (int i = 0; i < m; ++i) {
    mass.add(out.alpha(i));
    ent.add(out.alpha(i) * prob.h(i));
  }
  if (std::abs(mass.value - 1.0) > 1e-9 ||
      std::abs(ent.value - prob.target_entropy) > 1e-9)
    throw std::runtime_error("KKT solution violates the equality constraints");

  detail::Kahan<double> obj;
  for (int i = 0; i < m; ++i) {
    detail::Kahan<double> row;
    for (int j = 0; j < m; ++j) row.add(prob.pmat(i, j) * out.alpha(j));
    obj.add(out.alpha(i) * row.value);
  }
  out.objective = obj.value;
  return out;
}

/// Worst-case Bhattacharyya parameter after a variable self-convolution over
/// all symmetric channels of the given capacity: the symmetric (single-atom)
/// channel is extremal and Z is multiplicative, so the value is Z(BSC_I)^2.
inline double var_conv_max(double capacity_target) {
  if (!(capacity_target >= 0.0 && capacity_target <= 1.0))
    throw std::invalid_argument("capacity out of [0,1]");
  const double z = bhattacharyya(make_bsc(bsc_with_capacity(capacity_target)));
  return z * z;
}

/// Height-one universal lower bound on the compound rate of the whole
/// capacity-I class: one minus the average of the two per-branch worst cases
/// (variable branch in closed form, check branch from the relaxed quadratic
/// program on an m-point grid).
inline double improved_lower_bound(double capacity_target, int m) {
  const double chk = solve_kkt(build_polytope(capacity_target, m)).objective;
  return 1.0 - 0.5 * (var_conv_max(capacity_target) + chk);
}

}  // namespace polarcc
