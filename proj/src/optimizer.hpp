#ifndef CLAIMCAST_SRC_OPTIMIZER_HPP
#define CLAIMCAST_SRC_OPTIMIZER_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace claimcast::detail {

// Objective on the natural parameter scale. Fill `value` (and `grad` when
// non-null) at x; return false if x is infeasible, in which case the line
// search treats the point as -infinity.
using Objective =
    std::function<bool(const Eigen::VectorXd& x, double& value,
                       Eigen::VectorXd* grad)>;

struct MaximizeOptions {
  int max_iterations = 500;
  double grad_tol = 1e-8;         // natural-scale gradient sup-norm target
  double grad_tol_relaxed = 1e-6; // accepted when progress has stalled
  double rel_value_tol = 1e-12;   // relative objective-change stall test
};

struct MaximizeResult {
  Eigen::VectorXd x;         // natural scale
  double value = 0.0;
  Eigen::VectorXd gradient;  // natural scale
  double grad_norm = 0.0;    // sup norm over free coordinates
  int iterations = 0;
  bool converged = false;
  std::string message;
};

// Quasi-Newton (BFGS) ascent with backtracking line search. Coordinates
// with log_transform get optimized as log(x_j) so positivity is structural;
// fixed coordinates never move. `init` must be feasible.
MaximizeResult maximize(const Objective& objective, const Eigen::VectorXd& init,
                        const std::vector<bool>& log_transform,
                        const std::vector<bool>& fixed,
                        const MaximizeOptions& opts = {});

// Natural-scale hessian of the objective at x; return false if unavailable.
using HessianFn = std::function<bool(const Eigen::VectorXd& x,
                                     Eigen::MatrixXd& hessian)>;

// Damped Newton refinement of a maximize() result. BFGS reliably gets close
// but its steps stall once objective changes reach machine noise; one or
// two Newton steps with the true hessian push the score norm to grad_tol.
void newton_polish(const Objective& objective, const HessianFn& hessian,
                   const std::vector<bool>& fixed, MaximizeResult& state,
                   const MaximizeOptions& opts = {});

// Utility conversions between the std::vector API surface and Eigen.
Eigen::VectorXd to_eigen(const std::vector<double>& v);
std::vector<double> from_eigen(const Eigen::VectorXd& v);
Eigen::MatrixXd to_eigen_matrix(const std::vector<double>& row_major, int n);
std::vector<double> from_eigen_matrix(const Eigen::MatrixXd& m);

// Inverse of a symmetric positive-definite matrix; false when the matrix
// is numerically singular or indefinite.
bool spd_inverse(const Eigen::MatrixXd& m, Eigen::MatrixXd& out);

double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

}  // namespace claimcast::detail

#endif  // CLAIMCAST_SRC_OPTIMIZER_HPP
