#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace bdstat {

struct MinimizeOptions {
  std::size_t max_iter = 500;
  double grad_tol = 1e-7;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double fd_step = 1e-6;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
  std::vector<double> trajectory;
};

// Objective returns +inf (or throws) outside its feasible region.
using Objective = std::function<double(const Eigen::VectorXd&)>;

// Central differences, falling back to one side next to an infeasible point.
Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x, double step);
Eigen::MatrixXd fd_hessian(const Objective& f, const Eigen::VectorXd& x, double step);

// BFGS with Armijo backtracking on a finite-difference gradient.
MinimizeResult bfgs_minimize(const Objective& f, Eigen::VectorXd x0,
                             const MinimizeOptions& options = {});

// Golden-section search for the maximum of a unimodal function on [a, b].
double golden_section_max(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace bdstat
