#include "bdstat/optimize.hpp"

#include <cmath>
#include <exception>
#include <limits>

namespace bdstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const Objective& f, const Eigen::VectorXd& x) {
  try {
    const double v = f(x);
    return std::isnan(v) ? kInf : v;
  } catch (const std::exception&) {
    return kInf;
  }
}

}  // namespace

Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x, double step) {
  const double f0 = safe_eval(f, x);
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step * std::max(1.0, std::abs(x[i]));
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fp = safe_eval(f, xp);
    const double fm = safe_eval(f, xm);
    if (std::isfinite(fp) && std::isfinite(fm)) {
      g[i] = (fp - fm) / (2.0 * h);
    } else if (std::isfinite(fp)) {
      g[i] = (fp - f0) / h;
    } else if (std::isfinite(fm)) {
      g[i] = (f0 - fm) / h;
    } else {
      g[i] = 0.0;
    }
  }
  return g;
}

Eigen::MatrixXd fd_hessian(const Objective& f, const Eigen::VectorXd& x, double step) {
  const auto n = x.size();
  Eigen::MatrixXd H(n, n);
  const double f0 = safe_eval(f, x);
  std::vector<double> h(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) h[i] = step * std::max(1.0, std::abs(x[i]));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double v;
      if (i == j) {
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h[i];
        xm[i] -= h[i];
        v = (safe_eval(f, xp) - 2.0 * f0 + safe_eval(f, xm)) / (h[i] * h[i]);
      } else {
        Eigen::VectorXd a = x, b = x, c = x, d = x;
        a[i] += h[i]; a[j] += h[j];
        b[i] += h[i]; b[j] -= h[j];
        c[i] -= h[i]; c[j] += h[j];
        d[i] -= h[i]; d[j] -= h[j];
        v = (safe_eval(f, a) - safe_eval(f, b) - safe_eval(f, c) + safe_eval(f, d)) /
            (4.0 * h[i] * h[j]);
      }
      H(i, j) = H(j, i) = v;
    }
  }
  return H;
}

MinimizeResult bfgs_minimize(const Objective& f, Eigen::VectorXd x0,
                             const MinimizeOptions& options) {
  MinimizeResult r;
  r.x = std::move(x0);
  r.value = safe_eval(f, r.x);
  r.trajectory.push_back(r.value);
  if (!std::isfinite(r.value)) return r;

  const auto n = r.x.size();
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd g = fd_gradient(f, r.x, options.fd_step);
  for (r.iterations = 0; r.iterations < options.max_iter; ++r.iterations) {
    r.grad_norm = g.lpNorm<Eigen::Infinity>();
    if (r.grad_norm < options.grad_tol) {
      r.converged = true;
      break;
    }
    Eigen::VectorXd d = -Hinv * g;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      Hinv.setIdentity();
      d = -g;
      slope = -g.squaredNorm();
    }
    double t = 1.0;
    double fnew = kInf;
    Eigen::VectorXd xnew;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      xnew = r.x + t * d;
      fnew = safe_eval(f, xnew);
      if (std::isfinite(fnew) && fnew <= r.value + options.armijo * t * slope) {
        accepted = true;
        break;
      }
      t *= options.backtrack;
    }
    if (!accepted) {
      if (!Hinv.isIdentity()) {
        Hinv.setIdentity();
        continue;
      }
      break;
    }
    const Eigen::VectorXd gnew = fd_gradient(f, xnew, options.fd_step);
    const Eigen::VectorXd s = xnew - r.x;
    const Eigen::VectorXd y = gnew - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (r.iterations == 0) Hinv *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      Hinv = (I - rho * s * y.transpose()) * Hinv * (I - rho * y * s.transpose()) +
             rho * s * s.transpose();
    }
    r.x = xnew;
    r.value = fnew;
    g = gnew;
    r.trajectory.push_back(r.value);
  }
  r.grad_norm = g.lpNorm<Eigen::Infinity>();
  if (r.grad_norm < options.grad_tol) r.converged = true;
  return r;
}

double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace bdstat
