#include "optimizer.hpp"

#include <cmath>
#include <limits>

namespace claimcast::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Workspace {
  const Objective* objective;
  const std::vector<bool>* log_transform;
  const std::vector<bool>* fixed;
  Eigen::VectorXd natural;       // scratch
  Eigen::VectorXd natural_grad;  // scratch

  Eigen::VectorXd to_working(const Eigen::VectorXd& x) const {
    Eigen::VectorXd w = x;
    for (int j = 0; j < x.size(); ++j)
      if ((*log_transform)[j]) w[j] = std::log(x[j]);
    return w;
  }
  Eigen::VectorXd to_natural(const Eigen::VectorXd& w) const {
    Eigen::VectorXd x = w;
    for (int j = 0; j < w.size(); ++j)
      if ((*log_transform)[j]) x[j] = std::exp(w[j]);
    return x;
  }

  // Evaluates the objective at working-space point w. Returns false when
  // infeasible. Fills working-space gradient when grad != nullptr.
  bool eval(const Eigen::VectorXd& w, double& value, Eigen::VectorXd* grad,
            Eigen::VectorXd* natural_grad_out = nullptr) {
    natural = to_natural(w);
    for (int j = 0; j < natural.size(); ++j)
      if (!std::isfinite(natural[j])) return false;
    natural_grad.resize(w.size());
    bool ok = (*objective)(natural, value,
                           grad || natural_grad_out ? &natural_grad : nullptr);
    if (!ok || !std::isfinite(value)) return false;
    if (natural_grad_out) *natural_grad_out = natural_grad;
    if (grad) {
      *grad = natural_grad;
      for (int j = 0; j < w.size(); ++j) {
        if ((*log_transform)[j]) (*grad)[j] *= natural[j];
        if ((*fixed)[j]) (*grad)[j] = 0.0;
      }
    }
    return true;
  }
};

double free_sup_norm(const Eigen::VectorXd& g, const std::vector<bool>& fixed) {
  double sup = 0.0;
  for (int j = 0; j < g.size(); ++j)
    if (!fixed[j]) sup = std::max(sup, std::abs(g[j]));
  return sup;
}

}  // namespace

MaximizeResult maximize(const Objective& objective, const Eigen::VectorXd& init,
                        const std::vector<bool>& log_transform,
                        const std::vector<bool>& fixed,
                        const MaximizeOptions& opts) {
  const int n = static_cast<int>(init.size());
  Workspace ws{&objective, &log_transform, &fixed, {}, {}};

  MaximizeResult res;
  Eigen::VectorXd w = ws.to_working(init);
  Eigen::VectorXd g(n), natural_grad(n);
  double value;
  if (!ws.eval(w, value, &g, &natural_grad)) {
    res.x = init;
    res.converged = false;
    res.message = "objective infeasible at the initial point";
    res.value = -kInf;
    res.gradient = Eigen::VectorXd::Zero(n);
    res.grad_norm = kInf;
    return res;
  }

  Eigen::MatrixXd inv_hess = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;
  int stall_count = 0;
  int iter = 0;
  std::string message = "reached iteration limit";
  bool converged = false;

  for (; iter < opts.max_iterations; ++iter) {
    const double natural_sup = free_sup_norm(natural_grad, fixed);
    if (natural_sup <= opts.grad_tol) {
      converged = true;
      message = "gradient below tolerance";
      break;
    }

    Eigen::VectorXd direction = inv_hess * g;
    for (int j = 0; j < n; ++j)
      if (fixed[j]) direction[j] = 0.0;
    if (direction.dot(g) <= 0.0) {
      // curvature information went bad; restart from steepest ascent
      inv_hess.setIdentity();
      direction = g;
      for (int j = 0; j < n; ++j)
        if (fixed[j]) direction[j] = 0.0;
    }

    // backtracking Armijo line search
    const double slope = direction.dot(g);
    double step = 1.0;
    double new_value = -kInf;
    Eigen::VectorXd w_new, g_new(n), natural_grad_new(n);
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      w_new = w + step * direction;
      if (ws.eval(w_new, new_value, &g_new, &natural_grad_new) &&
          new_value >= value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      converged = natural_sup <= opts.grad_tol_relaxed;
      message = converged ? "line search exhausted near optimum"
                          : "line search failed to make progress";
      break;
    }

    const Eigen::VectorXd s = w_new - w;
    const Eigen::VectorXd y = g_new - g;  // note: ascent, y = grad change
    const double sy = s.dot(y);
    // BFGS update on the inverse Hessian of the negated objective
    if (-sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        inv_hess = Eigen::MatrixXd::Identity(n, n) * (-sy / y.dot(y));
        scaled = true;
      }
      const Eigen::VectorXd hy = inv_hess * (-y);
      const double shy = s.dot(-y);
      inv_hess += ((shy + (-y).dot(hy)) / (shy * shy)) * (s * s.transpose()) -
                  (hy * s.transpose() + s * hy.transpose()) / shy;
    }

    const double rel_change =
        std::abs(new_value - value) /
        std::max({std::abs(new_value), std::abs(value), 1.0});
    w = w_new;
    g = g_new;
    natural_grad = natural_grad_new;
    value = new_value;

    if (rel_change <= opts.rel_value_tol) {
      if (free_sup_norm(natural_grad, fixed) <= opts.grad_tol_relaxed) {
        converged = true;
        message = "objective change below tolerance";
        ++iter;
        break;
      }
      if (++stall_count >= 10) {
        message = "stalled with a large gradient";
        ++iter;
        break;
      }
    } else {
      stall_count = 0;
    }
  }

  res.x = ws.to_natural(w);
  res.value = value;
  res.gradient = natural_grad;
  res.grad_norm = free_sup_norm(natural_grad, fixed);
  res.iterations = iter;
  res.converged = converged || res.grad_norm <= opts.grad_tol;
  res.message = message;
  return res;
}

void newton_polish(const Objective& objective, const HessianFn& hessian,
                   const std::vector<bool>& fixed, MaximizeResult& state,
                   const MaximizeOptions& opts) {
  const int n = static_cast<int>(state.x.size());
  std::vector<int> free_idx;
  for (int j = 0; j < n; ++j)
    if (!fixed[j]) free_idx.push_back(j);
  if (free_idx.empty()) return;

  Eigen::VectorXd x = state.x;
  Eigen::VectorXd grad = state.gradient;
  double value = state.value;
  if (!std::isfinite(value)) return;

  for (int it = 0; it < 20; ++it) {
    double sup = 0.0;
    for (int j : free_idx) sup = std::max(sup, std::abs(grad[j]));
    if (sup <= opts.grad_tol) break;

    Eigen::MatrixXd full_hess;
    if (!hessian(x, full_hess)) break;
    const int m = static_cast<int>(free_idx.size());
    Eigen::MatrixXd neg(m, m);
    Eigen::VectorXd g_free(m);
    for (int a = 0; a < m; ++a) {
      g_free[a] = grad[free_idx[a]];
      for (int b = 0; b < m; ++b)
        neg(a, b) = -full_hess(free_idx[a], free_idx[b]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(neg);
    if (llt.info() != Eigen::Success) break;  // not locally concave
    Eigen::VectorXd step_free = llt.solve(g_free);

    bool moved = false;
    double scale = 1.0;
    for (int half = 0; half < 30; ++half) {
      Eigen::VectorXd trial = x;
      for (int a = 0; a < m; ++a) trial[free_idx[a]] += scale * step_free[a];
      double trial_value;
      Eigen::VectorXd trial_grad(n);
      if (objective(trial, trial_value, &trial_grad) &&
          std::isfinite(trial_value) && trial_grad.allFinite()) {
        double trial_sup = 0.0;
        for (int j : free_idx)
          trial_sup = std::max(trial_sup, std::abs(trial_grad[j]));
        if (trial_value >= value - 1e-12 * (1.0 + std::abs(value)) &&
            trial_sup < sup) {
          x = trial;
          value = trial_value;
          grad = trial_grad;
          moved = true;
          break;
        }
      }
      scale *= 0.5;
    }
    if (!moved) break;
  }

  double sup = 0.0;
  for (int j : free_idx) sup = std::max(sup, std::abs(grad[j]));
  if (sup <= state.grad_norm || value >= state.value) {
    state.x = x;
    state.value = value;
    state.gradient = grad;
    state.grad_norm = sup;
    if (sup <= opts.grad_tol_relaxed) {
      state.converged = true;
      if (sup <= opts.grad_tol) state.message = "gradient below tolerance";
    }
  }
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

std::vector<double> from_eigen(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::MatrixXd to_eigen_matrix(const std::vector<double>& row_major, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = row_major[i * n + j];
  return m;
}

std::vector<double> from_eigen_matrix(const Eigen::MatrixXd& m) {
  std::vector<double> out(m.rows() * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
  return out;
}

bool spd_inverse(const Eigen::MatrixXd& m, Eigen::MatrixXd& out) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return false;
  // reject effectively singular systems that LLT happens to accept
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) return false;
  const double max_ev = es.eigenvalues().maxCoeff();
  const double min_ev = es.eigenvalues().minCoeff();
  if (!(max_ev > 0.0) || min_ev <= 1e-12 * max_ev) return false;
  out = llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  return true;
}

double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace claimcast::detail
