#include "claimcast/poisson_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "claimcast/errors.hpp"
#include "claimcast/quadrature.hpp"
#include "intensity_detail.hpp"
#include "optimizer.hpp"

namespace claimcast {

namespace {

using detail::from_eigen;
using detail::from_eigen_matrix;
using detail::pairwise_sum;
using detail::to_eigen;
using detail::to_eigen_matrix;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<std::size_t> period_index(IntensityFamily family) {
  if (family == IntensityFamily::log_periodic) return 4;
  if (family == IntensityFamily::quad_periodic) return 5;
  return std::nullopt;
}

std::optional<std::size_t> period_index(MarkFamily family) {
  if (family == MarkFamily::exp_trend_periodic) return 4;
  return std::nullopt;
}

// Least squares of log binned empirical reporting rate on the given basis
// columns; used only to initialize the optimizer.
std::vector<double> log_rate_regression(
    const Portfolio& p,
    const std::function<std::vector<double>(double)>& basis, int n_coef) {
  const double a = p.horizon_a();
  const std::size_t m = p.size();
  const int bins =
      std::clamp(static_cast<int>(m / 10), 4, 24);
  std::vector<double> mids, logs;
  for (int b = 0; b < bins; ++b) {
    const double lo = a * b / bins, hi = a * (b + 1) / bins;
    long count = 0;
    for (const auto& rec : p.records())
      if (rec.reporting_time > lo && rec.reporting_time <= hi) ++count;
    if (b == 0)
      for (const auto& rec : p.records())
        if (rec.reporting_time == 0.0) ++count;
    if (count > 0) {
      mids.push_back(0.5 * (lo + hi));
      logs.push_back(std::log(count / (hi - lo)));
    }
  }
  Eigen::VectorXd fallback = Eigen::VectorXd::Zero(n_coef);
  fallback[0] = std::log(std::max(1.0, double(m)) / a);
  if (static_cast<int>(mids.size()) < n_coef) return from_eigen(fallback);

  Eigen::MatrixXd design(mids.size(), n_coef);
  Eigen::VectorXd target(mids.size());
  for (std::size_t i = 0; i < mids.size(); ++i) {
    auto row = basis(mids[i]);
    for (int j = 0; j < n_coef; ++j) design(i, j) = row[j];
    target[i] = logs[i];
  }
  Eigen::VectorXd coef =
      design.colPivHouseholderQr().solve(target);
  if (!coef.allFinite()) return from_eigen(fallback);
  return from_eigen(coef);
}

std::vector<double> default_reporting_init(const Portfolio& p,
                                           IntensityFamily family) {
  const double a = p.horizon_a();
  const double m = static_cast<double>(p.size());
  switch (family) {
    case IntensityFamily::constant:
      return {m / a};
    case IntensityFamily::exponential:
      return log_rate_regression(
          p, [](double t) { return std::vector<double>{1.0, t}; }, 2);
    case IntensityFamily::log_periodic: {
      auto coef = log_rate_regression(
          p,
          [](double t) {
            return std::vector<double>{1.0, std::log(std::max(t, 1e-9))};
          },
          2);
      return {coef[0], coef[1], 0.0, 0.0, 364.0};
    }
    case IntensityFamily::quad_periodic: {
      auto coef = log_rate_regression(
          p, [](double t) { return std::vector<double>{1.0, t, t * t}; }, 3);
      return {coef[0], coef[1], coef[2], 0.0, 0.0, 364.0};
    }
    case IntensityFamily::custom:
      throw InputError("custom intensity fits need explicit initial values");
  }
  return {};
}

std::vector<double> default_marks_init(const Portfolio& p, MarkFamily family) {
  double events = 0.0, exposure = 0.0;
  for (const auto& rec : p.records()) {
    events += static_cast<double>(rec.payments.size());
    exposure += p.horizon_a() - rec.reporting_time;
  }
  if (exposure <= 0.0)
    throw InputError("portfolio has no payment exposure before horizon_a");
  const double rate = std::max(events, 0.5) / exposure;
  switch (family) {
    case MarkFamily::constant_mark:
      return {rate};
    case MarkFamily::weibull_baseline:
      return {1.0, rate, 0.0};
    case MarkFamily::exp_trend_periodic:
      return {std::log(rate), 0.0, 0.0, 0.0, 364.0};
    case MarkFamily::custom:
      throw InputError("custom mark fits need explicit initial values");
  }
  return {};
}

// Entry-wise comparison of expected vs observed information; appends a
// warning when they disagree by more than 20% (a model-misfit heuristic).
void information_agreement_warning(const Eigen::MatrixXd& expected,
                                   const Eigen::MatrixXd& observed,
                                   FitResult& fit) {
  const double scale =
      std::max(expected.cwiseAbs().maxCoeff(), observed.cwiseAbs().maxCoeff());
  if (!(scale > 0.0) || !expected.allFinite() || !observed.allFinite()) return;
  double worst = 0.0;
  for (int i = 0; i < expected.rows(); ++i)
    for (int j = 0; j < expected.cols(); ++j) {
      const double denom =
          std::max(std::abs(expected(i, j)), std::abs(observed(i, j)));
      if (denom < 1e-8 * scale) continue;
      worst = std::max(worst, std::abs(expected(i, j) - observed(i, j)) / denom);
    }
  if (worst > 0.20) {
    std::ostringstream msg;
    msg << "expected and observed information disagree by "
        << static_cast<int>(worst * 100.0)
        << "% entrywise; the model may fit the data poorly";
    fit.warnings.push_back(msg.str());
  }
}

void finalize_fit(FitResult& fit, const Eigen::MatrixXd& expected_info,
                  const Eigen::MatrixXd& observed_info) {
  fit.information = from_eigen_matrix(expected_info);
  Eigen::MatrixXd cov;
  if (detail::spd_inverse(expected_info, cov)) {
    fit.std_errors.resize(expected_info.rows());
    for (int j = 0; j < expected_info.rows(); ++j)
      fit.std_errors[j] = std::sqrt(std::max(0.0, cov(j, j)));
    fit.std_errors_available = true;
  } else {
    fit.std_errors.clear();
    fit.std_errors_available = false;
    fit.warnings.push_back(
        "information matrix singular; standard errors unavailable");
  }
  information_agreement_warning(expected_info, observed_info, fit);
}

}  // namespace

double loglik_reporting(const Portfolio& p, const IntensityModel& model) {
  std::vector<double> terms;
  terms.reserve(p.size());
  for (const auto& rec : p.records())
    terms.push_back(std::log(model.eval(rec.reporting_time)));
  return pairwise_sum(terms) - model.cumulative(p.horizon_a());
}

std::vector<double> score_reporting(const Portfolio& p,
                                    const IntensityModel& model) {
  const std::size_t q = model.param_count();
  std::vector<std::vector<double>> terms(q);
  for (auto& v : terms) v.reserve(p.size());
  for (const auto& rec : p.records()) {
    const double rate = model.eval(rec.reporting_time);
    const auto g = model.grad(rec.reporting_time);
    for (std::size_t j = 0; j < q; ++j) terms[j].push_back(g[j] / rate);
  }
  const auto cum_grad = model.cumulative_grad(p.horizon_a());
  std::vector<double> score(q);
  for (std::size_t j = 0; j < q; ++j)
    score[j] = pairwise_sum(terms[j]) - cum_grad[j];
  return score;
}

double loglik_marks(const Portfolio& p, const MarkIntensityModel& model) {
  std::vector<double> terms;
  terms.reserve(p.size());
  for (const auto& rec : p.records()) {
    double contrib = -model.cumulative(p.horizon_a(), rec.reporting_time);
    for (const auto& pay : rec.payments)
      contrib += std::log(model.eval(pay.time, rec.reporting_time));
    terms.push_back(contrib);
  }
  return pairwise_sum(terms);
}

std::vector<double> score_marks(const Portfolio& p,
                                const MarkIntensityModel& model) {
  const std::size_t q = model.param_count();
  std::vector<std::vector<double>> terms(q);
  for (auto& v : terms) v.reserve(p.size());
  for (const auto& rec : p.records()) {
    const double z = rec.reporting_time;
    auto contrib = model.cumulative_grad(p.horizon_a(), z);
    for (auto& c : contrib) c = -c;
    for (const auto& pay : rec.payments) {
      const double rate = model.eval(pay.time, z);
      const auto g = model.grad(pay.time, z);
      for (std::size_t j = 0; j < q; ++j) contrib[j] += g[j] / rate;
    }
    for (std::size_t j = 0; j < q; ++j) terms[j].push_back(contrib[j]);
  }
  std::vector<double> score(q);
  for (std::size_t j = 0; j < q; ++j) score[j] = pairwise_sum(terms[j]);
  return score;
}

std::vector<double> reporting_information(const IntensityModel& model,
                                          double t) {
  const std::size_t q = model.param_count();
  const auto& par = model.params();
  switch (model.family()) {
    case IntensityFamily::constant:
      return {t / par[0]};
    case IntensityFamily::exponential: {
      // matches the closed form for exp(p0 + p1 z): entries are the
      // integrals of z^k exp(p0 + p1 z) for k = 0, 1, 2
      const double scale = std::exp(par[0]);
      const double g1 = scale * t * detail::expm1_ratio1(par[1] * t);
      const double g2 = scale * t * t * detail::expm1_ratio2(par[1] * t);
      const double g3 = scale * t * t * t * detail::expm1_ratio3(par[1] * t);
      return {g1, g2, g2, g3};
    }
    default: {
      const double lo = model.family() == IntensityFamily::log_periodic
                            ? 1e-9
                            : 0.0;
      std::vector<double> info(q * q, 0.0);
      if (t <= lo) return info;
      for (std::size_t j = 0; j < q; ++j)
        for (std::size_t k = j; k < q; ++k) {
          info[j * q + k] = info[k * q + j] = integrate_value(
              [&](double z) {
                const auto g = model.grad(z);
                return g[j] * g[k] / model.eval(z);
              },
              lo, t, QuadratureOptions{1e-10, 1e-9, 2000});
        }
      return info;
    }
  }
}

std::vector<double> marks_information(const Portfolio& p,
                                      const MarkIntensityModel& model) {
  const std::size_t q = model.param_count();
  const double a = p.horizon_a();
  if (model.family() == MarkFamily::constant_mark) {
    double exposure = 0.0;
    for (const auto& rec : p.records()) exposure += a - rec.reporting_time;
    return {exposure / model.params()[0]};
  }
  std::vector<double> info(q * q, 0.0);
  for (const auto& rec : p.records()) {
    const double z = rec.reporting_time;
    if (a <= z) continue;
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t k = j; k < q; ++k) {
        const double term = integrate_value(
            [&](double tau) {
              const auto g = model.grad(tau, z);
              return g[j] * g[k] / model.eval(tau, z);
            },
            z, a, QuadratureOptions{1e-10, 1e-8, 2000});
        info[j * q + k] += term;
        if (k != j) info[k * q + j] += term;
      }
  }
  return info;
}

namespace {

// Observed information (negative log-likelihood hessian) for the reporting
// process, used for the expected-vs-observed agreement warning.
Eigen::MatrixXd observed_reporting_information(const Portfolio& p,
                                               const IntensityModel& model) {
  const std::size_t q = model.param_count();
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(q, q);
  for (const auto& rec : p.records()) {
    const double t = rec.reporting_time;
    const double rate = model.eval(t);
    const auto g = model.grad(t);
    const auto h = model.hessian(t);
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t k = 0; k < q; ++k)
        hess(j, k) += h[j * q + k] / rate - g[j] * g[k] / (rate * rate);
  }
  const auto cum_hess = model.cumulative_hessian(p.horizon_a());
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t k = 0; k < q; ++k) hess(j, k) -= cum_hess[j * q + k];
  return -hess;
}

Eigen::MatrixXd observed_marks_information(const Portfolio& p,
                                           const MarkIntensityModel& model) {
  const std::size_t q = model.param_count();
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(q, q);
  for (const auto& rec : p.records()) {
    const double z = rec.reporting_time;
    for (const auto& pay : rec.payments) {
      const double rate = model.eval(pay.time, z);
      const auto g = model.grad(pay.time, z);
      const auto h = model.hessian(pay.time, z);
      for (std::size_t j = 0; j < q; ++j)
        for (std::size_t k = 0; k < q; ++k)
          hess(j, k) += h[j * q + k] / rate - g[j] * g[k] / (rate * rate);
    }
    const auto cum_hess = model.cumulative_hessian(p.horizon_a(), z);
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t k = 0; k < q; ++k) hess(j, k) -= cum_hess[j * q + k];
  }
  return -hess;
}

template <typename Model, typename LoglikFn, typename ScoreFn, typename HessFn>
FitResult run_fit(const Portfolio& p, const Model& prototype,
                  std::vector<double> init, const FitOptions& opts,
                  std::optional<std::size_t> period_idx,
                  const LoglikFn& loglik_fn, const ScoreFn& score_fn,
                  const HessFn& loglik_hessian_fn) {
  if (init.size() != prototype.param_count())
    throw InputError("initial values have wrong dimension for family '" +
                     family_name(prototype.family()) + "'");
  const std::size_t q = init.size();
  std::vector<bool> log_transform(q, false);
  for (std::size_t idx : prototype.positive_params()) log_transform[idx] = true;
  for (std::size_t j = 0; j < q; ++j)
    if (log_transform[j] && !(init[j] > 0.0))
      throw InputError("initial value for a positive parameter must be > 0");

  detail::Objective objective = [&](const Eigen::VectorXd& x, double& value,
                                    Eigen::VectorXd* grad) {
    Model m;
    try {
      m = prototype.with_params(from_eigen(x));
      value = loglik_fn(p, m);
    } catch (const DomainError&) {
      return false;
    } catch (const NumericalError&) {
      return false;
    }
    if (!std::isfinite(value)) return false;
    if (grad) {
      auto s = score_fn(p, m);
      *grad = to_eigen(s);
      if (!grad->allFinite()) return false;
    }
    return true;
  };

  detail::MaximizeOptions mopts;
  mopts.max_iterations = opts.max_iterations;

  auto run_once = [&](std::vector<double> start,
                      bool fix_period) -> detail::MaximizeResult {
    std::vector<bool> fixed(q, false);
    if (fix_period && period_idx) fixed[*period_idx] = true;
    return detail::maximize(objective, to_eigen(start), log_transform, fixed,
                            mopts);
  };

  detail::MaximizeResult best;
  if (!opts.period_grid.empty() && period_idx) {
    bool have = false;
    for (double candidate : opts.period_grid) {
      auto start = init;
      start[*period_idx] = candidate;
      auto r = run_once(start, true);
      if (!have || r.value > best.value) {
        best = r;
        have = true;
      }
    }
    // refine with the period released
    auto refined = run_once(from_eigen(best.x), false);
    if (refined.value >= best.value) best = refined;
  } else {
    best = run_once(init, false);
  }

  detail::HessianFn hess = [&](const Eigen::VectorXd& x,
                               Eigen::MatrixXd& out) {
    try {
      out = loglik_hessian_fn(prototype.with_params(from_eigen(x)));
    } catch (const DomainError&) {
      return false;
    } catch (const NumericalError&) {
      return false;
    }
    return out.allFinite();
  };
  detail::newton_polish(objective, hess, std::vector<bool>(q, false), best,
                        detail::MaximizeOptions{});

  FitResult fit;
  fit.estimate = from_eigen(best.x);
  fit.loglik = best.value;
  fit.iterations = best.iterations;
  fit.converged = best.converged;
  fit.gradient_norm = best.grad_norm;
  if (!best.converged) fit.warnings.push_back("optimizer: " + best.message);
  return fit;
}

}  // namespace

FitResult fit_reporting(const Portfolio& p, const IntensityModel& prototype,
                        const FitOptions& opts) {
  if (p.empty()) throw InputError("fit_reporting requires a nonempty portfolio");
  if (p.horizon_a() <= 0.0)
    throw InputError("fit_reporting requires a positive horizon");

  std::vector<double> init = opts.init
                                 ? *opts.init
                                 : default_reporting_init(p, prototype.family());
  FitResult fit = run_fit(
      p, prototype, init, opts, period_index(prototype.family()),
      loglik_reporting, score_reporting, [&p](const IntensityModel& m) {
        return Eigen::MatrixXd(-observed_reporting_information(p, m));
      });

  const auto fitted = prototype.with_params(fit.estimate);
  Eigen::MatrixXd expected = to_eigen_matrix(
      reporting_information(fitted, p.horizon_a()),
      static_cast<int>(fitted.param_count()));
  Eigen::MatrixXd observed = observed_reporting_information(p, fitted);
  finalize_fit(fit, expected, observed);
  return fit;
}

FitResult fit_marks(const Portfolio& p, const MarkIntensityModel& prototype,
                    const FitOptions& opts) {
  if (p.empty()) throw InputError("fit_marks requires a nonempty portfolio");

  std::vector<double> init =
      opts.init ? *opts.init : default_marks_init(p, prototype.family());
  FitResult fit = run_fit(
      p, prototype, init, opts, period_index(prototype.family()), loglik_marks,
      score_marks, [&p](const MarkIntensityModel& m) {
        return Eigen::MatrixXd(-observed_marks_information(p, m));
      });

  const auto fitted = prototype.with_params(fit.estimate);
  Eigen::MatrixXd expected =
      to_eigen_matrix(marks_information(p, fitted),
                      static_cast<int>(fitted.param_count()));
  Eigen::MatrixXd observed = observed_marks_information(p, fitted);
  finalize_fit(fit, expected, observed);
  return fit;
}

}  // namespace claimcast
