#include "claimcast/cond_dist.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "claimcast/errors.hpp"
#include "optimizer.hpp"

namespace claimcast {

namespace {

constexpr double kYearDays = 52.0 * 7.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

double series_value(const std::vector<double>& th, double z) {
  double v = th[0] + (z / 7.0) * th[1];
  const double w = 2.0 * std::numbers::pi * z / kYearDays;
  for (std::size_t base = 2; base + 2 < th.size() + 1; base += 3)
    v += th[base] * std::cos(th[base + 1] * w) +
         th[base + 2] * std::sin(th[base + 1] * w);
  return v;
}

// gradient of series_value w.r.t. the series parameters
void series_grad(const std::vector<double>& th, double z, double* out) {
  out[0] = 1.0;
  out[1] = z / 7.0;
  const double w = 2.0 * std::numbers::pi * z / kYearDays;
  for (std::size_t base = 2; base + 2 < th.size() + 1; base += 3) {
    const double phase = th[base + 1] * w;
    out[base] = std::cos(phase);
    out[base + 1] =
        w * (-th[base] * std::sin(phase) + th[base + 2] * std::cos(phase));
    out[base + 2] = std::sin(phase);
  }
}

// hessian contributions of series_value (only the xi rows/columns)
void series_hess_add(const std::vector<double>& th, double z, double weight,
                     Eigen::MatrixXd& block) {
  const double w = 2.0 * std::numbers::pi * z / kYearDays;
  for (std::size_t base = 2; base + 2 < th.size() + 1; base += 3) {
    const double phase = th[base + 1] * w;
    const double d_xi_delta = -w * std::sin(phase);
    const double d_xi_gamma = w * std::cos(phase);
    const double d_xi_xi =
        -w * w *
        (th[base] * std::cos(phase) + th[base + 2] * std::sin(phase));
    block(base, base + 1) += weight * d_xi_delta;
    block(base + 1, base) += weight * d_xi_delta;
    block(base + 2, base + 1) += weight * d_xi_gamma;
    block(base + 1, base + 2) += weight * d_xi_gamma;
    block(base + 1, base + 1) += weight * d_xi_xi;
  }
}

struct LogDensityDerivs {
  double value;
  double dc, dd;
  double dcc, dcd, ddd;
};

LogDensityDerivs log_density_derivs(CondDistFamily family, double x, double c,
                                    double d) {
  LogDensityDerivs out{};
  switch (family) {
    case CondDistFamily::lognormal: {
      const double r = std::log(x) - c;
      out.value = -std::log(x) - std::log(d) -
                  0.5 * std::log(2.0 * std::numbers::pi) -
                  r * r / (2.0 * d * d);
      out.dc = r / (d * d);
      out.dd = -1.0 / d + r * r / (d * d * d);
      out.dcc = -1.0 / (d * d);
      out.dcd = -2.0 * r / (d * d * d);
      out.ddd = 1.0 / (d * d) - 3.0 * r * r / (d * d * d * d);
      return out;
    }
    case CondDistFamily::weibull: {
      const double lr = std::log(x) - std::log(d);
      const double pow_term = std::exp(c * lr);  // (x/d)^c
      out.value = std::log(c) - c * std::log(d) + (c - 1.0) * std::log(x) -
                  pow_term;
      out.dc = 1.0 / c + lr - pow_term * lr;
      out.dd = (c / d) * (pow_term - 1.0);
      out.dcc = -1.0 / (c * c) - pow_term * lr * lr;
      out.dcd = (-1.0 + pow_term + pow_term * c * lr) / d;
      out.ddd = (c / (d * d)) * (1.0 - pow_term - pow_term * c);
      return out;
    }
    case CondDistFamily::gamma: {
      out.value = (c - 1.0) * std::log(x) - x / d - c * std::log(d) -
                  std::lgamma(c);
      out.dc = std::log(x) - std::log(d) - boost::math::digamma(c);
      out.dd = x / (d * d) - c / d;
      out.dcc = -boost::math::trigamma(c);
      out.dcd = -1.0 / d;
      out.ddd = -2.0 * x / (d * d * d) + c / (d * d);
      return out;
    }
  }
  return out;
}

bool needs_positive_c(CondDistFamily family) {
  return family != CondDistFamily::lognormal;
}

}  // namespace

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw DomainError("standard normal quantile needs u in (0,1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

std::string family_name(CondDistFamily family) {
  switch (family) {
    case CondDistFamily::lognormal: return "lognormal";
    case CondDistFamily::weibull: return "weibull";
    case CondDistFamily::gamma: return "gamma";
  }
  return "?";
}

CondDistFamily cond_dist_family_from_name(const std::string& name) {
  if (name == "lognormal") return CondDistFamily::lognormal;
  if (name == "weibull") return CondDistFamily::weibull;
  if (name == "gamma") return CondDistFamily::gamma;
  throw InputError("unknown conditional distribution family '" + name + "'");
}

CondDistModel::CondDistModel(CondDistFamily family, int fourier_order,
                             bool trend, std::vector<double> theta1,
                             std::vector<double> theta2, bool xi_fixed)
    : family_(family),
      order_(fourier_order),
      trend_(trend),
      xi_fixed_(xi_fixed),
      theta1_(std::move(theta1)),
      theta2_(std::move(theta2)) {
  if (order_ < 0) throw DomainError("fourier order must be >= 0");
  const std::size_t want = 2 + 3 * static_cast<std::size_t>(order_);
  if (theta1_.size() != want || theta2_.size() != want)
    throw DomainError("parameter series need " + std::to_string(want) +
                      " entries for order " + std::to_string(order_));
  for (double v : theta1_)
    if (!std::isfinite(v)) throw DomainError("non-finite series parameter");
  for (double v : theta2_)
    if (!std::isfinite(v)) throw DomainError("non-finite series parameter");
}

CondDistModel CondDistModel::constant(CondDistFamily family, double c,
                                      double d) {
  return CondDistModel(family, 0, false, {c, 0.0}, {d, 0.0});
}

double CondDistModel::param_c(double z) const {
  return series_value(theta1_, z);
}
double CondDistModel::param_d(double z) const {
  return series_value(theta2_, z);
}

void CondDistModel::check_at(double c, double d, double z) const {
  std::ostringstream msg;
  if (!(d > 0.0)) {
    msg << "scale parameter d(z) = " << d << " is not positive at z = " << z;
    throw DomainError(msg.str());
  }
  if (needs_positive_c(family_) && !(c > 0.0)) {
    msg << "shape parameter c(z) = " << c << " is not positive at z = " << z;
    throw DomainError(msg.str());
  }
}

double CondDistModel::density(double x, double z) const {
  const double c = param_c(z), d = param_d(z);
  check_at(c, d, z);
  switch (family_) {
    case CondDistFamily::lognormal: {
      if (!(x > 0.0)) return 0.0;
      const double r = std::log(x) - c;
      return std::exp(-r * r / (2.0 * d * d)) /
             (std::sqrt(2.0 * std::numbers::pi) * x * d);
    }
    case CondDistFamily::weibull:
    case CondDistFamily::gamma: {
      if (x < 0.0) return 0.0;
      if (x == 0.0) {
        if (c < 1.0) return kInf;
        return c == 1.0 ? 1.0 / d : 0.0;
      }
      return std::exp(log_density_derivs(family_, x, c, d).value);
    }
  }
  return 0.0;
}

double CondDistModel::cdf(double x, double z) const {
  const double c = param_c(z), d = param_d(z);
  check_at(c, d, z);
  if (x <= 0.0) return 0.0;
  switch (family_) {
    case CondDistFamily::lognormal:
      return std_normal_cdf((std::log(x) - c) / d);
    case CondDistFamily::weibull:
      return -std::expm1(-std::pow(x / d, c));
    case CondDistFamily::gamma:
      return boost::math::gamma_p(c, x / d);
  }
  return 0.0;
}

double CondDistModel::mean(double z) const {
  const double c = param_c(z), d = param_d(z);
  check_at(c, d, z);
  switch (family_) {
    case CondDistFamily::lognormal:
      return std::exp(c + d * d / 2.0);
    case CondDistFamily::weibull:
      return d * std::tgamma(1.0 + 1.0 / c);
    case CondDistFamily::gamma:
      return c * d;
  }
  return 0.0;
}

double CondDistModel::quantile(double u, double z) const {
  if (!(u > 0.0 && u < 1.0))
    throw DomainError("quantile requires u in (0,1)");
  const double c = param_c(z), d = param_d(z);
  check_at(c, d, z);
  if (family_ == CondDistFamily::lognormal)
    return std::exp(c + d * std_normal_quantile(u));

  // monotone bisection safeguarding Newton steps on cdf(x) - u
  double lo = 0.0;
  double hi = std::max(mean(z), d);
  for (int grow = 0; grow < 400 && cdf(hi, z) < u; ++grow) hi *= 2.0;
  double x = std::min(hi, std::max(mean(z), 1e-300));
  for (int it = 0; it < 200; ++it) {
    const double f = cdf(x, z) - u;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    const double deriv = density(x, z);
    double next = (deriv > 0.0 && std::isfinite(deriv)) ? x - f / deriv : x;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-12 * std::max(1.0, std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

double CondDistModel::sample(RngStream& rng, double z) const {
  return quantile(rng.uniform_open(), z);
}

PitResult pit_transform(
    const CondDistModel& model,
    const std::vector<std::pair<double, double>>& observations) {
  PitResult out;
  out.values.reserve(observations.size());
  for (const auto& [z, value] : observations) {
    double u = model.cdf(value, z);
    if (u < 1e-12 || u > 1.0 - 1e-12) {
      u = std::clamp(u, 1e-12, 1.0 - 1e-12);
      ++out.clamped;
    }
    out.values.push_back(std_normal_quantile(u));
  }
  return out;
}

namespace {

using detail::from_eigen;
using detail::to_eigen;

struct SeriesLayout {
  std::size_t size;         // entries per series
  std::vector<bool> fixed;  // over the concatenated [theta1 | theta2]
};

SeriesLayout make_layout(int order, bool trend, bool free_xi) {
  const std::size_t k = 2 + 3 * static_cast<std::size_t>(order);
  SeriesLayout layout{k, std::vector<bool>(2 * k, false)};
  for (std::size_t half = 0; half < 2; ++half) {
    const std::size_t off = half * k;
    if (!trend) layout.fixed[off + 1] = true;
    for (int l = 0; l < order; ++l)
      if (!free_xi) layout.fixed[off + 2 + 3 * l + 1] = true;
  }
  return layout;
}

std::pair<double, double> moment_params(CondDistFamily family,
                                        const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  if (family == CondDistFamily::lognormal) {
    double mean_log = 0.0;
    for (double v : values) mean_log += std::log(v);
    mean_log /= n;
    double var_log = 0.0;
    for (double v : values) {
      const double r = std::log(v) - mean_log;
      var_log += r * r;
    }
    var_log /= std::max(1.0, n - 1.0);
    return {mean_log, std::sqrt(std::max(var_log, 1e-12))};
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= std::max(1.0, n - 1.0);
  var = std::max(var, 1e-12 * mean * mean + 1e-300);
  if (family == CondDistFamily::gamma) {
    const double shape = mean * mean / var;
    return {std::max(shape, 1e-6), var / mean};
  }
  // weibull: match the coefficient of variation, bisecting on the shape
  const double cv2 = var / (mean * mean);
  auto cv2_of = [](double shape) {
    const double g1 = std::tgamma(1.0 + 1.0 / shape);
    const double g2 = std::tgamma(1.0 + 2.0 / shape);
    return g2 / (g1 * g1) - 1.0;
  };
  double lo = 0.05, hi = 50.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cv2_of(mid) > cv2)
      lo = mid;  // cv2 decreases in the shape
    else
      hi = mid;
  }
  const double shape = 0.5 * (lo + hi);
  return {shape, mean / std::tgamma(1.0 + 1.0 / shape)};
}

// weekly moment estimates of (c, d) used to seed the optimizer
struct WeeklyEstimates {
  std::vector<double> centers, c_hat, d_hat;
  double global_c = 0.0, global_d = 1.0;
};

WeeklyEstimates weekly_estimates(
    CondDistFamily family,
    const std::vector<std::pair<double, double>>& obs) {
  WeeklyEstimates out;
  double z_min = kInf;
  for (const auto& o : obs) z_min = std::min(z_min, o.first);
  std::map<long, std::vector<double>> bins;
  for (const auto& [z, v] : obs)
    bins[static_cast<long>(std::floor((z - z_min) / 7.0))].push_back(v);

  std::vector<double> all;
  all.reserve(obs.size());
  for (const auto& o : obs) all.push_back(o.second);
  auto [gc, gd] = moment_params(family, all);
  out.global_c = gc;
  out.global_d = gd;

  for (const auto& [bin, values] : bins) {
    if (values.size() < 3) continue;
    auto [c, d] = moment_params(family, values);
    out.centers.push_back(z_min + 7.0 * bin + 3.5);
    out.c_hat.push_back(c);
    out.d_hat.push_back(d);
  }
  return out;
}

// least squares of weekly parameter estimates on the Fourier basis with
// integer harmonics; the trend column joins only when the trend is enabled
std::vector<double> series_least_squares(const std::vector<double>& centers,
                                         const std::vector<double>& target,
                                         int order, bool trend,
                                         double fallback_alpha) {
  const std::size_t k = 2 + 3 * static_cast<std::size_t>(order);
  std::vector<double> series(k, 0.0);
  for (int l = 0; l < order; ++l) series[2 + 3 * l + 1] = l + 1.0;  // xi
  series[0] = fallback_alpha;

  std::vector<std::size_t> cols;
  cols.push_back(0);
  if (trend) cols.push_back(1);
  for (int l = 0; l < order; ++l) {
    cols.push_back(2 + 3 * l);
    cols.push_back(2 + 3 * l + 2);
  }
  if (centers.size() < cols.size() + 1) return series;

  Eigen::MatrixXd design(centers.size(), cols.size());
  Eigen::VectorXd y(centers.size());
  std::vector<double> basis(k);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    series_grad(series, centers[i], basis.data());
    for (std::size_t j = 0; j < cols.size(); ++j)
      design(i, j) = basis[cols[j]];
    y[i] = target[i];
  }
  Eigen::VectorXd coef = design.colPivHouseholderQr().solve(y);
  if (!coef.allFinite()) return series;
  for (std::size_t j = 0; j < cols.size(); ++j) series[cols[j]] = coef[j];
  return series;
}

std::vector<double> constraint_points(
    const std::vector<std::pair<double, double>>& obs,
    const std::optional<std::pair<double, double>>& window) {
  std::vector<double> pts;
  pts.reserve(obs.size() + 65);
  for (const auto& o : obs) pts.push_back(o.first);
  if (window) {
    const auto [lo, hi] = *window;
    for (int i = 0; i <= 64; ++i) pts.push_back(lo + (hi - lo) * i / 64.0);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

bool feasible_series(CondDistFamily family, const std::vector<double>& theta1,
                     const std::vector<double>& theta2,
                     const std::vector<double>& points) {
  for (double z : points) {
    if (!(series_value(theta2, z) > 0.0)) return false;
    if (needs_positive_c(family) && !(series_value(theta1, z) > 0.0))
      return false;
  }
  return true;
}

// scales the non-intercept terms toward zero until the series is positive
// at every constraint point
bool shrink_to_feasible(std::vector<double>& series,
                        const std::vector<double>& points,
                        double fallback_alpha) {
  auto positive_everywhere = [&] {
    for (double z : points)
      if (!(series_value(series, z) > 0.0)) return false;
    return true;
  };
  if (!(series[0] > 0.0)) series[0] = fallback_alpha;
  for (int it = 0; it < 80 && !positive_everywhere(); ++it) {
    series[1] *= 0.5;
    for (std::size_t base = 2; base + 2 < series.size() + 1; base += 3) {
      series[base] *= 0.5;
      series[base + 2] *= 0.5;
    }
  }
  return positive_everywhere();
}

}  // namespace

CondFitResult fit_cond_dist(
    const std::vector<std::pair<double, double>>& observations,
    CondDistFamily family, int fourier_order, bool trend,
    const CondFitOptions& opts) {
  const std::size_t k = 2 + 3 * static_cast<std::size_t>(fourier_order);
  const std::size_t min_obs = std::max<std::size_t>(10, 3 * k);
  if (observations.size() < min_obs)
    throw InputError("need at least " + std::to_string(min_obs) +
                     " observations for fourier order " +
                     std::to_string(fourier_order));
  for (const auto& [z, v] : observations)
    if (!(v > 0.0) || !std::isfinite(v) || !std::isfinite(z))
      throw InputError("observations must have finite z and positive values");

  const auto layout = make_layout(fourier_order, trend, opts.free_xi);
  const auto points = constraint_points(observations, opts.constraint_window);

  std::vector<double> init;
  if (opts.init) {
    init = *opts.init;
    if (init.size() != 2 * k)
      throw InputError("initial vector needs " + std::to_string(2 * k) +
                       " entries");
  } else {
    auto weekly = weekly_estimates(family, observations);
    auto theta1 = series_least_squares(weekly.centers, weekly.c_hat,
                                       fourier_order, trend, weekly.global_c);
    auto theta2 = series_least_squares(weekly.centers, weekly.d_hat,
                                       fourier_order, trend, weekly.global_d);
    if (!shrink_to_feasible(theta2, points, weekly.global_d))
      throw InputError("could not build a feasible initial scale series");
    if (needs_positive_c(family) &&
        !shrink_to_feasible(theta1, points, weekly.global_c))
      throw InputError("could not build a feasible initial shape series");
    init = theta1;
    init.insert(init.end(), theta2.begin(), theta2.end());
  }
  {
    std::vector<double> t1(init.begin(), init.begin() + k);
    std::vector<double> t2(init.begin() + k, init.end());
    if (!feasible_series(family, t1, t2, points))
      throw InputError("initial parameters violate the positivity constraints");
  }

  detail::Objective objective = [&](const Eigen::VectorXd& x, double& value,
                                    Eigen::VectorXd* grad) {
    std::vector<double> t1(x.data(), x.data() + k);
    std::vector<double> t2(x.data() + k, x.data() + 2 * k);
    if (!feasible_series(family, t1, t2, points)) return false;

    std::vector<double> terms;
    terms.reserve(observations.size());
    Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * k);
    std::vector<double> basis_c(k), basis_d(k);
    for (const auto& [z, v] : observations) {
      const double c = series_value(t1, z);
      const double d = series_value(t2, z);
      const auto ld = log_density_derivs(family, v, c, d);
      if (!std::isfinite(ld.value)) return false;
      terms.push_back(ld.value);
      if (grad) {
        series_grad(t1, z, basis_c.data());
        series_grad(t2, z, basis_d.data());
        for (std::size_t j = 0; j < k; ++j) {
          g[j] += ld.dc * basis_c[j];
          g[k + j] += ld.dd * basis_d[j];
        }
      }
    }
    value = detail::pairwise_sum(terms);
    if (!std::isfinite(value)) return false;
    if (grad) *grad = g;
    return true;
  };

  detail::HessianFn hessian = [&](const Eigen::VectorXd& x,
                                  Eigen::MatrixXd& out) {
    std::vector<double> t1(x.data(), x.data() + k);
    std::vector<double> t2(x.data() + k, x.data() + 2 * k);
    if (!feasible_series(family, t1, t2, points)) return false;
    out = Eigen::MatrixXd::Zero(2 * k, 2 * k);
    Eigen::MatrixXd hc = Eigen::MatrixXd::Zero(k, k);
    Eigen::MatrixXd hd = Eigen::MatrixXd::Zero(k, k);
    std::vector<double> basis_c(k), basis_d(k);
    for (const auto& [z, v] : observations) {
      const double c = series_value(t1, z);
      const double d = series_value(t2, z);
      const auto ld = log_density_derivs(family, v, c, d);
      series_grad(t1, z, basis_c.data());
      series_grad(t2, z, basis_d.data());
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
          out(a, b) += ld.dcc * basis_c[a] * basis_c[b];
          out(k + a, k + b) += ld.ddd * basis_d[a] * basis_d[b];
          out(a, k + b) += ld.dcd * basis_c[a] * basis_d[b];
        }
      series_hess_add(t1, z, ld.dc, hc);
      series_hess_add(t2, z, ld.dd, hd);
    }
    out.bottomLeftCorner(k, k) = out.topRightCorner(k, k).transpose();
    out.topLeftCorner(k, k) += hc;
    out.bottomRightCorner(k, k) += hd;
    return out.allFinite();
  };

  detail::MaximizeOptions mopts;
  mopts.max_iterations = opts.max_iterations;
  const std::vector<bool> no_log(2 * k, false);

  auto run_from = [&](const std::vector<double>& start) {
    auto r = detail::maximize(objective, to_eigen(start), no_log, layout.fixed,
                              mopts);
    detail::newton_polish(objective, hessian, layout.fixed, r, mopts);
    return r;
  };

  detail::MaximizeResult best = run_from(init);
  if (opts.free_xi && fourier_order > 0) {
    // the likelihood is multimodal in the frequencies; multistart around
    // the integer harmonics
    const double kicks[4] = {0.25, -0.25, 0.25, -0.25};
    for (int start = 0; start < 4; ++start) {
      auto jittered = init;
      for (std::size_t half = 0; half < 2; ++half)
        for (int l = 0; l < fourier_order; ++l) {
          const std::size_t idx = half * k + 2 + 3 * l + 1;
          const double sign = (start >= 2 && l % 2 == 1) ? -1.0 : 1.0;
          jittered[idx] += sign * kicks[start];
        }
      auto r = run_from(jittered);
      if (r.value > best.value) best = r;
    }
  }

  CondFitResult result;
  result.fit.estimate = from_eigen(best.x);
  result.fit.loglik = best.value;
  result.fit.iterations = best.iterations;
  result.fit.converged = best.converged;
  result.fit.gradient_norm = best.grad_norm;
  if (!best.converged)
    result.fit.warnings.push_back("optimizer: " + best.message);

  // observed information over the free coordinates, embedded at full size
  // (fixed rows and columns stay zero, with zero reported standard error)
  std::vector<std::size_t> free_idx;
  for (std::size_t j = 0; j < 2 * k; ++j)
    if (!layout.fixed[j]) free_idx.push_back(j);
  Eigen::MatrixXd hess_full;
  result.fit.information.assign(4 * k * k, 0.0);
  if (hessian(best.x, hess_full)) {
    Eigen::MatrixXd info(free_idx.size(), free_idx.size());
    for (std::size_t a = 0; a < free_idx.size(); ++a)
      for (std::size_t b = 0; b < free_idx.size(); ++b)
        info(a, b) = -hess_full(free_idx[a], free_idx[b]);
    for (std::size_t a = 0; a < free_idx.size(); ++a)
      for (std::size_t b = 0; b < free_idx.size(); ++b)
        result.fit.information[free_idx[a] * 2 * k + free_idx[b]] =
            info(a, b);
    Eigen::MatrixXd cov;
    if (detail::spd_inverse(info, cov)) {
      result.fit.std_errors.assign(2 * k, 0.0);
      for (std::size_t a = 0; a < free_idx.size(); ++a)
        result.fit.std_errors[free_idx[a]] =
            std::sqrt(std::max(0.0, cov(a, a)));
      result.fit.std_errors_available = true;
    } else {
      result.fit.warnings.push_back(
          "observed information singular; standard errors unavailable");
    }
  }

  std::vector<double> t1(result.fit.estimate.begin(),
                         result.fit.estimate.begin() + k);
  std::vector<double> t2(result.fit.estimate.begin() + k,
                         result.fit.estimate.end());
  result.model = CondDistModel(family, fourier_order, trend, std::move(t1),
                               std::move(t2), !opts.free_xi);
  return result;
}

}  // namespace claimcast
