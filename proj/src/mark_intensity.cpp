#include <algorithm>
#include <cmath>
#include <limits>

#include "claimcast/errors.hpp"
#include "claimcast/intensity.hpp"
#include "claimcast/quadrature.hpp"
#include "intensity_detail.hpp"

namespace claimcast {

namespace {

using detail::expm1_ratio1;
using detail::expm1_ratio2;
using detail::expm1_ratio3;

std::size_t expected_param_count(MarkFamily family) {
  switch (family) {
    case MarkFamily::constant_mark: return 1;
    case MarkFamily::weibull_baseline: return 3;
    case MarkFamily::exp_trend_periodic: return 5;
    case MarkFamily::custom: return 0;
  }
  return 0;
}

}  // namespace

std::string family_name(MarkFamily family) {
  switch (family) {
    case MarkFamily::constant_mark: return "constant_mark";
    case MarkFamily::weibull_baseline: return "weibull_baseline";
    case MarkFamily::exp_trend_periodic: return "exp_trend_periodic";
    case MarkFamily::custom: return "custom";
  }
  return "?";
}

MarkFamily mark_family_from_name(const std::string& name) {
  if (name == "constant_mark") return MarkFamily::constant_mark;
  if (name == "weibull_baseline") return MarkFamily::weibull_baseline;
  if (name == "exp_trend_periodic") return MarkFamily::exp_trend_periodic;
  if (name == "custom") return MarkFamily::custom;
  throw InputError("unknown mark intensity family '" + name + "'");
}

MarkIntensityModel::MarkIntensityModel(MarkFamily family,
                                       std::vector<double> params)
    : family_(family), params_(std::move(params)) {
  if (family_ == MarkFamily::custom)
    throw InputError("custom mark intensity requires hooks; use MarkIntensityModel::custom");
  check_params();
}

MarkIntensityModel MarkIntensityModel::custom(CustomMarkHooks hooks,
                                              std::vector<double> params) {
  if (!hooks.eval) throw InputError("custom mark intensity needs an eval hook");
  MarkIntensityModel m;
  m.family_ = MarkFamily::custom;
  m.params_ = std::move(params);
  m.hooks_ = std::move(hooks);
  return m;
}

MarkIntensityModel MarkIntensityModel::with_params(
    std::vector<double> params) const {
  MarkIntensityModel m = *this;
  m.params_ = std::move(params);
  m.check_params();
  return m;
}

void MarkIntensityModel::check_params() const {
  if (family_ != MarkFamily::custom &&
      params_.size() != expected_param_count(family_))
    throw DomainError("family '" + family_name(family_) + "' expects " +
                      std::to_string(expected_param_count(family_)) +
                      " parameters, got " + std::to_string(params_.size()));
  switch (family_) {
    case MarkFamily::constant_mark:
      if (params_[0] < 0.0)
        throw DomainError("constant_mark requires rate >= 0");
      break;
    case MarkFamily::weibull_baseline:
      if (!(params_[0] > 0.0) || !(params_[1] > 0.0))
        throw DomainError("weibull_baseline requires positive shape and scale");
      break;
    case MarkFamily::exp_trend_periodic:
      if (!(params_[4] > 0.0))
        throw DomainError("exp_trend_periodic requires period > 0");
      break;
    default:
      break;
  }
  for (double v : params_)
    if (!std::isfinite(v))
      throw DomainError("non-finite mark intensity parameter");
}

std::vector<std::size_t> MarkIntensityModel::positive_params() const {
  switch (family_) {
    case MarkFamily::constant_mark: return {0};
    case MarkFamily::weibull_baseline: return {0, 1};
    case MarkFamily::exp_trend_periodic: return {4};
    default: return {};
  }
}

double MarkIntensityModel::eval(double tau, double z) const {
  if (tau < z) return 0.0;
  const auto& p = params_;
  switch (family_) {
    case MarkFamily::constant_mark:
      return p[0];
    case MarkFamily::weibull_baseline: {
      const double delta = tau - z;
      if (delta == 0.0) {
        if (p[0] > 1.0) return 0.0;
        if (p[0] == 1.0) return p[1] * std::exp(p[2] * z);
        return std::numeric_limits<double>::infinity();
      }
      return p[0] * p[1] * std::pow(delta, p[0] - 1.0) * std::exp(p[2] * z);
    }
    case MarkFamily::exp_trend_periodic: {
      const auto seas = detail::seasonal_block(z, p[2], p[3], p[4]);
      return std::exp(p[0] + p[1] * (tau - z) + seas.value);
    }
    case MarkFamily::custom:
      return hooks_.eval(tau, z, p);
  }
  return 0.0;
}

double MarkIntensityModel::cumulative(double t, double z) const {
  if (t <= z) return 0.0;
  const auto& p = params_;
  const double delta = t - z;
  switch (family_) {
    case MarkFamily::constant_mark:
      return p[0] * delta;
    case MarkFamily::weibull_baseline:
      return p[1] * std::pow(delta, p[0]) * std::exp(p[2] * z);
    case MarkFamily::exp_trend_periodic: {
      const auto seas = detail::seasonal_block(z, p[2], p[3], p[4]);
      return std::exp(p[0] + seas.value) * delta * expm1_ratio1(p[1] * delta);
    }
    case MarkFamily::custom:
      return integrate_value([&](double tau) { return eval(tau, z); }, z, t);
  }
  return 0.0;
}

std::vector<double> MarkIntensityModel::grad(double tau, double z) const {
  const auto& p = params_;
  const std::size_t q = params_.size();
  if (tau < z) return std::vector<double>(q, 0.0);
  switch (family_) {
    case MarkFamily::constant_mark:
      return {1.0};
    case MarkFamily::weibull_baseline: {
      const double v = eval(tau, z);
      const double delta = tau - z;
      return {v * (1.0 / p[0] + std::log(delta)), v / p[1], v * z};
    }
    case MarkFamily::exp_trend_periodic: {
      const double v = eval(tau, z);
      const auto seas = detail::seasonal_block(z, p[2], p[3], p[4]);
      return {v, v * (tau - z), v * seas.d_amp_cos, v * seas.d_amp_sin,
              v * seas.d_period};
    }
    case MarkFamily::custom: {
      if (hooks_.grad) return hooks_.grad(tau, z, p);
      return detail::fd_gradient(
          [&](std::span<const double> q2) { return hooks_.eval(tau, z, q2); },
          p);
    }
  }
  return {};
}

std::vector<double> MarkIntensityModel::hessian(double tau, double z) const {
  const auto& p = params_;
  const std::size_t q = params_.size();
  if (tau < z) return std::vector<double>(q * q, 0.0);
  switch (family_) {
    case MarkFamily::constant_mark:
      return {0.0};
    case MarkFamily::weibull_baseline: {
      const double v = eval(tau, z);
      const double delta = tau - z;
      const double g0 = 1.0 / p[0] + std::log(delta);
      const double g1 = 1.0 / p[1];
      const double g2 = z;
      // hessian of log-rate is diag(-1/shape^2, -1/scale^2, 0)
      return {v * (g0 * g0 - 1.0 / (p[0] * p[0])),
              v * g0 * g1,
              v * g0 * g2,
              v * g0 * g1,
              v * (g1 * g1 - 1.0 / (p[1] * p[1])),
              v * g1 * g2,
              v * g0 * g2,
              v * g1 * g2,
              v * g2 * g2};
    }
    case MarkFamily::exp_trend_periodic: {
      const double v = eval(tau, z);
      const auto s = detail::seasonal_block(z, p[2], p[3], p[4]);
      std::vector<double> gg = {1.0, tau - z, s.d_amp_cos, s.d_amp_sin,
                                s.d_period};
      std::vector<double> h(25);
      for (int j = 0; j < 5; ++j)
        for (int k = 0; k < 5; ++k) h[j * 5 + k] = v * gg[j] * gg[k];
      h[2 * 5 + 4] += v * s.d2_cos_period;
      h[4 * 5 + 2] += v * s.d2_cos_period;
      h[3 * 5 + 4] += v * s.d2_sin_period;
      h[4 * 5 + 3] += v * s.d2_sin_period;
      h[4 * 5 + 4] += v * s.d2_period_period;
      return h;
    }
    case MarkFamily::custom: {
      if (hooks_.hessian) return hooks_.hessian(tau, z, p);
      return detail::fd_hessian(
          [&](std::span<const double> q2) { return hooks_.eval(tau, z, q2); },
          p);
    }
  }
  return {};
}

std::vector<double> MarkIntensityModel::cumulative_grad(double t,
                                                        double z) const {
  const auto& p = params_;
  const std::size_t q = params_.size();
  if (t <= z) return std::vector<double>(q, 0.0);
  const double delta = t - z;
  switch (family_) {
    case MarkFamily::constant_mark:
      return {delta};
    case MarkFamily::weibull_baseline: {
      const double total = cumulative(t, z);
      return {total * std::log(delta), total / p[1], total * z};
    }
    case MarkFamily::exp_trend_periodic: {
      const auto seas = detail::seasonal_block(z, p[2], p[3], p[4]);
      const double scale = std::exp(p[0] + seas.value);
      const double total = scale * delta * expm1_ratio1(p[1] * delta);
      return {total, scale * delta * delta * expm1_ratio2(p[1] * delta),
              total * seas.d_amp_cos, total * seas.d_amp_sin,
              total * seas.d_period};
    }
    case MarkFamily::custom: {
      std::vector<double> out(q);
      for (std::size_t j = 0; j < q; ++j)
        out[j] = integrate_value([&](double tau) { return grad(tau, z)[j]; },
                                 z, t, QuadratureOptions{1e-10, 1e-9, 2000});
      return out;
    }
  }
  return {};
}

std::vector<double> MarkIntensityModel::cumulative_hessian(double t,
                                                           double z) const {
  const auto& p = params_;
  const std::size_t q = params_.size();
  if (t <= z) return std::vector<double>(q * q, 0.0);
  const double delta = t - z;
  switch (family_) {
    case MarkFamily::constant_mark:
      return {0.0};
    case MarkFamily::weibull_baseline: {
      const double total = cumulative(t, z);
      const double ld = std::log(delta);
      return {total * ld * ld,      total * ld / p[1], total * ld * z,
              total * ld / p[1],    0.0,               total * z / p[1],
              total * ld * z,       total * z / p[1],  total * z * z};
    }
    case MarkFamily::exp_trend_periodic: {
      const auto s = detail::seasonal_block(z, p[2], p[3], p[4]);
      const double scale = std::exp(p[0] + s.value);
      const double e1 = scale * delta * expm1_ratio1(p[1] * delta);
      const double e2 = scale * delta * delta * expm1_ratio2(p[1] * delta);
      const double e3 = scale * delta * delta * delta *
                        expm1_ratio3(p[1] * delta);
      // order: level, trend, cos, sin, period
      std::vector<double> kg = {1.0, 0.0, s.d_amp_cos, s.d_amp_sin, s.d_period};
      std::vector<double> h(25, 0.0);
      for (int j = 0; j < 5; ++j)
        for (int k = 0; k < 5; ++k)
          if (j != 1 && k != 1) h[j * 5 + k] = e1 * kg[j] * kg[k];
      for (int j = 0; j < 5; ++j)
        if (j != 1) h[j * 5 + 1] = h[1 * 5 + j] = e2 * kg[j];
      h[1 * 5 + 1] = e3;
      h[2 * 5 + 4] += e1 * s.d2_cos_period;
      h[4 * 5 + 2] += e1 * s.d2_cos_period;
      h[3 * 5 + 4] += e1 * s.d2_sin_period;
      h[4 * 5 + 3] += e1 * s.d2_sin_period;
      h[4 * 5 + 4] += e1 * s.d2_period_period;
      return h;
    }
    case MarkFamily::custom: {
      std::vector<double> out(q * q);
      for (std::size_t j = 0; j < q; ++j)
        for (std::size_t k = j; k < q; ++k)
          out[j * q + k] = out[k * q + j] = integrate_value(
              [&](double tau) { return hessian(tau, z)[j * q + k]; }, z, t,
              QuadratureOptions{1e-10, 1e-9, 2000});
      return out;
    }
  }
  return {};
}

double MarkIntensityModel::upper_bound(double lo, double hi, double z) const {
  if (!(lo < hi)) throw InputError("upper_bound requires lo < hi");
  if (hi <= z) return 0.0;
  const double lo_eff = std::max(lo, z);
  const auto& p = params_;
  switch (family_) {
    case MarkFamily::constant_mark:
      return p[0];
    case MarkFamily::weibull_baseline: {
      if (p[0] == 1.0) return p[1] * std::exp(p[2] * z);
      if (p[0] > 1.0) return eval(hi, z);
      // decreasing and singular at the reporting time
      if (lo_eff <= z)
        throw NumericalError(
            "weibull_baseline with shape < 1 is unbounded at the reporting "
            "time; cannot bound window");
      return eval(lo_eff, z);
    }
    case MarkFamily::exp_trend_periodic:
      return eval(p[1] >= 0.0 ? hi : lo_eff, z);
    case MarkFamily::custom:
      return detail::grid_upper_bound(
          [&](double tau) { return eval(tau, z); }, lo, hi);
  }
  return 0.0;
}

}  // namespace claimcast
