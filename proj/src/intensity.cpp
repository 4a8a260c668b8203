#include "claimcast/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "claimcast/errors.hpp"
#include "claimcast/quadrature.hpp"
#include "intensity_detail.hpp"

namespace claimcast {

namespace detail {

namespace {

// Series sum of c_m x^m with user-supplied coefficients, for |x| small
// enough that the closed forms above cancel catastrophically.
double coeff_series(double x, const std::function<double(int)>& coeff) {
  double sum = 0.0;
  double xpow = 1.0;
  for (int m = 0; m < 40; ++m) {
    double term = coeff(m) * xpow;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    xpow *= x;
  }
  return sum;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

constexpr double kSeriesCutoff = 0.05;

}  // namespace

double expm1_ratio1(double x) {
  if (x == 0.0) return 1.0;
  if (std::abs(x) > kSeriesCutoff) return std::expm1(x) / x;
  return coeff_series(x, [](int m) { return 1.0 / factorial(m + 1); });
}

double expm1_ratio2(double x) {
  if (x == 0.0) return 0.5;
  if (std::abs(x) > kSeriesCutoff)
    return (std::exp(x) * (x - 1.0) + 1.0) / (x * x);
  return coeff_series(x, [](int m) { return (m + 1) / factorial(m + 2); });
}

double expm1_ratio3(double x) {
  if (x == 0.0) return 1.0 / 3.0;
  if (std::abs(x) > kSeriesCutoff)
    return (std::exp(x) * (x * x - 2.0 * x + 2.0) - 2.0) / (x * x * x);
  // coefficient of x^m is 1/(m+1)! - 2/(m+2)! + 2/(m+3)!
  return coeff_series(x, [](int m) {
    return 1.0 / factorial(m + 1) - 2.0 / factorial(m + 2) +
           2.0 / factorial(m + 3);
  });
}

SeasonalBlock seasonal_block(double s, double amp_cos, double amp_sin,
                             double period) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double u = two_pi * s / period;
  const double cu = std::cos(u);
  const double su = std::sin(u);
  const double k = two_pi * s / (period * period);  // -du/dT
  SeasonalBlock b;
  b.value = amp_cos * cu + amp_sin * su;
  b.d_amp_cos = cu;
  b.d_amp_sin = su;
  b.d_period = k * (amp_cos * su - amp_sin * cu);
  b.d2_cos_period = k * su;
  b.d2_sin_period = -k * cu;
  b.d2_period_period = (-2.0 * k / period) * (amp_cos * su - amp_sin * cu) -
                       k * k * (amp_cos * cu + amp_sin * su);
  return b;
}

std::vector<double> fd_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> params) {
  const std::size_t q = params.size();
  std::vector<double> work(params.begin(), params.end());
  std::vector<double> grad(q);
  for (std::size_t j = 0; j < q; ++j) {
    const double h = std::max(1e-6, 1e-6 * std::abs(params[j]));
    const double orig = work[j];
    work[j] = orig + h;
    const double up = f(work);
    work[j] = orig - h;
    const double dn = f(work);
    work[j] = orig;
    grad[j] = (up - dn) / (2.0 * h);
  }
  return grad;
}

std::vector<double> fd_hessian(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> params) {
  const std::size_t q = params.size();
  std::vector<double> work(params.begin(), params.end());
  std::vector<double> hess(q * q);
  const double center = f(work);
  std::vector<double> step(q);
  for (std::size_t j = 0; j < q; ++j)
    step[j] = std::max(1e-4, 1e-4 * std::abs(params[j]));

  for (std::size_t j = 0; j < q; ++j) {
    const double oj = work[j];
    work[j] = oj + step[j];
    const double up = f(work);
    work[j] = oj - step[j];
    const double dn = f(work);
    work[j] = oj;
    hess[j * q + j] = (up - 2.0 * center + dn) / (step[j] * step[j]);
    for (std::size_t k = j + 1; k < q; ++k) {
      const double ok = work[k];
      work[j] = oj + step[j];
      work[k] = ok + step[k];
      const double pp = f(work);
      work[k] = ok - step[k];
      const double pm = f(work);
      work[j] = oj - step[j];
      const double mm = f(work);
      work[k] = ok + step[k];
      const double mp = f(work);
      work[j] = oj;
      work[k] = ok;
      hess[j * q + k] = hess[k * q + j] =
          (pp - pm - mp + mm) / (4.0 * step[j] * step[k]);
    }
  }
  return hess;
}

double grid_upper_bound(const std::function<double(double)>& f, double lo,
                        double hi, int grid_points) {
  const double width = hi - lo;
  std::vector<double> vals(grid_points);
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    const double t = lo + width * i / (grid_points - 1);
    vals[i] = f(t);
    if (!std::isfinite(vals[i]))
      throw NumericalError("non-finite intensity while bounding window");
    best = std::max(best, vals[i]);
  }
  // golden-section refinement around every interior local maximum
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 1; i + 1 < grid_points; ++i) {
    if (vals[i] < vals[i - 1] || vals[i] < vals[i + 1]) continue;
    double a = lo + width * (i - 1) / (grid_points - 1);
    double b = lo + width * (i + 1) / (grid_points - 1);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 40 && (b - a) > 1e-12 * width; ++it) {
      if (fc > fd) {
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
      best = std::max(best, std::max(fc, fd));
    }
  }
  return 1.001 * best;
}

}  // namespace detail

namespace {

using detail::expm1_ratio1;
using detail::expm1_ratio2;
using detail::expm1_ratio3;

constexpr double kLogPeriodicFloor = 1e-9;

std::size_t expected_param_count(IntensityFamily family) {
  switch (family) {
    case IntensityFamily::constant: return 1;
    case IntensityFamily::exponential: return 2;
    case IntensityFamily::log_periodic: return 5;
    case IntensityFamily::quad_periodic: return 6;
    case IntensityFamily::custom: return 0;  // unchecked
  }
  return 0;
}

}  // namespace

std::string family_name(IntensityFamily family) {
  switch (family) {
    case IntensityFamily::constant: return "constant";
    case IntensityFamily::exponential: return "exponential";
    case IntensityFamily::log_periodic: return "log_periodic";
    case IntensityFamily::quad_periodic: return "quad_periodic";
    case IntensityFamily::custom: return "custom";
  }
  return "?";
}

IntensityFamily intensity_family_from_name(const std::string& name) {
  if (name == "constant") return IntensityFamily::constant;
  if (name == "exponential") return IntensityFamily::exponential;
  if (name == "log_periodic") return IntensityFamily::log_periodic;
  if (name == "quad_periodic") return IntensityFamily::quad_periodic;
  if (name == "custom") return IntensityFamily::custom;
  throw InputError("unknown intensity family '" + name + "'");
}

IntensityModel::IntensityModel(IntensityFamily family,
                               std::vector<double> params)
    : family_(family), params_(std::move(params)) {
  if (family_ == IntensityFamily::custom)
    throw InputError("custom intensity requires hooks; use IntensityModel::custom");
  check_params();
}

IntensityModel IntensityModel::custom(CustomIntensityHooks hooks,
                                      std::vector<double> params) {
  if (!hooks.eval) throw InputError("custom intensity needs an eval hook");
  IntensityModel m;
  m.family_ = IntensityFamily::custom;
  m.params_ = std::move(params);
  m.hooks_ = std::move(hooks);
  return m;
}

IntensityModel IntensityModel::with_params(std::vector<double> params) const {
  IntensityModel m = *this;
  m.params_ = std::move(params);
  m.check_params();
  return m;
}

void IntensityModel::check_params() const {
  if (family_ != IntensityFamily::custom &&
      params_.size() != expected_param_count(family_))
    throw DomainError("family '" + family_name(family_) + "' expects " +
                      std::to_string(expected_param_count(family_)) +
                      " parameters, got " + std::to_string(params_.size()));
  switch (family_) {
    case IntensityFamily::constant:
      if (params_[0] < 0.0)
        throw DomainError("constant intensity requires rate >= 0");
      break;
    case IntensityFamily::log_periodic:
      if (!(params_[4] > 0.0))
        throw DomainError("log_periodic requires period > 0");
      break;
    case IntensityFamily::quad_periodic:
      if (!(params_[5] > 0.0))
        throw DomainError("quad_periodic requires period > 0");
      break;
    default:
      break;
  }
  for (double v : params_)
    if (!std::isfinite(v)) throw DomainError("non-finite intensity parameter");
}

std::vector<std::size_t> IntensityModel::positive_params() const {
  switch (family_) {
    case IntensityFamily::constant: return {0};
    case IntensityFamily::log_periodic: return {4};
    case IntensityFamily::quad_periodic: return {5};
    default: return {};
  }
}

double IntensityModel::eval(double t) const {
  if (t < 0.0) throw DomainError("intensity evaluated at negative time");
  const auto& p = params_;
  switch (family_) {
    case IntensityFamily::constant:
      return p[0];
    case IntensityFamily::exponential:
      return std::exp(p[0] + p[1] * t);
    case IntensityFamily::log_periodic: {
      if (t < kLogPeriodicFloor)
        throw DomainError("log_periodic intensity undefined below 1e-9 days");
      const auto seas = detail::seasonal_block(t, p[2], p[3], p[4]);
      return std::exp(p[0] + p[1] * std::log(t) + seas.value);
    }
    case IntensityFamily::quad_periodic: {
      const auto seas = detail::seasonal_block(t, p[3], p[4], p[5]);
      return std::exp(p[0] + p[1] * t + p[2] * t * t + seas.value);
    }
    case IntensityFamily::custom:
      return hooks_.eval(t, p);
  }
  return 0.0;
}

double IntensityModel::cumulative(double t) const {
  if (t < 0.0) throw DomainError("cumulative intensity at negative time");
  if (t == 0.0) return 0.0;
  const auto& p = params_;
  switch (family_) {
    case IntensityFamily::constant:
      return p[0] * t;
    case IntensityFamily::exponential:
      return std::exp(p[0]) * t * expm1_ratio1(p[1] * t);
    case IntensityFamily::log_periodic:
      if (t <= kLogPeriodicFloor) return 0.0;
      return integrate_value([this](double z) { return eval(z); },
                             kLogPeriodicFloor, t);
    default:
      return integrate_value([this](double z) { return eval(z); }, 0.0, t);
  }
}

std::vector<double> IntensityModel::grad(double t) const {
  const auto& p = params_;
  switch (family_) {
    case IntensityFamily::constant:
      return {1.0};
    case IntensityFamily::exponential: {
      const double v = eval(t);
      return {v, v * t};
    }
    case IntensityFamily::log_periodic: {
      const double v = eval(t);
      const auto seas = detail::seasonal_block(t, p[2], p[3], p[4]);
      return {v, v * std::log(t), v * seas.d_amp_cos, v * seas.d_amp_sin,
              v * seas.d_period};
    }
    case IntensityFamily::quad_periodic: {
      const double v = eval(t);
      const auto seas = detail::seasonal_block(t, p[3], p[4], p[5]);
      return {v,          v * t,          v * t * t,
              v * seas.d_amp_cos, v * seas.d_amp_sin, v * seas.d_period};
    }
    case IntensityFamily::custom: {
      if (hooks_.grad) return hooks_.grad(t, p);
      return detail::fd_gradient(
          [&](std::span<const double> q) { return hooks_.eval(t, q); }, p);
    }
  }
  return {};
}

namespace {

// hessian of exp(g) from grad/hessian of g
std::vector<double> exp_hessian(double value, std::span<const double> g_grad,
                                std::span<const double> g_hess) {
  const std::size_t q = g_grad.size();
  std::vector<double> h(q * q);
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t k = 0; k < q; ++k)
      h[j * q + k] = value * (g_grad[j] * g_grad[k] + g_hess[j * q + k]);
  return h;
}

}  // namespace

std::vector<double> IntensityModel::hessian(double t) const {
  const auto& p = params_;
  switch (family_) {
    case IntensityFamily::constant:
      return {0.0};
    case IntensityFamily::exponential: {
      const double v = eval(t);
      return {v, v * t, v * t, v * t * t};
    }
    case IntensityFamily::log_periodic: {
      const double v = eval(t);
      const auto s = detail::seasonal_block(t, p[2], p[3], p[4]);
      const double lg = std::log(t);
      std::vector<double> gg = {1.0, lg, s.d_amp_cos, s.d_amp_sin, s.d_period};
      std::vector<double> gh(25, 0.0);
      gh[2 * 5 + 4] = gh[4 * 5 + 2] = s.d2_cos_period;
      gh[3 * 5 + 4] = gh[4 * 5 + 3] = s.d2_sin_period;
      gh[4 * 5 + 4] = s.d2_period_period;
      return exp_hessian(v, gg, gh);
    }
    case IntensityFamily::quad_periodic: {
      const double v = eval(t);
      const auto s = detail::seasonal_block(t, p[3], p[4], p[5]);
      std::vector<double> gg = {1.0,         t,           t * t,
                                s.d_amp_cos, s.d_amp_sin, s.d_period};
      std::vector<double> gh(36, 0.0);
      gh[3 * 6 + 5] = gh[5 * 6 + 3] = s.d2_cos_period;
      gh[4 * 6 + 5] = gh[5 * 6 + 4] = s.d2_sin_period;
      gh[5 * 6 + 5] = s.d2_period_period;
      return exp_hessian(v, gg, gh);
    }
    case IntensityFamily::custom: {
      if (hooks_.hessian) return hooks_.hessian(t, p);
      if (hooks_.grad) {
        // finite differences of the user gradient, symmetrized
        const std::size_t q = p.size();
        std::vector<double> h(q * q);
        std::vector<double> work = p;
        for (std::size_t j = 0; j < q; ++j) {
          const double step = std::max(1e-6, 1e-6 * std::abs(p[j]));
          const double orig = work[j];
          work[j] = orig + step;
          auto up = hooks_.grad(t, work);
          work[j] = orig - step;
          auto dn = hooks_.grad(t, work);
          work[j] = orig;
          for (std::size_t k = 0; k < q; ++k)
            h[j * q + k] = (up[k] - dn[k]) / (2.0 * step);
        }
        for (std::size_t j = 0; j < q; ++j)
          for (std::size_t k = j + 1; k < q; ++k) {
            const double sym = 0.5 * (h[j * q + k] + h[k * q + j]);
            h[j * q + k] = h[k * q + j] = sym;
          }
        return h;
      }
      return detail::fd_hessian(
          [&](std::span<const double> q) { return hooks_.eval(t, q); }, p);
    }
  }
  return {};
}

std::vector<double> IntensityModel::cumulative_grad(double t) const {
  const auto& p = params_;
  switch (family_) {
    case IntensityFamily::constant:
      return {t};
    case IntensityFamily::exponential: {
      const double scale = std::exp(p[0]);
      return {scale * t * expm1_ratio1(p[1] * t),
              scale * t * t * expm1_ratio2(p[1] * t)};
    }
    default: {
      const std::size_t q = params_.size();
      const double lo =
          family_ == IntensityFamily::log_periodic ? kLogPeriodicFloor : 0.0;
      std::vector<double> out(q);
      for (std::size_t j = 0; j < q; ++j)
        out[j] = t <= lo ? 0.0
                         : integrate_value(
                               [&](double z) { return grad(z)[j]; }, lo, t,
                               QuadratureOptions{1e-10, 1e-9, 2000});
      return out;
    }
  }
}

std::vector<double> IntensityModel::cumulative_hessian(double t) const {
  const auto& p = params_;
  switch (family_) {
    case IntensityFamily::constant:
      return {0.0};
    case IntensityFamily::exponential: {
      const double scale = std::exp(p[0]);
      const double g1 = scale * t * expm1_ratio1(p[1] * t);
      const double g2 = scale * t * t * expm1_ratio2(p[1] * t);
      const double g3 = scale * t * t * t * expm1_ratio3(p[1] * t);
      return {g1, g2, g2, g3};
    }
    default: {
      const std::size_t q = params_.size();
      const double lo =
          family_ == IntensityFamily::log_periodic ? kLogPeriodicFloor : 0.0;
      std::vector<double> out(q * q, 0.0);
      if (t <= lo) return out;
      for (std::size_t j = 0; j < q; ++j)
        for (std::size_t k = j; k < q; ++k) {
          out[j * q + k] = out[k * q + j] = integrate_value(
              [&](double z) { return hessian(z)[j * q + k]; }, lo, t,
              QuadratureOptions{1e-10, 1e-9, 2000});
        }
      return out;
    }
  }
}

double IntensityModel::upper_bound(double lo, double hi) const {
  if (!(lo < hi)) throw InputError("upper_bound requires lo < hi");
  if (lo < 0.0) throw DomainError("upper_bound window must be within [0, inf)");
  const auto& p = params_;
  switch (family_) {
    case IntensityFamily::constant:
      return p[0];
    case IntensityFamily::exponential:
      return eval(p[1] >= 0.0 ? hi : lo);
    case IntensityFamily::log_periodic: {
      // exact sup of the monotone log-linear part times the seasonal
      // amplitude envelope; always a true bound even when the period is
      // shorter than a sampling grid could resolve
      const double lo_eff = std::max(lo, kLogPeriodicFloor);
      const double lin = p[0] + std::max(p[1] * std::log(lo_eff),
                                         p[1] * std::log(hi));
      return std::exp(lin + std::hypot(p[2], p[3]));
    }
    case IntensityFamily::quad_periodic: {
      double lin = std::max(p[0] + p[1] * lo + p[2] * lo * lo,
                            p[0] + p[1] * hi + p[2] * hi * hi);
      if (p[2] != 0.0) {
        const double vertex = -p[1] / (2.0 * p[2]);
        if (vertex > lo && vertex < hi)
          lin = std::max(lin, p[0] + p[1] * vertex + p[2] * vertex * vertex);
      }
      return std::exp(lin + std::hypot(p[3], p[4]));
    }
    case IntensityFamily::custom:
      return detail::grid_upper_bound([this](double t) { return eval(t); }, lo,
                                      hi);
  }
  return 0.0;
}

}  // namespace claimcast
