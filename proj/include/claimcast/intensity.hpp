#ifndef CLAIMCAST_INTENSITY_HPP
#define CLAIMCAST_INTENSITY_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace claimcast {

// Parametric rate families for the claim-reporting process.
//
//   constant       rate
//   exponential    exp(p0 + p1 t)
//   log_periodic   exp(p0 + p1 log t + p2 cos(2pi t/p4) + p3 sin(2pi t/p4))
//   quad_periodic  exp(p0 + p1 t + p2 t^2 + p3 cos(2pi t/p5) + p4 sin(2pi t/p5))
//   custom         caller-supplied hooks
enum class IntensityFamily {
  constant,
  exponential,
  log_periodic,
  quad_periodic,
  custom,
};

std::string family_name(IntensityFamily family);
IntensityFamily intensity_family_from_name(const std::string& name);

// Hooks for a user-defined rate function. grad/hessian are optional;
// central finite differences with step max(1e-6, 1e-6*|p_j|) fill the gap.
struct CustomIntensityHooks {
  std::function<double(double t, std::span<const double> params)> eval;
  std::function<std::vector<double>(double, std::span<const double>)> grad;
  std::function<std::vector<double>(double, std::span<const double>)> hessian;
};

class IntensityModel {
 public:
  IntensityModel() = default;
  IntensityModel(IntensityFamily family, std::vector<double> params);
  static IntensityModel custom(CustomIntensityHooks hooks,
                               std::vector<double> params);

  IntensityFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t param_count() const { return params_.size(); }
  IntensityModel with_params(std::vector<double> params) const;

  // Rate at time t (days). t must be >= 0; log_periodic requires
  // t >= 1e-9 because of the log term.
  double eval(double t) const;

  // Integral of the rate over [0, t]; closed form where the family has
  // one, adaptive quadrature otherwise.
  double cumulative(double t) const;

  // First/second parameter derivatives of the rate (hessian row-major).
  std::vector<double> grad(double t) const;
  std::vector<double> hessian(double t) const;

  // Parameter derivatives of the cumulative integral.
  std::vector<double> cumulative_grad(double t) const;
  std::vector<double> cumulative_hessian(double t) const;

  // B >= sup of the rate on [lo, hi]. Exact for monotone closed forms;
  // a seasonal-amplitude envelope for the periodic families; sampled
  // grid with golden-section refinement (x1.001) for custom hooks.
  double upper_bound(double lo, double hi) const;

  // Indices of parameters constrained positive (fit-time transform).
  std::vector<std::size_t> positive_params() const;

 private:
  void check_params() const;

  IntensityFamily family_ = IntensityFamily::constant;
  std::vector<double> params_{1.0};
  CustomIntensityHooks hooks_;
};

// Per-claim payment-rate families, conditioned on the reporting time z.
// All are zero for payment times before z.
//
//   constant_mark       p0
//   weibull_baseline    p0 p1 (tau-z)^(p0-1) exp(p2 z)
//   exp_trend_periodic  exp(p0 + p1 (tau-z) + p2 cos(2pi z/p4) + p3 sin(2pi z/p4))
//   custom              caller-supplied hooks
enum class MarkFamily {
  constant_mark,
  weibull_baseline,
  exp_trend_periodic,
  custom,
};

std::string family_name(MarkFamily family);
MarkFamily mark_family_from_name(const std::string& name);

struct CustomMarkHooks {
  std::function<double(double tau, double z, std::span<const double> params)>
      eval;
  std::function<std::vector<double>(double, double, std::span<const double>)>
      grad;
  std::function<std::vector<double>(double, double, std::span<const double>)>
      hessian;
};

class MarkIntensityModel {
 public:
  MarkIntensityModel() = default;
  MarkIntensityModel(MarkFamily family, std::vector<double> params);
  static MarkIntensityModel custom(CustomMarkHooks hooks,
                                   std::vector<double> params);

  MarkFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t param_count() const { return params_.size(); }
  MarkIntensityModel with_params(std::vector<double> params) const;

  // Rate of the payment process of a claim reported at z, evaluated at
  // payment time tau. Zero for tau < z.
  double eval(double tau, double z) const;

  // Integral of the rate over [z, t]; zero for t <= z.
  double cumulative(double t, double z) const;

  std::vector<double> grad(double tau, double z) const;
  std::vector<double> hessian(double tau, double z) const;
  std::vector<double> cumulative_grad(double t, double z) const;
  std::vector<double> cumulative_hessian(double t, double z) const;

  double upper_bound(double lo, double hi, double z) const;

  std::vector<std::size_t> positive_params() const;

 private:
  void check_params() const;

  MarkFamily family_ = MarkFamily::constant_mark;
  std::vector<double> params_{1.0};
  CustomMarkHooks hooks_;
};

}  // namespace claimcast

#endif  // CLAIMCAST_INTENSITY_HPP
