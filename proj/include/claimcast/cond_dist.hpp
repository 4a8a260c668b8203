#ifndef CLAIMCAST_COND_DIST_HPP
#define CLAIMCAST_COND_DIST_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "claimcast/fit_result.hpp"
#include "claimcast/rng.hpp"

namespace claimcast {

// Conditional distribution families for reporting delays W | Z=z and
// payment amounts X | Z=z. The two distribution parameters c and d are
// truncated Fourier series in the reporting time z:
//
//   c(z) = alpha + (z/7) beta
//        + sum_l { delta_l cos(xi_l 2 pi z / 364) + gamma_l sin(...) }
//
// and d(z) has the same layout. For the lognormal, c and d are the log-mean
// and log-sd; for Weibull/Gamma they are shape and scale (both required
// positive wherever the model is evaluated).
enum class CondDistFamily { lognormal, weibull, gamma };

std::string family_name(CondDistFamily family);
CondDistFamily cond_dist_family_from_name(const std::string& name);

// Parameter layout per series: (alpha, beta, delta_1, xi_1, gamma_1, ...,
// delta_L, xi_L, gamma_L), so each series has 2 + 3L entries.
class CondDistModel {
 public:
  CondDistModel() = default;
  CondDistModel(CondDistFamily family, int fourier_order, bool trend,
                std::vector<double> theta1, std::vector<double> theta2,
                bool xi_fixed = true);

  // constant-parameter convenience (L = 0, no trend)
  static CondDistModel constant(CondDistFamily family, double c, double d);

  CondDistFamily family() const { return family_; }
  int fourier_order() const { return order_; }
  bool trend_enabled() const { return trend_; }
  bool xi_fixed() const { return xi_fixed_; }
  const std::vector<double>& theta1() const { return theta1_; }
  const std::vector<double>& theta2() const { return theta2_; }

  double param_c(double z) const;
  double param_d(double z) const;

  double density(double x, double z) const;
  double cdf(double x, double z) const;
  double quantile(double u, double z) const;
  double mean(double z) const;

  // inverse-CDF draw, one uniform consumed
  double sample(RngStream& rng, double z) const;

 private:
  void check_at(double c, double d, double z) const;

  CondDistFamily family_ = CondDistFamily::lognormal;
  int order_ = 0;
  bool trend_ = false;
  bool xi_fixed_ = true;
  std::vector<double> theta1_{0.0, 0.0};
  std::vector<double> theta2_{1.0, 0.0};
};

struct CondFitOptions {
  // initial full parameter vector [theta1 | theta2]; weekly-average least
  // squares initializer when absent
  std::optional<std::vector<double>> init;
  // free the Fourier frequencies (multistart around integer harmonics)
  bool free_xi = false;
  // positivity constraints are enforced at the observed z values plus a
  // grid over this window (the prediction horizon)
  std::optional<std::pair<double, double>> constraint_window;
  int max_iterations = 500;
};

struct CondFitResult {
  FitResult fit;  // estimate is [theta1 | theta2]
  CondDistModel model;
};

// Constrained ML fit of c(.) and d(.). observations are (z, value) pairs
// with positive values; requires at least max(10, 3(2+3L)) of them.
CondFitResult fit_cond_dist(
    const std::vector<std::pair<double, double>>& observations,
    CondDistFamily family, int fourier_order, bool trend,
    const CondFitOptions& opts = {});

struct PitResult {
  std::vector<double> values;  // standard-normal quantile of the fitted CDF
  long clamped = 0;            // CDF values clipped away from {0,1}
};

PitResult pit_transform(
    const CondDistModel& model,
    const std::vector<std::pair<double, double>>& observations);

// standard normal helpers shared by the diagnostics
double std_normal_cdf(double x);
double std_normal_quantile(double u);

}  // namespace claimcast

#endif  // CLAIMCAST_COND_DIST_HPP
