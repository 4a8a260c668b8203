#ifndef CLAIMCAST_SRC_INTENSITY_DETAIL_HPP
#define CLAIMCAST_SRC_INTENSITY_DETAIL_HPP

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace claimcast::detail {

// Cancellation-safe ratios appearing in the exponential family's closed
// forms:
//   e1(x) = (e^x - 1)/x
//   e2(x) = (e^x (x-1) + 1)/x^2
//   e3(x) = (e^x (x^2 - 2x + 2) - 2)/x^3
// so that for a rate exp(p0 + p1 t):
//   integral of t^k exp(p1 t) over [0,t] = t^(k+1) e_{k+1}(p1 t).
double expm1_ratio1(double x);
double expm1_ratio2(double x);
double expm1_ratio3(double x);

// Value and parameter derivatives of A cos(2 pi s / T) + B sin(2 pi s / T),
// the seasonal block shared by the periodic families.
struct SeasonalBlock {
  double value;
  double d_amp_cos, d_amp_sin, d_period;
  double d2_cos_period, d2_sin_period, d2_period_period;
};
SeasonalBlock seasonal_block(double s, double amp_cos, double amp_sin,
                             double period);

// Central finite differences with per-coordinate step max(1e-6, 1e-6 |p_j|).
std::vector<double> fd_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> params);
std::vector<double> fd_hessian(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> params);

// 1.001 x (max over a uniform grid, refined near interior grid maxima by
// golden-section search). Used where no closed-form bound exists.
double grid_upper_bound(const std::function<double(double)>& f, double lo,
                        double hi, int grid_points = 1024);

}  // namespace claimcast::detail

#endif  // CLAIMCAST_SRC_INTENSITY_DETAIL_HPP
