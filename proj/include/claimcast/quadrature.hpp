#ifndef CLAIMCAST_QUADRATURE_HPP
#define CLAIMCAST_QUADRATURE_HPP

#include <functional>

namespace claimcast {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;      // estimated absolute error
  int subdivisions = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;
};

// Adaptive Gauss-Kronrod (G7,K15) on [lo, hi]. Throws NumericalError with
// the achieved tolerance if the interval budget runs out before the target
// is met.
QuadratureResult integrate(const std::function<double(double)>& f, double lo,
                           double hi, const QuadratureOptions& opts = {});

// Convenience wrapper returning just the value.
double integrate_value(const std::function<double(double)>& f, double lo,
                       double hi, const QuadratureOptions& opts = {});

}  // namespace claimcast

#endif  // CLAIMCAST_QUADRATURE_HPP
