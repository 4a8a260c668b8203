#include "claimcast/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "claimcast/errors.hpp"

namespace claimcast {

namespace {

// 15-point Kronrod nodes/weights on [-1,1] with the embedded 7-point Gauss
// rule (positive half; symmetric).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double lo, hi;
  double value;
  double error;
  bool operator<(const Segment& rhs) const { return error < rhs.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double lo,
                      double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  double fv[15];
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(center - half * kXgk[j]);
    fv[14 - j] = f(center + half * kXgk[j]);
  }
  fv[7] = f(center);

  double result_kronrod = kWgk[7] * fv[7];
  double result_gauss = kWg[3] * fv[7];
  double resabs = kWgk[7] * std::abs(fv[7]);
  for (int j = 0; j < 7; ++j) {
    result_kronrod += kWgk[j] * (fv[j] + fv[14 - j]);
    resabs += kWgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
    if (j % 2 == 1)  // odd Kronrod indices are the Gauss nodes
      result_gauss += kWg[j / 2] * (fv[j] + fv[14 - j]);
  }
  const double mean = result_kronrod * 0.5;
  double resasc = kWgk[7] * std::abs(fv[7] - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  resabs *= half;
  resasc *= half;

  // QUADPACK qk15 error estimate
  double err = std::abs(result_kronrod - result_gauss) * half;
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps50)
    err = std::max(eps50 * resabs, err);
  return Segment{lo, hi, result_kronrod * half, err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo,
                           double hi, const QuadratureOptions& opts) {
  if (lo == hi) return {0.0, 0.0, 0};
  double sign = 1.0;
  if (lo > hi) {
    std::swap(lo, hi);
    sign = -1.0;
  }

  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod(f, lo, hi);
  if (!std::isfinite(first.value))
    throw NumericalError("non-finite integrand on initial interval");
  heap.push(first);
  double total = first.value;
  double total_err = first.error;
  int splits = 0;

  while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) &&
         splits < opts.max_subdivisions) {
    Segment worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {
      // interval at machine resolution; keep its contribution as-is
      total_err -= worst.error;
      continue;
    }
    Segment left = gauss_kronrod(f, worst.lo, mid);
    Segment right = gauss_kronrod(f, mid, worst.hi);
    if (!std::isfinite(left.value) || !std::isfinite(right.value))
      throw NumericalError("non-finite integrand near subinterval");
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }

  if (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    std::ostringstream msg;
    msg << "quadrature did not converge: achieved abs error " << total_err
        << " (target abs " << opts.abs_tol << ", rel " << opts.rel_tol
        << ") after " << splits << " subdivisions";
    throw NumericalError(msg.str());
  }
  return {sign * total, total_err, splits};
}

double integrate_value(const std::function<double(double)>& f, double lo,
                       double hi, const QuadratureOptions& opts) {
  return integrate(f, lo, hi, opts).value;
}

}  // namespace claimcast
