#ifndef CLAIMCAST_POISSON_FIT_HPP
#define CLAIMCAST_POISSON_FIT_HPP

#include <optional>
#include <vector>

#include "claimcast/claims_data.hpp"
#include "claimcast/fit_result.hpp"
#include "claimcast/intensity.hpp"

namespace claimcast {

// Log-likelihood of the reporting process observed up to horizon_a:
// sum of log rate at each reporting time minus the cumulative rate.
double loglik_reporting(const Portfolio& p, const IntensityModel& model);
std::vector<double> score_reporting(const Portfolio& p,
                                    const IntensityModel& model);

// Log-likelihood of the payment (mark) processes; claims without payments
// contribute only the negative cumulative term.
double loglik_marks(const Portfolio& p, const MarkIntensityModel& model);
std::vector<double> score_marks(const Portfolio& p,
                                const MarkIntensityModel& model);

// Expected information for the reporting process over [0, t]: closed form
// for constant/exponential, quadrature otherwise. Row-major.
std::vector<double> reporting_information(const IntensityModel& model,
                                          double t);

// Plug-in information for the mark processes: per-claim integrals over
// [reporting time, horizon_a], summed.
std::vector<double> marks_information(const Portfolio& p,
                                      const MarkIntensityModel& model);

struct FitOptions {
  std::optional<std::vector<double>> init;  // natural scale
  // Profile a multimodal period parameter over these candidate values,
  // then refine from the best one.
  std::vector<double> period_grid;
  int max_iterations = 500;
};

// ML fit of the reporting intensity. The prototype fixes the family (and
// hooks for custom models); its parameter values are ignored unless the
// family has no data-driven default initializer.
FitResult fit_reporting(const Portfolio& p, const IntensityModel& prototype,
                        const FitOptions& opts = {});

FitResult fit_marks(const Portfolio& p, const MarkIntensityModel& prototype,
                    const FitOptions& opts = {});

}  // namespace claimcast

#endif  // CLAIMCAST_POISSON_FIT_HPP
