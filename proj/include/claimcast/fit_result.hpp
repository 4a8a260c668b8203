#ifndef CLAIMCAST_FIT_RESULT_HPP
#define CLAIMCAST_FIT_RESULT_HPP

#include <string>
#include <vector>

namespace claimcast {

// Outcome of a maximum-likelihood fit. `information` is the expected
// (integral-form) information matrix evaluated at the estimate, row-major;
// std_errors are sqrt of the diagonal of its inverse when it is invertible.
struct FitResult {
  std::vector<double> estimate;
  double loglik = 0.0;
  std::vector<double> information;
  std::vector<double> std_errors;
  bool std_errors_available = false;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  std::vector<std::string> warnings;
};

}  // namespace claimcast

#endif  // CLAIMCAST_FIT_RESULT_HPP
