#pragma once

#include <functional>
#include <stdexcept>

namespace jackflow::quad {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
};

/// ∫_a^b g(u) du by adaptive Gauss–Kronrod (G15/K31).
Result integrate(const std::function<double(double)>& g, double a, double b, double tol = 1e-13);

/// ∫_L^R |u−L|^{pl} |u−R|^{pr} g(u) du with pl, pr > −1 and g smooth on [L,R].
/// Singular endpoints are removed with u = L + w^{1/(pl+1)} (and its mirror).
Result power_singular(const std::function<double(double)>& g, double L, double R, double pl, double pr,
                      double tol = 1e-13);

/// Partial mass ∫_L^x of the same weighted integrand, for L ≤ x ≤ R.
double power_singular_cdf(const std::function<double(double)>& g, double L, double R, double pl, double pr,
                          double x, double total);

/// Solves F(x) = p·total for x ∈ [L,R] by safeguarded Newton on the partial mass.
double power_singular_quantile(const std::function<double(double)>& g, double L, double R, double pl,
                               double pr, double p, double total);

}  // namespace jackflow::quad
