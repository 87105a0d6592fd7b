#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jackflow/combinatorics.hpp"
#include "jackflow/theta.hpp"

namespace jackflow {

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::optional<double> p_value;
  bool pass = false;
  std::size_t n_samples = 0;
  double runtime_s = 0.0;
  bool acceptance = false;  // counts towards the nonzero exit code of verify
};

/// Reports as a JSON array (one object per report).
std::string reports_to_json(std::span<const TestReport> reports);

struct KsResult {
  double d = 0.0;
  double p = 1.0;
};

/// Kolmogorov survival function Q(λ) = 2 Σ (−1)^{k−1} exp(−2k²λ²).
double kolmogorov_q(double lambda);
/// Two-sample KS statistic (ties handled) with the asymptotic p-value.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

class SparseBinError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Chi2Result {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;
  std::vector<double> observed;
  std::vector<double> expected;
};

/// Upper tail of the χ² distribution with dof degrees of freedom.
double chi2_sf(double statistic, int dof);

/// Pearson χ² of observed counts against bin probabilities (renormalized to sum
/// to one). Throws SparseBinError if any expected count is below min_expected.
Chi2Result chi2_counts(std::span<const double> observed, std::span<const double> probabilities,
                       double min_expected = 5.0);
/// Bins samples on `edges` and compares with masses of exp(target_log_density)
/// obtained by adaptive quadrature over each bin. Samples outside the edges are an error.
Chi2Result chi2_histogram(std::span<const double> samples, const std::function<double(double)>& target_log_density,
                          std::span<const double> edges, double min_expected = 5.0);

struct Dispersion {
  double index = 0.0;  // sample variance / mean
  bool pass = false;
};
Dispersion poisson_dispersion(std::span<const double> counts, double lo = 0.9, double hi = 1.1);

struct RateResidual {
  double epsilon = 0.0;
  int level = 1;  // N for the one-level chain
  int row = 1;
  double coordinate = 0.0;  // rounding-adjusted y of this particle
  double rate = 0.0;        // rescaled rate q
  double drift = 0.0;       // b(y)
  double residual = 0.0;    // q − ε⁻¹ − ε^{−1/2} b
};

struct RateProbe {
  std::vector<RateResidual> residuals;
  std::vector<double> max_abs_residual;  // per ε
  double max_growth = 0.0;               // largest decade-to-decade ratio of max_abs_residual
  bool pass = false;
};

/// Exact rescaled one-level rates at the lattice point nearest to y for each ε.
/// Throws if two particles coincide after rounding.
RateProbe rate_expansion_probe(const WeylPoint& y, Theta theta, std::span<const double> eps_list,
                               double growth_limit = 2.0);
/// Same for the multilevel own rates at a cone point (all levels, all rows).
RateProbe rate_expansion_probe(const ConePoint& y, Theta theta, std::span<const double> eps_list,
                               double growth_limit = 2.0);

struct IntertwiningOptions {
  int n = 2;
  Theta theta{1.0};
  double t = 0.5;
  double start_variance = 1.0;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  double dt = 1e-3;
  double d_ceiling = 0.05;
  int workers = 0;
};

struct IntertwiningResult {
  std::vector<TestReport> coordinates;  // one KS report per level-(N−1) coordinate
  bool pass = false;
};

/// Pipeline A: Hermite level-N point, link down, (N−1)-dim Dyson for time t.
/// Pipeline B: N-dim Dyson for time t from the Hermite point, then link down.
IntertwiningResult intertwining_test(const IntertwiningOptions& opts);

/// Bonferroni-corrected per-test floor.
inline double bonferroni(double alpha, std::size_t tests) { return alpha / static_cast<double>(tests ? tests : 1); }

}  // namespace jackflow
