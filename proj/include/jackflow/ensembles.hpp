#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jackflow/combinatorics.hpp"
#include "jackflow/rng.hpp"
#include "jackflow/theta.hpp"

namespace jackflow {

struct EnsembleParams {
  int n = 1;
  Theta theta{1.0};
  double variance_t = 1.0;

  EnsembleParams(int n_, Theta th, double t);
};

/// log Z of the Hermite β=2θ ensemble with variance t.
double hermite_log_normalizer(int n, Theta theta, double t);
/// Normalized log-density on the closed Weyl chamber; −∞ off the chamber.
double hermite_log_density(const WeylPoint& y, const EnsembleParams& p);

/// log Z of the corners process, normalized so that the density factorizes as
/// Hermite(level N) × ∏ links.
double corners_log_normalizer(int n, Theta theta, double t);
/// Normalized log-density of the Hermite corners process; −∞ outside the cone.
double corners_log_density(const ConePoint& y, const EnsembleParams& p);

/// Conditional log-density of level k−1 (u, k−1 values) given level k (v, k values).
double theta_gibbs_link_log(std::span<const double> u, std::span<const double> v, Theta theta);

struct DixonAnderson {
  double lhs = 0.0;
  double rhs = 0.0;
};
/// Both sides of the Dixon–Anderson integral for m = v.size()−1 ∈ {1, 2}.
DixonAnderson dixon_anderson_check(std::span<const double> v, Theta theta);

struct McmcOptions {
  int chains = 8;
  int burn_in = 4000;
  int pilot = 20000;
  double target_accept = 0.3;
  int max_thin = 2000;
};

struct McmcDiagnostics {
  double acceptance_rate = 0.0;
  double autocorr_time = 0.0;  // worst integrated autocorrelation time over monitored observables
  int thin = 1;                // largest thinning interval used by any chain
  int chains = 0;
  double lag1_after_thinning = 0.0;
  bool under_thinned = false;
};

struct HermiteSamples {
  std::vector<WeylPoint> samples;
  McmcDiagnostics diagnostics;
};

/// Adaptive random-walk Metropolis targeting hermite_log_density. Several
/// independent chains; step size adapted only during burn-in; thinning set from
/// a pilot estimate of the integrated autocorrelation time.
HermiteSamples sample_hermite(const EnsembleParams& p, std::size_t n_samples, std::uint64_t seed,
                              const McmcOptions& opts = {}, int workers = 0);

/// Exact draw from the tridiagonal matrix model (Dumitriu–Edelman). Used for the
/// Dyson warm start and as a second oracle.
WeylPoint sample_hermite_tridiagonal(const EnsembleParams& p, Rng& rng);

/// One exact draw of level k−1 given level k from the θ-Gibbs link.
/// `fallbacks` counts coordinates placed at the midpoint of a degenerate interval.
std::vector<double> sample_link(std::span<const double> v, Theta theta, Rng& rng, int* fallbacks = nullptr);

ConePoint sample_corners_given_top(const WeylPoint& v, Theta theta, std::uint64_t seed,
                                   int* fallbacks = nullptr);
ConePoint sample_corners_given_top(const WeylPoint& v, Theta theta, Rng& rng, int* fallbacks = nullptr);

struct CornersSamples {
  std::vector<ConePoint> samples;
  McmcDiagnostics diagnostics;
  int fallbacks = 0;
};

/// sample_hermite for level N, then sample_corners_given_top per sample.
CornersSamples sample_corners(const EnsembleParams& p, std::size_t n_samples, std::uint64_t seed,
                              const McmcOptions& opts = {}, int workers = 0);

/// Sokal's windowed integrated autocorrelation time.
double integrated_autocorr_time(std::span<const double> x);

}  // namespace jackflow
