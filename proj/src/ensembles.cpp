#include "jackflow/ensembles.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "jackflow/parallel.hpp"
#include "jackflow/quadrature.hpp"

namespace jackflow {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// e·log x with the convention 0·log 0 = 0.
double pow_log(double x, double e) {
  if (e == 0.0) return 0.0;
  return e * std::log(x);
}

double log_vandermonde(std::span<const double> y, double power) {
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = i + 1; j < y.size(); ++j) acc += pow_log(y[j] - y[i], power);
  return acc;
}

bool sorted(std::span<const double> y) {
  for (std::size_t i = 1; i < y.size(); ++i)
    if (!(y[i] >= y[i - 1])) return false;
  return true;
}

}  // namespace

EnsembleParams::EnsembleParams(int n_, Theta th, double t) : n(n_), theta(th), variance_t(t) {
  if (n < 1) throw std::invalid_argument("ensemble size must be at least 1");
  if (!(t > 0.0)) throw std::invalid_argument("variance t must be positive");
}

double hermite_log_normalizer(int n, Theta theta, double t) {
  const double th = theta.value();
  double z = (th * n * (n - 1) / 2.0 + n / 2.0) * std::log(t) + n / 2.0 * std::log(2.0 * std::numbers::pi);
  for (int j = 1; j <= n; ++j) z += std::lgamma(j * th) - std::lgamma(th);
  return z;
}

double hermite_log_density(const WeylPoint& y, const EnsembleParams& p) {
  const auto& c = y.coords;
  if (static_cast<int>(c.size()) != p.n) throw std::invalid_argument("point dimension does not match N");
  if (!sorted(c)) return kNegInf;
  double acc = log_vandermonde(c, 2.0 * p.theta.value());
  for (double v : c) acc -= v * v / (2.0 * p.variance_t);
  return acc - hermite_log_normalizer(p.n, p.theta, p.variance_t);
}

double corners_log_normalizer(int n, Theta theta, double t) {
  const double th = theta.value();
  double z = hermite_log_normalizer(n, theta, t);
  for (int k = 2; k <= n; ++k) z += k * std::lgamma(th) - std::lgamma(k * th);
  return z;
}

double corners_log_density(const ConePoint& y, const EnsembleParams& p) {
  if (y.depth() != p.n) throw std::invalid_argument("cone point depth does not match N");
  if (!y.valid()) return kNegInf;
  const double th = p.theta.value();
  const auto& top = y.levels.back();
  double acc = log_vandermonde(top, 1.0);
  for (double v : top) acc -= v * v / (2.0 * p.variance_t);
  for (int n = 1; n < p.n; ++n) {
    const auto& cur = y.levels[static_cast<std::size_t>(n - 1)];
    const auto& next = y.levels[static_cast<std::size_t>(n)];
    acc += log_vandermonde(cur, 2.0 - 2.0 * th);
    for (double a : cur)
      for (double b : next) acc += pow_log(std::abs(a - b), th - 1.0);
  }
  if (std::isnan(acc)) return kNegInf;
  return acc - corners_log_normalizer(p.n, p.theta, p.variance_t);
}

double theta_gibbs_link_log(std::span<const double> u, std::span<const double> v, Theta theta) {
  const std::size_t k = v.size();
  if (k < 1 || u.size() + 1 != k) throw std::invalid_argument("link needs k−1 lower and k upper values");
  if (!sorted(v)) return kNegInf;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!(v[i] <= u[i] && u[i] <= v[i + 1])) return kNegInf;
  const double th = theta.value();
  double acc = std::lgamma(static_cast<double>(k) * th) - static_cast<double>(k) * std::lgamma(th);
  acc += log_vandermonde(u, 1.0);
  for (double a : u)
    for (double b : v) acc += pow_log(std::abs(b - a), th - 1.0);
  acc += log_vandermonde(v, 1.0 - 2.0 * th);
  if (std::isnan(acc)) return kNegInf;
  return acc;
}

DixonAnderson dixon_anderson_check(std::span<const double> v, Theta theta) {
  const std::size_t m = v.size() - 1;
  if (v.size() < 2 || m > 2) throw std::invalid_argument("Dixon–Anderson check supports m = 1, 2");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw std::invalid_argument("Dixon–Anderson check needs strictly ordered v");
  const double th = theta.value();
  const double e = th - 1.0;

  DixonAnderson out;
  double log_rhs = (m + 1) * std::lgamma(th) - std::lgamma((m + 1) * th);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) log_rhs += (2.0 * th - 1.0) * std::log(v[j] - v[i]);
  out.rhs = std::exp(log_rhs);

  if (m == 1) {
    out.lhs = quad::power_singular([](double) { return 1.0; }, v[0], v[1], e, e).value;
    return out;
  }
  auto inner = [&](double u1) {
    auto g = [&](double u2) { return (u2 - u1) * std::pow(u2 - v[0], e); };
    return quad::power_singular(g, v[1], v[2], e, e).value;
  };
  auto outer = [&](double u1) { return std::pow(v[2] - u1, e) * inner(u1); };
  out.lhs = quad::power_singular(outer, v[0], v[1], e, e, 1e-12).value;
  return out;
}

double integrated_autocorr_time(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 4) return 1.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (!(var > 0.0)) return 1.0;
  double tau = 1.0;
  for (std::size_t lag = 1; lag < n / 2; ++lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) c += (x[i] - mean) * (x[i + lag] - mean);
    tau += 2.0 * c / (static_cast<double>(n) * var);
    if (static_cast<double>(lag) >= 5.0 * tau) break;
  }
  return std::max(tau, 1.0);
}

namespace {

double hermite_symmetric_log(const std::vector<double>& y, double two_theta, double t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    acc -= y[i] * y[i] / (2.0 * t);
    for (std::size_t j = i + 1; j < y.size(); ++j) {
      const double d = std::abs(y[j] - y[i]);
      if (d == 0.0) return kNegInf;
      acc += two_theta * std::log(d);
    }
  }
  return acc;
}

struct ChainOutput {
  std::vector<WeylPoint> samples;
  double acceptance = 0.0;
  double tau = 1.0;
  int thin = 1;
  double lag1 = 0.0;
};

double lag1_autocorr(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 3) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    den += (x[i] - mean) * (x[i] - mean);
    if (i + 1 < n) num += (x[i] - mean) * (x[i + 1] - mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

ChainOutput run_chain(const EnsembleParams& p, std::size_t count, Rng& rng, const McmcOptions& opts) {
  const auto n = static_cast<std::size_t>(p.n);
  const double two_theta = 2.0 * p.theta.value();
  const double t = p.variance_t;
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;

  std::vector<double> y(n), prop(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = std::sqrt(t) * (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) + 0.1 * normal(rng);
  double ly = hermite_symmetric_log(y, two_theta, t);
  double log_sigma = std::log(std::sqrt(t) * 2.4 / std::sqrt(static_cast<double>(n)));

  auto step = [&](double sigma) {
    for (std::size_t i = 0; i < n; ++i) prop[i] = y[i] + sigma * normal(rng);
    const double lp = hermite_symmetric_log(prop, two_theta, t);
    if (std::log(unif(rng)) < lp - ly) {
      y.swap(prop);
      ly = lp;
      return true;
    }
    return false;
  };

  for (int it = 0; it < opts.burn_in; ++it) {
    const bool acc = step(std::exp(log_sigma));
    log_sigma += ((acc ? 1.0 : 0.0) - opts.target_accept) / std::sqrt(1.0 + it / 10.0);
  }
  const double sigma = std::exp(log_sigma);

  std::size_t accepted = 0, proposed = 0;
  std::vector<std::vector<double>> traces(n + 1);
  std::vector<double> sorted_y(n);
  for (int it = 0; it < opts.pilot; ++it) {
    accepted += step(sigma);
    ++proposed;
    sorted_y = y;
    std::sort(sorted_y.begin(), sorted_y.end());
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      traces[i].push_back(sorted_y[i]);
      sq += y[i] * y[i];
    }
    traces[n].push_back(sq);
  }
  ChainOutput out;
  for (const auto& tr : traces) out.tau = std::max(out.tau, integrated_autocorr_time(tr));
  out.thin = std::clamp(static_cast<int>(std::ceil(2.0 * out.tau)), 1, opts.max_thin);

  std::vector<double> sq_trace;
  out.samples.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    for (int k = 0; k < out.thin; ++k) {
      accepted += step(sigma);
      ++proposed;
    }
    sorted_y = y;
    std::sort(sorted_y.begin(), sorted_y.end());
    double sq = 0.0;
    for (double v : y) sq += v * v;
    sq_trace.push_back(sq);
    out.samples.push_back(WeylPoint{sorted_y});
  }
  out.acceptance = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  out.lag1 = lag1_autocorr(sq_trace);
  return out;
}

}  // namespace

HermiteSamples sample_hermite(const EnsembleParams& p, std::size_t n_samples, std::uint64_t seed,
                              const McmcOptions& opts, int workers) {
  const int chains = std::max(1, opts.chains);
  const auto per_chain = (n_samples + static_cast<std::size_t>(chains) - 1) / static_cast<std::size_t>(chains);
  std::vector<ChainOutput> outputs(static_cast<std::size_t>(chains));
  parallel_for(outputs.size(), resolve_workers(workers), [&](std::size_t c) {
    Rng rng = make_rng(seed, c);
    outputs[c] = run_chain(p, per_chain, rng, opts);
  });
  HermiteSamples res;
  res.samples.reserve(n_samples);
  double acc = 0.0;
  for (const auto& o : outputs) {
    for (const auto& s : o.samples) {
      if (res.samples.size() == n_samples) break;
      res.samples.push_back(s);
    }
    acc += o.acceptance;
    res.diagnostics.autocorr_time = std::max(res.diagnostics.autocorr_time, o.tau);
    res.diagnostics.thin = std::max(res.diagnostics.thin, o.thin);
    if (std::abs(o.lag1) > std::abs(res.diagnostics.lag1_after_thinning)) res.diagnostics.lag1_after_thinning = o.lag1;
    // Thinning capped below the 2τ target, or visibly correlated output.
    if (o.thin < 2.0 * o.tau || std::abs(o.lag1) > 0.1 + 3.0 / std::sqrt(static_cast<double>(per_chain)))
      res.diagnostics.under_thinned = true;
  }
  res.diagnostics.chains = chains;
  res.diagnostics.acceptance_rate = acc / chains;
  return res;
}

WeylPoint sample_hermite_tridiagonal(const EnsembleParams& p, Rng& rng) {
  const int n = p.n;
  const double beta = p.theta.beta();
  std::normal_distribution<double> normal(0.0, std::sqrt(2.0));
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) diag[i] = normal(rng) / std::sqrt(2.0);
  for (int i = 0; i + 1 < n; ++i) {
    std::chi_squared_distribution<double> chi2(beta * (n - 1 - i));
    sub[i] = std::sqrt(chi2(rng)) / std::sqrt(2.0);
  }
  WeylPoint out;
  out.coords.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    out.coords[0] = diag[0];
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) out.coords[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
  }
  const double scale = std::sqrt(p.variance_t);
  for (auto& c : out.coords) c *= scale;
  std::sort(out.coords.begin(), out.coords.end());
  return out;
}

std::vector<double> sample_link(std::span<const double> v, Theta theta, Rng& rng, int* fallbacks) {
  const std::size_t k = v.size();
  if (k < 2) return {};
  const double th = theta.value();
  const double e = th - 1.0;
  std::uniform_real_distribution<double> unif;

  // Per-coordinate proposal masses are reused across rejection attempts.
  std::vector<double> mass(k - 1, 0.0);
  std::vector<bool> degenerate(k - 1, false);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (v[i + 1] - v[i] < 1e-12) {
      degenerate[i] = true;
      if (fallbacks) ++*fallbacks;
      continue;
    }
    if (th == 1.0) continue;
    auto g = [&, i](double x) {
      double acc = 1.0;
      for (std::size_t j = 0; j < k; ++j)
        if (j != i && j != i + 1) acc *= std::pow(std::abs(x - v[j]), e);
      return acc;
    };
    mass[i] = quad::power_singular(g, v[i], v[i + 1], e, e).value;
  }

  double bound = 1.0;
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t m = i + 1; m + 1 < k; ++m) bound *= v[m + 1] - v[i];

  std::vector<double> u(k - 1);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    for (std::size_t i = 0; i + 1 < k; ++i) {
      if (degenerate[i]) {
        u[i] = 0.5 * (v[i] + v[i + 1]);
        continue;
      }
      const double q = unif(rng);
      if (th == 1.0) {
        u[i] = v[i] + q * (v[i + 1] - v[i]);
        continue;
      }
      auto g = [&, i](double x) {
        double acc = 1.0;
        for (std::size_t j = 0; j < k; ++j)
          if (j != i && j != i + 1) acc *= std::pow(std::abs(x - v[j]), e);
        return acc;
      };
      u[i] = quad::power_singular_quantile(g, v[i], v[i + 1], e, e, q, mass[i]);
    }
    if (k == 2) return u;
    double ratio = 1.0;
    for (std::size_t i = 0; i + 1 < k; ++i)
      for (std::size_t m = i + 1; m + 1 < k; ++m) ratio *= u[m] - u[i];
    if (bound <= 0.0 || unif(rng) * bound <= ratio) return u;
  }
  throw std::runtime_error("link sampler rejection loop did not terminate");
}

ConePoint sample_corners_given_top(const WeylPoint& v, Theta theta, Rng& rng, int* fallbacks) {
  for (std::size_t i = 1; i < v.coords.size(); ++i)
    if (!(v.coords[i] > v.coords[i - 1])) throw std::invalid_argument("top level must be strictly ordered");
  const std::size_t n = v.coords.size();
  ConePoint out;
  out.levels.resize(n);
  if (n == 0) return out;
  out.levels[n - 1] = v.coords;
  for (std::size_t k = n; k >= 2; --k) out.levels[k - 2] = sample_link(out.levels[k - 1], theta, rng, fallbacks);
  return out;
}

ConePoint sample_corners_given_top(const WeylPoint& v, Theta theta, std::uint64_t seed, int* fallbacks) {
  Rng rng(seed);
  return sample_corners_given_top(v, theta, rng, fallbacks);
}

CornersSamples sample_corners(const EnsembleParams& p, std::size_t n_samples, std::uint64_t seed,
                              const McmcOptions& opts, int workers) {
  auto tops = sample_hermite(p, n_samples, seed, opts, workers);
  CornersSamples out;
  out.diagnostics = tops.diagnostics;
  out.samples.resize(tops.samples.size());
  std::vector<int> fb(tops.samples.size(), 0);
  const std::uint64_t link_seed = child_seed(seed, 0x6C696E6BULL);
  parallel_for(out.samples.size(), resolve_workers(workers), [&](std::size_t i) {
    Rng rng = make_rng(link_seed, i);
    out.samples[i] = sample_corners_given_top(tops.samples[i], p.theta, rng, &fb[i]);
  });
  for (int f : fb) out.fallbacks += f;
  return out;
}

}  // namespace jackflow
