#include "jackflow/statcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "json.hpp"
#include "jackflow/diffusion.hpp"
#include "jackflow/ensembles.hpp"
#include "jackflow/jack.hpp"
#include "jackflow/parallel.hpp"
#include "jackflow/quadrature.hpp"
#include "jackflow/rng.hpp"

namespace jackflow {

std::string reports_to_json(std::span<const TestReport> reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["name"] = r.name;
    j["statistic"] = r.statistic;
    j["threshold"] = r.threshold;
    j["p_value"] = r.p_value ? nlohmann::json(*r.p_value) : nlohmann::json(nullptr);
    j["pass"] = r.pass;
    j["n_samples"] = r.n_samples;
    j["runtime_s"] = r.runtime_s;
    j["acceptance"] = r.acceptance;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

double kolmogorov_q(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr double kPi = 3.14159265358979323846;
  if (lambda < 1.18) {
    // Dual series, fast for small λ.
    const double y = std::exp(-kPi * kPi / (8.0 * lambda * lambda));
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) s += std::pow(y, (2 * k - 1) * (2 * k - 1));
    return std::clamp(1.0 - std::sqrt(2.0 * kPi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample needs two nonempty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

double chi2_sf(double statistic, int dof) {
  if (dof < 1) throw std::invalid_argument("chi2 needs at least one degree of freedom");
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), statistic));
}

Chi2Result chi2_counts(std::span<const double> observed, std::span<const double> probabilities,
                       double min_expected) {
  if (observed.size() != probabilities.size() || observed.size() < 2)
    throw std::invalid_argument("chi2 needs matching observed/probability vectors with at least two bins");
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  const double mass = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  if (!(mass > 0.0)) throw std::invalid_argument("bin probabilities sum to zero");
  Chi2Result r;
  r.observed.assign(observed.begin(), observed.end());
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double e = total * probabilities[k] / mass;
    if (e < min_expected)
      throw SparseBinError("bin " + std::to_string(k) + " expects " + std::to_string(e) + " < " +
                           std::to_string(min_expected) + " counts");
    r.expected.push_back(e);
    r.statistic += (observed[k] - e) * (observed[k] - e) / e;
  }
  r.dof = static_cast<int>(observed.size()) - 1;
  r.p_value = chi2_sf(r.statistic, r.dof);
  return r;
}

Chi2Result chi2_histogram(std::span<const double> samples, const std::function<double(double)>& target_log_density,
                          std::span<const double> edges, double min_expected) {
  if (edges.size() < 3) throw std::invalid_argument("chi2_histogram needs at least two bins");
  if (!std::is_sorted(edges.begin(), edges.end())) throw std::invalid_argument("bin edges must be sorted");
  std::vector<double> counts(edges.size() - 1, 0.0);
  for (double s : samples) {
    if (!(s >= edges.front() && s <= edges.back()))
      throw std::invalid_argument("sample " + std::to_string(s) + " outside the bin range");
    auto it = std::upper_bound(edges.begin(), edges.end(), s);
    std::size_t k = static_cast<std::size_t>(it - edges.begin());
    k = std::min(k, edges.size() - 1) - 1;
    counts[k] += 1.0;
  }
  std::vector<double> probs;
  const auto f = [&](double x) { return std::exp(target_log_density(x)); };
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) probs.push_back(quad::integrate(f, edges[k], edges[k + 1], 1e-10).value);
  return chi2_counts(counts, probs, min_expected);
}

Dispersion poisson_dispersion(std::span<const double> counts, double lo, double hi) {
  if (counts.empty()) return {0.0, false};
  const double n = static_cast<double>(counts.size());
  const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / n;
  double ss = 0.0;
  for (double c : counts) ss += (c - mean) * (c - mean);
  const double var = counts.size() > 1 ? ss / (n - 1.0) : 0.0;
  const double index = mean > 0.0 ? var / mean : 0.0;
  return {index, index >= lo && index <= hi};
}

namespace {

void finish_probe(RateProbe& probe, std::span<const double> eps_list, double growth_limit) {
  std::vector<double> maxima(eps_list.size(), 0.0);
  for (const auto& r : probe.residuals) {
    const auto e = static_cast<std::size_t>(std::find(eps_list.begin(), eps_list.end(), r.epsilon) - eps_list.begin());
    maxima[e] = std::max(maxima[e], std::abs(r.residual));
  }
  probe.max_abs_residual = maxima;
  probe.max_growth = 0.0;
  for (std::size_t e = 1; e < maxima.size(); ++e) {
    // Floor at the round-off level of q ≈ ε⁻¹.
    const double floor = 1e-12 / std::min(eps_list[e], eps_list[e - 1]);
    probe.max_growth = std::max(probe.max_growth, (maxima[e] + floor) / (maxima[e - 1] + floor));
  }
  probe.pass = probe.max_growth <= growth_limit;
}

void check_eps(std::span<const double> eps_list) {
  if (eps_list.empty()) throw std::invalid_argument("empty ε list");
  for (double e : eps_list)
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("ε must lie in (0, 1)");
}

// λ_r = round(ε⁻¹ + ε^{−1/2} y_{k+1−r}); rows decreasing for ascending y.
std::vector<int> lattice_rows(const std::vector<double>& y, double eps) {
  std::vector<int> rows(y.size());
  const double shift = 1.0 / eps, scale = 1.0 / std::sqrt(eps);
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double v = std::round(shift + scale * y[y.size() - 1 - r]);
    if (v < 0.0 || v > 2e9) throw std::invalid_argument("ε too large for this point: negative or huge row");
    rows[r] = static_cast<int>(v);
  }
  return rows;
}

double adjusted(int row, double eps) { return std::sqrt(eps) * (static_cast<double>(row) - 1.0 / eps); }

}  // namespace

RateProbe rate_expansion_probe(const WeylPoint& y, Theta theta, std::span<const double> eps_list, double growth_limit) {
  check_eps(eps_list);
  if (!y.valid() || y.coords.empty()) throw std::invalid_argument("probe point must be a nonempty Weyl point");
  const int n = static_cast<int>(y.coords.size());
  const double th = theta.value();
  RateProbe probe;
  for (double eps : eps_list) {
    const auto rows = lattice_rows(y.coords, eps);
    for (std::size_t r = 1; r < rows.size(); ++r)
      if (rows[r] >= rows[r - 1]) throw std::invalid_argument("ε too large: particles coincide after rounding");
    for (int i = 1; i <= n; ++i) {
      const double yi = adjusted(rows[static_cast<std::size_t>(i - 1)], eps);
      double b = 0.0;
      for (int j = 1; j <= n; ++j)
        if (j != i) b += th / (yi - adjusted(rows[static_cast<std::size_t>(j - 1)], eps));
      // q = ε⁻¹ q_disc/θ, and q − ε⁻¹ = ε⁻¹ expm1(log(q_disc/θ)).
      const double excess = rates::single_log_excess(rows, i, th);
      RateResidual res;
      res.epsilon = eps;
      res.level = n;
      res.row = i;
      res.coordinate = yi;
      res.rate = std::exp(excess) / eps;
      res.drift = b;
      res.residual = std::expm1(excess) / eps - b / std::sqrt(eps);
      probe.residuals.push_back(res);
    }
  }
  finish_probe(probe, eps_list, growth_limit);
  return probe;
}

RateProbe rate_expansion_probe(const ConePoint& y, Theta theta, std::span<const double> eps_list, double growth_limit) {
  check_eps(eps_list);
  if (!y.interior()) throw std::invalid_argument("probe point must be in the open cone");
  const int n = y.depth();
  const double th = theta.value();
  RateProbe probe;
  for (double eps : eps_list) {
    std::vector<std::vector<int>> rows;
    for (int k = 1; k <= n; ++k) rows.push_back(lattice_rows(y.levels[static_cast<std::size_t>(k - 1)], eps));
    for (int k = 1; k <= n; ++k) {
      const auto& up = rows[static_cast<std::size_t>(k - 1)];
      for (std::size_t r = 1; r < up.size(); ++r)
        if (up[r] >= up[r - 1]) throw std::invalid_argument("ε too large: particles coincide after rounding");
      if (k > 1) {
        const auto& lo = rows[static_cast<std::size_t>(k - 2)];
        for (std::size_t r = 0; r < lo.size(); ++r)
          if (!(up[r] > lo[r] && lo[r] > up[r + 1]))
            throw std::invalid_argument("ε too large: interlacing degenerates after rounding");
      }
    }
    for (int k = 1; k <= n; ++k) {
      const auto& up = rows[static_cast<std::size_t>(k - 1)];
      const std::vector<int> empty;
      const auto& lo = k > 1 ? rows[static_cast<std::size_t>(k - 2)] : empty;
      for (int i = 1; i <= k; ++i) {
        const double yi = adjusted(up[static_cast<std::size_t>(i - 1)], eps);
        double b = 0.0;
        for (int m = 1; m <= k; ++m)
          if (m != i) b += (1.0 - th) / (yi - adjusted(up[static_cast<std::size_t>(m - 1)], eps));
        for (int m = 1; m < k; ++m) b -= (1.0 - th) / (yi - adjusted(lo[static_cast<std::size_t>(m - 1)], eps));
        const double excess = rates::multi_log_excess(up, lo, i, th);
        RateResidual res;
        res.epsilon = eps;
        res.level = k;
        res.row = i;
        res.coordinate = yi;
        res.rate = std::exp(excess) / eps;
        res.drift = b;
        res.residual = std::expm1(excess) / eps - b / std::sqrt(eps);
        probe.residuals.push_back(res);
      }
    }
  }
  finish_probe(probe, eps_list, growth_limit);
  return probe;
}

IntertwiningResult intertwining_test(const IntertwiningOptions& opts) {
  if (opts.n < 2) throw std::invalid_argument("intertwining needs N ≥ 2");
  if (!(opts.t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  const auto start = std::chrono::steady_clock::now();
  const int n = opts.n;
  const std::size_t m = static_cast<std::size_t>(n - 1);
  std::vector<std::vector<double>> a(m, std::vector<double>(opts.samples)), b = a;
  parallel_for(opts.samples, resolve_workers(opts.workers), [&](std::size_t s) {
    Rng rng = make_rng(opts.seed, s);
    const auto top = sample_hermite_tridiagonal(EnsembleParams(n, opts.theta, opts.start_variance), rng);
    SdeConfig cfg;
    cfg.theta = opts.theta;
    cfg.t_end = opts.t;
    cfg.dt = opts.dt;
    cfg.delta_stop = 0.0;

    // A: link, then evolve level N−1.
    const auto lower = sample_link(top.coords, opts.theta, rng);
    cfg.n = n - 1;
    cfg.initial = WeylPoint{lower};
    cfg.seed = child_seed(opts.seed ^ 0xA, s);
    const auto pa = integrate_dyson(cfg);

    // B: evolve level N, then link.
    cfg.n = n;
    cfg.initial = top;
    cfg.seed = child_seed(opts.seed ^ 0xB, s);
    const auto pb = integrate_dyson(cfg);
    const auto lb = sample_link(pb.final_state, opts.theta, rng);
    for (std::size_t i = 0; i < m; ++i) {
      a[i][s] = pa.final_state[i];
      b[i][s] = lb[i];
    }
  });
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  IntertwiningResult out;
  out.pass = true;
  for (std::size_t i = 0; i < m; ++i) {
    const auto ks = ks_two_sample(a[i], b[i]);
    TestReport r;
    r.name = "intertwining N=" + std::to_string(n) + " theta=" + std::to_string(opts.theta.value()) +
             " t=" + std::to_string(opts.t) + " coord " + std::to_string(i + 1);
    r.statistic = ks.d;
    r.threshold = opts.d_ceiling;
    r.p_value = ks.p;
    r.pass = ks.d <= opts.d_ceiling;
    r.n_samples = opts.samples;
    r.runtime_s = elapsed;
    out.pass = out.pass && r.pass;
    out.coordinates.push_back(std::move(r));
  }
  return out;
}

}  // namespace jackflow
