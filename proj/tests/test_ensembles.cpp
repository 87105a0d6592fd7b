#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "jackflow/ensembles.hpp"
#include "jackflow/quadrature.hpp"

using namespace jackflow;

namespace {

ConePoint random_cone_point(std::mt19937_64& gen, int n) {
  std::normal_distribution<double> normal;
  std::vector<double> top(static_cast<std::size_t>(n));
  for (auto& x : top) x = 2.0 * normal(gen);
  std::sort(top.begin(), top.end());
  ConePoint p;
  p.levels.resize(static_cast<std::size_t>(n));
  p.levels.back() = top;
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int k = n; k >= 2; --k) {
    const auto& v = p.levels[static_cast<std::size_t>(k - 1)];
    auto& u = p.levels[static_cast<std::size_t>(k - 2)];
    u.resize(static_cast<std::size_t>(k - 1));
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = v[i] + unif(gen) * (v[i + 1] - v[i]);
  }
  return p;
}

double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double var_of(const std::vector<double>& x) {
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace

TEST(HermiteDensity, OneParticleIsGaussian) {
  for (double t : {0.5, 1.0, 3.0}) {
    const EnsembleParams p(1, Theta(1.7), t);
    for (double y : {-1.3, 0.0, 2.2}) {
      const double expected = -y * y / (2 * t) - 0.5 * std::log(2 * std::numbers::pi * t);
      EXPECT_NEAR(hermite_log_density(WeylPoint{{y}}, p), expected, 1e-13);
    }
  }
}

TEST(HermiteDensity, IntegratesToOneForTwoParticles) {
  for (double th : {0.5, 1.0, 2.0}) {
    const EnsembleParams p(2, Theta(th), 1.0);
    const double L = 10.0;
    auto inner = [&](double y2) {
      auto f = [&](double y1) { return std::exp(hermite_log_density(WeylPoint{{y1, y2}}, p)); };
      return quad::integrate(f, -L, y2, 1e-10).value;
    };
    const double total = quad::integrate(inner, -L, L, 1e-10).value;
    EXPECT_NEAR(total, 1.0, 1e-6) << "theta=" << th;
  }
}

TEST(HermiteDensity, ScalingIdentity) {
  const Theta th(1.3);
  const int n = 3;
  const double t = 2.7;
  const WeylPoint y{{-1.1, 0.4, 2.0}};
  WeylPoint z = y;
  for (auto& c : z.coords) c /= std::sqrt(t);
  // y = √t z: density_t(y) = t^{-N/2} density_1(y/√t).
  const double lhs = hermite_log_density(y, EnsembleParams(n, th, t));
  const double rhs = -0.5 * n * std::log(t) + hermite_log_density(z, EnsembleParams(n, th, 1.0));
  EXPECT_NEAR(lhs, rhs, 1e-12);
  EXPECT_EQ(hermite_log_density(WeylPoint{{1.0, 0.0, 2.0}}, EnsembleParams(n, th, t)),
            -std::numeric_limits<double>::infinity());
}

TEST(CornersDensity, FactorizesIntoHermiteTimesLinks) {
  std::mt19937_64 gen(3);
  for (double th : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    for (int n = 1; n <= 4; ++n) {
      for (int rep = 0; rep < 20; ++rep) {
        const auto y = random_cone_point(gen, n);
        const EnsembleParams p(n, Theta(th), 1.4);
        double expected = hermite_log_density(WeylPoint{y.levels.back()}, p);
        for (int k = 2; k <= n; ++k)
          expected += theta_gibbs_link_log(y.levels[static_cast<std::size_t>(k - 2)],
                                           y.levels[static_cast<std::size_t>(k - 1)], Theta(th));
        EXPECT_NEAR(corners_log_density(y, p), expected, 1e-10);
      }
    }
  }
}

TEST(CornersDensity, OneLevelIsGaussianAndThetaOneIsFlatGivenTop) {
  const EnsembleParams p1(1, Theta(2.0), 0.8);
  EXPECT_NEAR(corners_log_density(ConePoint{{{0.3}}}, p1), hermite_log_density(WeylPoint{{0.3}}, p1), 1e-14);
  const EnsembleParams p(3, Theta(1.0), 1.0);
  const ConePoint a{{{0.1}, {-0.5, 0.5}, {-1.0, 0.2, 1.0}}};
  const ConePoint b{{{-0.3}, {-0.9, 0.6}, {-1.0, 0.2, 1.0}}};
  EXPECT_NEAR(corners_log_density(a, p), corners_log_density(b, p), 1e-12);
  const ConePoint outside{{{0.7}, {-0.5, 0.5}, {-1.0, 0.2, 1.0}}};
  EXPECT_EQ(corners_log_density(outside, p), -std::numeric_limits<double>::infinity());
}

TEST(ThetaGibbsLink, WorkedExamples) {
  const std::vector<double> v2{-0.4, 1.1};
  for (double u : {-0.3, 0.2, 1.0})
    EXPECT_NEAR(theta_gibbs_link_log(std::vector<double>{u}, v2, Theta(1.0)), -std::log(1.5), 1e-13);
  EXPECT_EQ(theta_gibbs_link_log(std::vector<double>{1.2}, v2, Theta(1.0)), -std::numeric_limits<double>::infinity());
  // θ=1, k=3: 2(u₂−u₁)/∏(v_n−v_j).
  const std::vector<double> v3{0.0, 1.0, 3.0};
  const std::vector<double> u{0.5, 2.0};
  EXPECT_NEAR(theta_gibbs_link_log(u, v3, Theta(1.0)), std::log(2.0 * 1.5 / (1.0 * 3.0 * 2.0)), 1e-13);
  // θ=2, k=2: Beta(2,2) on the normalized position.
  const double w = 0.3;
  EXPECT_NEAR(theta_gibbs_link_log(std::vector<double>{w}, std::vector<double>{0.0, 1.0}, Theta(2.0)),
              std::log(6.0 * w * (1 - w)), 1e-12);
}

// Keeps quadrature abscissae strictly inside (a, b) after rounding.
static double inside(double x, double a, double b) {
  return std::clamp(x, std::nextafter(a, b), std::nextafter(b, a));
}

TEST(ThetaGibbsLink, IntegratesToOneOverThePolytope) {
  for (double th : {0.5, 1.0, 2.0}) {
    const double e = th - 1.0;
    const std::vector<double> v2{-0.7, 0.9};
    auto g2 = [&](double x) {
      x = inside(x, v2[0], v2[1]);
      // Strip the endpoint powers that the integrator applies itself.
      const double full = std::exp(theta_gibbs_link_log(std::vector<double>{x}, v2, Theta(th)));
      return full / (std::pow(x - v2[0], e) * std::pow(v2[1] - x, e));
    };
    EXPECT_NEAR(quad::power_singular(g2, v2[0], v2[1], e, e).value, 1.0, 1e-6) << "k=2 theta=" << th;

    const std::vector<double> v3{-1.0, 0.3, 1.4};
    auto inner = [&](double u1) {
      auto g = [&](double u2) {
        u2 = inside(u2, v3[1], v3[2]);
        const double full = std::exp(theta_gibbs_link_log(std::vector<double>{u1, u2}, v3, Theta(th)));
        return full / (std::pow(u2 - v3[1], e) * std::pow(v3[2] - u2, e));
      };
      return quad::power_singular(g, v3[1], v3[2], e, e).value;
    };
    auto outer = [&](double u1) {
      u1 = inside(u1, v3[0], v3[1]);
      return inner(u1) / (std::pow(u1 - v3[0], e) * std::pow(v3[1] - u1, e));
    };
    EXPECT_NEAR(quad::power_singular(outer, v3[0], v3[1], e, e, 1e-12).value, 1.0, 1e-6) << "k=3 theta=" << th;
  }
}

TEST(DixonAnderson, WorkedExamples) {
  const std::vector<double> v{0.2, 1.7};
  const auto r = dixon_anderson_check(v, Theta(1.0));
  EXPECT_NEAR(r.lhs, 1.5, 1e-12);
  EXPECT_NEAR(r.rhs, 1.5, 1e-12);
  const auto s = dixon_anderson_check(std::vector<double>{0.0, 1.0}, Theta(2.0));
  EXPECT_NEAR(s.lhs, 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(s.rhs, 1.0 / 6.0, 1e-12);
  EXPECT_THROW(dixon_anderson_check(std::vector<double>{0, 1, 2, 3}, Theta(1.0)), std::invalid_argument);
}

TEST(DixonAnderson, HoldsForOneAndTwoIntegrationVariables) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (double th : {0.5, 1.0, 1.5, 2.0}) {
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<double> v1{unif(gen), unif(gen)};
      std::sort(v1.begin(), v1.end());
      const auto a = dixon_anderson_check(v1, Theta(th));
      EXPECT_LT(std::abs(a.lhs - a.rhs) / a.rhs, 1e-6);
      std::vector<double> v2{unif(gen), unif(gen), unif(gen)};
      std::sort(v2.begin(), v2.end());
      const auto b = dixon_anderson_check(v2, Theta(th));
      EXPECT_LT(std::abs(b.lhs - b.rhs) / b.rhs, 1e-5) << "theta=" << th;
    }
  }
}

TEST(SampleHermite, OneParticleMatchesGaussianMoments) {
  const EnsembleParams p(1, Theta(1.0), 2.0);
  const auto res = sample_hermite(p, 20000, 4);
  ASSERT_EQ(res.samples.size(), 20000u);
  std::vector<double> x;
  for (const auto& s : res.samples) x.push_back(s.coords[0]);
  const double se = std::sqrt(2.0 / (20000.0 / res.diagnostics.autocorr_time));
  EXPECT_NEAR(mean_of(x), 0.0, 4 * se);
  EXPECT_NEAR(var_of(x), 2.0, 0.1);
  EXPECT_GT(res.diagnostics.acceptance_rate, 0.15);
  EXPECT_LT(res.diagnostics.acceptance_rate, 0.6);
  EXPECT_FALSE(res.diagnostics.under_thinned);
}

TEST(SampleHermite, GapMomentMatchesQuadrature) {
  const EnsembleParams p(2, Theta(1.0), 1.0);
  const double L = 10.0;
  auto inner = [&](double y2) {
    auto f = [&](double y1) {
      return (y2 - y1) * (y2 - y1) * std::exp(hermite_log_density(WeylPoint{{y1, y2}}, p));
    };
    return quad::integrate(f, -L, y2, 1e-10).value;
  };
  const double exact = quad::integrate(inner, -L, L, 1e-10).value;
  const auto res = sample_hermite(p, 10000, 8);
  std::vector<double> g2;
  for (const auto& s : res.samples) g2.push_back(std::pow(s.coords[1] - s.coords[0], 2));
  const double se = std::sqrt(var_of(g2) / static_cast<double>(g2.size()));
  EXPECT_NEAR(mean_of(g2), exact, 3 * se);

  // Doubling the output length keeps the estimate within 2 SE.
  const auto longer = sample_hermite(p, 20000, 8);
  std::vector<double> h2;
  for (const auto& s : longer.samples) h2.push_back(std::pow(s.coords[1] - s.coords[0], 2));
  EXPECT_NEAR(mean_of(h2), mean_of(g2), 2 * se);
}

TEST(SampleHermite, DeterministicAcrossWorkerCounts) {
  const EnsembleParams p(3, Theta(0.5), 1.0);
  const auto a = sample_hermite(p, 300, 21, {}, 1);
  const auto b = sample_hermite(p, 300, 21, {}, 3);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].coords, b.samples[i].coords);
}

TEST(Tridiagonal, GapMomentMatchesClosedForm) {
  // For N=2 the gap g has density ∝ g^{2θ} e^{−g²/4t}, so E g² = 2t(2θ+1).
  for (double th : {0.5, 1.0, 2.0}) {
    const EnsembleParams p(2, Theta(th), 1.5);
    Rng rng(5);
    std::vector<double> g2, sum;
    for (int i = 0; i < 20000; ++i) {
      const auto w = sample_hermite_tridiagonal(p, rng);
      g2.push_back(std::pow(w.coords[1] - w.coords[0], 2));
      sum.push_back(w.coords[0] + w.coords[1]);
    }
    const double se = std::sqrt(var_of(g2) / g2.size());
    EXPECT_NEAR(mean_of(g2), 2 * 1.5 * (2 * th + 1), 3.5 * se);
    EXPECT_NEAR(var_of(sum), 2 * 1.5, 0.1);
  }
}

TEST(SampleCorners, GivenTopWorkedCases) {
  EXPECT_EQ(sample_corners_given_top(WeylPoint{{0.4}}, Theta(2.0), std::uint64_t{1}).levels,
            (std::vector<std::vector<double>>{{0.4}}));
  const WeylPoint v{{-1.0, 2.0}};
  for (double th : {1.0, 2.0}) {
    Rng rng(9);
    std::vector<double> w;
    for (int i = 0; i < 10000; ++i) {
      const auto c = sample_corners_given_top(v, Theta(th), rng);
      w.push_back((c.levels[0][0] + 1.0) / 3.0);
    }
    // Beta(θ,θ): mean 1/2, variance 1/(4(2θ+1)).
    EXPECT_NEAR(mean_of(w), 0.5, 0.01);
    EXPECT_NEAR(var_of(w), 1.0 / (4 * (2 * th + 1)), 0.004);
  }
}

TEST(SampleCorners, InterlacingAndTopMarginal) {
  const EnsembleParams p(3, Theta(2.0), 1.0);
  const auto corners = sample_corners(p, 500, 12);
  const auto tops = sample_hermite(p, 500, 12);
  ASSERT_EQ(corners.samples.size(), 500u);
  for (std::size_t i = 0; i < corners.samples.size(); ++i) {
    EXPECT_TRUE(corners.samples[i].valid());
    EXPECT_EQ(corners.samples[i].levels.back(), tops.samples[i].coords);
  }
  EXPECT_EQ(corners.fallbacks, 0);
}

TEST(SampleLink, ThreeLevelAtThetaHalfMatchesLinkMean) {
  // E[u1] under the k=2 link with θ=1/2 on (0,1) is 1/2 by symmetry; E[u1²] = 3/8 (arcsine law).
  Rng rng(77);
  std::vector<double> u, u2;
  for (int i = 0; i < 20000; ++i) {
    const auto s = sample_link(std::vector<double>{0.0, 1.0}, Theta(0.5), rng);
    u.push_back(s[0]);
    u2.push_back(s[0] * s[0]);
  }
  EXPECT_NEAR(mean_of(u), 0.5, 0.01);
  EXPECT_NEAR(mean_of(u2), 0.375, 0.01);
}
