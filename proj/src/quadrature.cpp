#include "jackflow/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <cstdio>
#include <string>

namespace jackflow::quad {

namespace {

constexpr unsigned kMaxDepth = 18;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// ∫_0^w f(s) ds for f with an integrable power singularity at s = 0.
template <class F>
Result singular_endpoint(F f, double w, double tol) {
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  const double v = integrator.integrate(f, 0.0, w, tol, &err, &l1, &levels);
  if (!std::isfinite(v)) throw QuadratureError("quadrature produced a non-finite value");
  // Boost's estimate is the level-to-level difference, which is pessimistic once
  // the sum has converged to rounding; only a gross mismatch is treated as failure.
  if (err > std::max(1e3 * tol, 1e-4) * l1 + 1e-300)
    throw QuadratureError("singular quadrature did not converge (error " + fmt(err) + ", L1 " + fmt(l1) + ", width " +
                          fmt(w) + ")");
  return {v, err};
}

// ∫_L^x |u−L|^{pl} h(u) du with h smooth near L. Integrating in s = u − L keeps
// the singular factor exact near the endpoint; tanh-sinh absorbs the power law.
Result left_piece(const std::function<double(double)>& h, double L, double x, double pl, double tol) {
  if (!(x > L)) return {};
  auto f = [&](double s) { return std::pow(s, pl) * h(L + s); };
  return singular_endpoint(f, x - L, tol);
}

// ∫_x^R |R−u|^{pr} h(u) du.
Result right_piece(const std::function<double(double)>& h, double x, double R, double pr, double tol) {
  if (!(R > x)) return {};
  auto f = [&](double s) { return std::pow(s, pr) * h(R - s); };
  return singular_endpoint(f, R - x, tol);
}

}  // namespace

Result integrate(const std::function<double(double)>& g, double a, double b, double tol) {
  if (a == b) return {};
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, a, b, kMaxDepth, tol, &err);
  if (!std::isfinite(v)) throw QuadratureError("quadrature produced a non-finite value");
  if (err > 1e3 * tol * std::max(1.0, std::abs(v)) + 1e-300)
    throw QuadratureError("quadrature did not converge (error " + fmt(err) + ")");
  return {v, err};
}

Result power_singular(const std::function<double(double)>& g, double L, double R, double pl, double pr,
                      double tol) {
  if (!(R > L)) throw std::invalid_argument("empty integration interval");
  if (!(pl > -1.0) || !(pr > -1.0)) throw std::invalid_argument("endpoint exponents must exceed -1");
  const double mid = 0.5 * (L + R);
  auto left_h = [&](double u) { return std::pow(R - u, pr) * g(u); };
  auto right_h = [&](double u) { return std::pow(u - L, pl) * g(u); };
  const Result a = left_piece(left_h, L, mid, pl, tol);
  const Result b = right_piece(right_h, mid, R, pr, tol);
  return {a.value + b.value, a.error + b.error};
}

double power_singular_cdf(const std::function<double(double)>& g, double L, double R, double pl, double pr,
                          double x, double total) {
  if (x <= L) return 0.0;
  if (x >= R) return total;
  const double mid = 0.5 * (L + R);
  constexpr double tol = 1e-13;
  if (x <= mid) {
    auto h = [&](double u) { return std::pow(R - u, pr) * g(u); };
    return left_piece(h, L, x, pl, tol).value;
  }
  auto h = [&](double u) { return std::pow(u - L, pl) * g(u); };
  return total - right_piece(h, x, R, pr, tol).value;
}

double power_singular_quantile(const std::function<double(double)>& g, double L, double R, double pl,
                               double pr, double p, double total) {
  if (p <= 0.0) return L;
  if (p >= 1.0) return R;
  const double target = p * total;
  auto density = [&](double u) { return std::pow(u - L, pl) * std::pow(R - u, pr) * g(u); };
  double lo = L, hi = R;
  double x = L + p * (R - L);
  for (int it = 0; it < 200; ++it) {
    const double F = power_singular_cdf(g, L, R, pl, pr, x, total);
    const double diff = F - target;
    if (std::abs(diff) <= 1e-13 * total) return x;
    if (diff > 0.0)
      hi = x;
    else
      lo = x;
    if (hi - lo <= 1e-15 * (R - L)) return 0.5 * (lo + hi);
    const double f = density(x);
    double next = (f > 0.0 && std::isfinite(f)) ? x - diff / f : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

}  // namespace jackflow::quad
