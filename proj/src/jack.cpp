#include "jackflow/jack.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace jackflow {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log of the Pochhammer symbol (a)_n for a > 0, n ≥ 0.
double log_pochhammer(double a, int n) {
  if (n == 0) return 0.0;
  if (n < 8) {
    double acc = 0.0;
    for (int r = 0; r < n; ++r) acc += std::log(a + r);
    return acc;
  }
  return std::lgamma(a + n) - std::lgamma(a);
}

template <class F>
void for_each_box(const Partition& lambda, F&& f) {
  for (std::size_t i = 1; i <= lambda.length(); ++i)
    for (int j = 1; j <= lambda.row(i); ++j) f(arm_leg(lambda, {static_cast<int>(i), j}));
}

}  // namespace

LogValue jack_principal(const Partition& lambda, int n, Theta theta) {
  if (n < 1) throw std::invalid_argument("principal specialization needs N >= 1");
  if (static_cast<int>(lambda.length()) > n) return LogValue::zero();
  const double th = theta.value();
  double acc = 0.0;
  for_each_box(lambda, [&](const ArmLeg& b) {
    acc += std::log(n * th + b.coarm - th * b.coleg) - std::log(b.arm + th * b.leg + th);
  });
  return LogValue::from_log(acc);
}

LogValue jack_plancherel(const Partition& lambda, double s, Theta theta) {
  if (!(s >= 0.0)) throw std::invalid_argument("Plancherel parameter must be nonnegative");
  if (lambda.empty()) return LogValue::one();
  if (s == 0.0) return LogValue::zero();
  const double th = theta.value();
  double acc = lambda.size() * (std::log(s) + std::log(th));
  for_each_box(lambda, [&](const ArmLeg& b) { acc -= std::log(b.arm + th * b.leg + th); });
  return LogValue::from_log(acc);
}

LogValue jack_evaluate(const Partition& lambda, const Specialization& rho, Theta theta) {
  return std::visit(
      [&](const auto& r) -> LogValue {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PrincipalOnes>)
          return jack_principal(lambda, r.n, theta);
        else
          return jack_plancherel(lambda, r.s, theta);
      },
      rho);
}

LogValue dual_factor(const Partition& lambda, Theta theta) {
  const double th = theta.value();
  double acc = 0.0;
  for_each_box(lambda, [&](const ArmLeg& b) {
    const double h = b.arm + th * b.leg;
    acc += std::log(h + th) - std::log(h + 1.0);
  });
  return LogValue::from_log(acc);
}

LogValue psi(const Partition& nu, const Partition& mu, Theta theta) {
  if (!interlaces(mu, nu)) return LogValue::zero();
  const double th = theta.value();
  const int k = static_cast<int>(std::max(nu.length(), mu.length() + 1));
  double acc = 0.0;
  for (int i = 1; i <= k - 1; ++i) {
    for (int j = i; j <= k - 1; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      const int len = mu.row(uj) - nu.row(uj + 1);
      if (len == 0) continue;
      const double shift = th * (j - i);
      const double mm = mu.row(ui) - mu.row(uj) + shift;
      const double nm = nu.row(ui) - mu.row(uj) + shift;
      acc += log_pochhammer(mm + th, len) - log_pochhammer(mm + 1.0, len) +
             log_pochhammer(nm + 1.0, len) - log_pochhammer(nm + th, len);
    }
  }
  return LogValue::from_log(acc);
}

LogValue single_box_dual_skew(const Partition& lambda, Cell c, Theta theta) {
  const auto i = static_cast<std::size_t>(c.row);
  if (c.row < 1 || c.col != lambda.row(i) + 1 || (i > 1 && lambda.row(i - 1) == lambda.row(i)))
    throw CellError("cell is not addable to the diagram");
  const double th = theta.value();
  double acc = std::log(th);
  for (int k = 1; k <= c.row - 1; ++k) {
    const double a = lambda.row(static_cast<std::size_t>(k)) - c.col;
    const double d = c.row - k;
    acc += std::log(a + th * (d + 1)) - std::log(a + th * d) + std::log(a + 1 + th * (d - 1)) -
           std::log(a + 1 + th * d);
  }
  return LogValue::from_log(acc);
}

namespace {

bool addable_within(const Partition& lambda, Cell c, int max_rows) {
  const auto i = static_cast<std::size_t>(c.row);
  return c.row >= 1 && c.row <= max_rows && c.col == lambda.row(i) + 1 &&
         (i == 1 || lambda.row(i - 1) > lambda.row(i));
}

}  // namespace

double single_level_rate(const Partition& lambda, Cell c, int n, Theta theta) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  if (static_cast<int>(lambda.length()) > n)
    throw std::invalid_argument("partition has more than N rows");
  if (!addable_within(lambda, c, n)) return 0.0;
  const auto rows = lambda.padded(static_cast<std::size_t>(n));
  const double q = rates::single(rows, c.row, theta.value());
  assert(std::abs(q - single_level_rate_product(lambda, c, n, theta)) <= 1e-9 * q);
  return q;
}

double single_level_rate_product(const Partition& lambda, Cell c, int n, Theta theta) {
  if (!addable_within(lambda, c, n)) return 0.0;
  const Partition mu = lambda.with_box(static_cast<std::size_t>(c.row));
  const LogValue r =
      jack_principal(mu, n, theta) / jack_principal(lambda, n, theta) * single_box_dual_skew(lambda, c, theta);
  return r.value();
}

namespace {

void check_levels(const Partition& lambda_k, const Partition& lambda_below, int level) {
  if (level < 1) throw std::invalid_argument("level must be >= 1");
  if (static_cast<int>(lambda_k.length()) > level ||
      static_cast<int>(lambda_below.length()) > level - 1 || !interlaces(lambda_below, lambda_k))
    throw std::invalid_argument("levels do not interlace");
}

}  // namespace

double multilevel_rate(const Partition& lambda_k, const Partition& lambda_below, Cell c, int level,
                       Theta theta) {
  check_levels(lambda_k, lambda_below, level);
  if (!addable_within(lambda_k, c, level)) return 0.0;
  const auto up = lambda_k.padded(static_cast<std::size_t>(level));
  const auto lo = lambda_below.padded(static_cast<std::size_t>(level - 1));
  return rates::multi(up, std::span<const int>(lo.data(), static_cast<std::size_t>(level - 1)), c.row,
                      theta.value());
}

double multilevel_rate_product(const Partition& lambda_k, const Partition& lambda_below, Cell c,
                               int level, Theta theta) {
  check_levels(lambda_k, lambda_below, level);
  if (!addable_within(lambda_k, c, level)) return 0.0;
  const Partition grown = lambda_k.with_box(static_cast<std::size_t>(c.row));
  const LogValue num = psi(grown, lambda_below, theta);
  if (num.is_zero()) return 0.0;
  return (single_box_dual_skew(lambda_k, c, theta) * num / psi(lambda_k, lambda_below, theta)).value();
}

LogValue jack_measure_log(const Partition& lambda, int n, double s, Theta theta) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  if (!(s >= 0.0)) throw std::invalid_argument("s must be nonnegative");
  if (static_cast<int>(lambda.length()) > n) return LogValue::zero();
  const double th = theta.value();
  double acc = -th * s * n;
  if (!lambda.empty()) {
    if (s == 0.0) return LogValue::zero();
    acc += lambda.size() * (std::log(s) + std::log(th));
  }
  for_each_box(lambda, [&](const ArmLeg& b) {
    const double h = b.arm + th * b.leg;
    acc += std::log(n * th + b.coarm - th * b.coleg) - std::log(h + th) - std::log(h + 1.0);
  });
  return LogValue::from_log(acc);
}

LogValue jack_gibbs_weight(const InterlacingArray& arr, Theta theta) {
  if (arr.depth() < 1 || !arr.valid()) return LogValue::zero();
  LogValue w = jack_principal(arr.level(1), 1, theta);
  for (int k = 2; k <= arr.depth(); ++k) w *= psi(arr.level(k), arr.level(k - 1), theta);
  const LogValue norm = jack_principal(arr.level(arr.depth()), arr.depth(), theta);
  if (norm.is_zero()) return LogValue::zero();
  return w / norm;
}

LogValue h_norm(int n, double s, Theta theta) { return LogValue::from_log(theta.value() * n * s); }

namespace rates {

double single(std::span<const int> rows, int i, double theta) noexcept {
  const int n = static_cast<int>(rows.size());
  const double li = rows[static_cast<std::size_t>(i - 1)];
  if (i > 1 && rows[static_cast<std::size_t>(i - 2)] == rows[static_cast<std::size_t>(i - 1)]) return 0.0;
  double q = theta;
  for (int m = i + 1; m <= n; ++m) {
    const double d = li - rows[static_cast<std::size_t>(m - 1)];
    q *= (d + theta * (m - i + 1)) / (d + theta * (m - i));
  }
  for (int l = 1; l < i; ++l) {
    const double d = rows[static_cast<std::size_t>(l - 1)] - li;
    q *= (d + theta * (i - l - 1)) / (d + theta * (i - l));
  }
  return q;
}

double single_log_excess(std::span<const int> rows, int i, double theta) noexcept {
  const int n = static_cast<int>(rows.size());
  const double li = rows[static_cast<std::size_t>(i - 1)];
  if (i > 1 && rows[static_cast<std::size_t>(i - 2)] == rows[static_cast<std::size_t>(i - 1)]) return kNegInf;
  double acc = 0.0;
  for (int m = i + 1; m <= n; ++m) {
    const double d = li - rows[static_cast<std::size_t>(m - 1)];
    acc += std::log1p(theta / (d + theta * (m - i)));
  }
  for (int l = 1; l < i; ++l) {
    const double d = rows[static_cast<std::size_t>(l - 1)] - li;
    acc += std::log1p(-theta / (d + theta * (i - l)));
  }
  return acc;
}

namespace {

bool multi_blocked(std::span<const int> upper, std::span<const int> lower, int i) noexcept {
  if (i <= 1) return false;
  const auto r = static_cast<std::size_t>(i - 1);
  // Not addable (ν_{i-1} = ν_i) implies μ_{i-1} = ν_i, so one test covers both.
  return lower[r - 1] <= upper[r];
}

}  // namespace

double multi(std::span<const int> upper, std::span<const int> lower, int i, double theta) noexcept {
  if (multi_blocked(upper, lower, i)) return 0.0;
  const int k = static_cast<int>(upper.size());
  const double ni = upper[static_cast<std::size_t>(i - 1)];
  double q = theta;
  for (int m = 1; m < i; ++m) {
    const double dn = upper[static_cast<std::size_t>(m - 1)] - ni;
    const double dm = lower[static_cast<std::size_t>(m - 1)] - ni;
    q *= (dn - 1 + theta * (i - m + 1)) / (dn + theta * (i - m));
    q *= (dm + theta * (i - 1 - m)) / (dm - 1 + theta * (i - m));
  }
  for (int n = i; n <= k - 1; ++n) {
    const double a = ni - upper[static_cast<std::size_t>(n)];
    const double b = ni - lower[static_cast<std::size_t>(n - 1)];
    q *= (a + theta * (n - i) + 1) / (a + theta * (n - i + 1));
    q *= (b + theta * (n - i + 1)) / (b + theta * (n - i) + 1);
  }
  return q;
}

double multi_log_excess(std::span<const int> upper, std::span<const int> lower, int i,
                        double theta) noexcept {
  if (multi_blocked(upper, lower, i)) return kNegInf;
  const int k = static_cast<int>(upper.size());
  const double ni = upper[static_cast<std::size_t>(i - 1)];
  const double g = theta - 1.0;
  double acc = 0.0;
  for (int m = 1; m < i; ++m) {
    const double dn = upper[static_cast<std::size_t>(m - 1)] - ni;
    const double dm = lower[static_cast<std::size_t>(m - 1)] - ni;
    acc += std::log1p(g / (dn + theta * (i - m)));
    acc += std::log1p(-g / (dm - 1 + theta * (i - m)));
  }
  for (int n = i; n <= k - 1; ++n) {
    const double a = ni - upper[static_cast<std::size_t>(n)];
    const double b = ni - lower[static_cast<std::size_t>(n - 1)];
    acc += std::log1p(-g / (a + theta * (n - i + 1)));
    acc += std::log1p(g / (b + theta * (n - i) + 1));
  }
  return acc;
}

}  // namespace rates

}  // namespace jackflow
