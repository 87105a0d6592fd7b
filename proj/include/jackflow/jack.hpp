#pragma once

#include <span>
#include <variant>

#include "jackflow/combinatorics.hpp"
#include "jackflow/log_value.hpp"
#include "jackflow/theta.hpp"

namespace jackflow {

/// Principal specialization 1^N (all N alpha-parameters equal to one).
struct PrincipalOnes {
  int n = 1;
};
/// Plancherel specialization 𝔯_s (gamma = s, all other parameters zero).
struct PlancherelGamma {
  double s = 0.0;
};
using Specialization = std::variant<PrincipalOnes, PlancherelGamma>;

/// J_λ(1^N); zero when ℓ(λ) > N.
LogValue jack_principal(const Partition& lambda, int n, Theta theta);
/// J_λ(𝔯_s) = (sθ)^{|λ|} ∏ 1/(a + θl + θ).
LogValue jack_plancherel(const Partition& lambda, double s, Theta theta);
LogValue jack_evaluate(const Partition& lambda, const Specialization& rho, Theta theta);

/// J̃_λ / J_λ = ∏ (a + θl + θ)/(a + θl + 1).
LogValue dual_factor(const Partition& lambda, Theta theta);

/// Branching coefficient ψ_{ν/μ} = J_{ν/μ}(1), evaluated from the Pochhammer product.
/// Zero unless μ ≺ ν.
LogValue psi(const Partition& nu, const Partition& mu, Theta theta);

/// J̃_{(λ⊔c)/λ}(𝔯_1) for an addable cell c, arms measured in λ.
LogValue single_box_dual_skew(const Partition& lambda, Cell c, Theta theta);

/// Jump rate λ → λ⊔c of the one-level chain on Y^N. Zero if c is not addable
/// or the result has more than N rows. Uses the telescoped closed form.
double single_level_rate(const Partition& lambda, Cell c, int n, Theta theta);
/// Same rate via J_μ(1^N)/J_λ(1^N) · J̃_{μ/λ}(𝔯_1).
double single_level_rate_product(const Partition& lambda, Cell c, int n, Theta theta);

/// Rate of adding c to λᵏ given λ^{k-1} (level = k). Returns exactly 0 for
/// non-addable or blocked cells. Throws if λ^{k-1} ⊀ λᵏ.
double multilevel_rate(const Partition& lambda_k, const Partition& lambda_below, Cell c, int level,
                       Theta theta);
/// Same rate via J̃ · ψ_{(λᵏ⊔c)/λ^{k-1}} / ψ_{λᵏ/λ^{k-1}}.
double multilevel_rate_product(const Partition& lambda_k, const Partition& lambda_below, Cell c,
                               int level, Theta theta);

/// 𝒥_{1^N;𝔯_s}(λ).
LogValue jack_measure_log(const Partition& lambda, int n, double s, Theta theta);

/// P(λ¹,…,λ^{N-1} | λᴺ) for a Jack–Gibbs distribution. Zero for invalid arrays.
LogValue jack_gibbs_weight(const InterlacingArray& arr, Theta theta);

/// H_θ(1^N; 𝔯_s) = exp(θ N s).
LogValue h_norm(int n, double s, Theta theta);

namespace rates {

// Allocation-free kernels on padded row arrays; rows[r-1] = λ_r.

/// One-level rate at row i; rows has exactly N entries.
double single(std::span<const int> rows, int i, double theta) noexcept;
/// log(q/θ) at row i, accumulated with log1p; -inf if the rate vanishes.
double single_log_excess(std::span<const int> rows, int i, double theta) noexcept;

/// Multilevel own rate at (level k, row i); upper has k entries, lower k-1.
double multi(std::span<const int> upper, std::span<const int> lower, int i, double theta) noexcept;
double multi_log_excess(std::span<const int> upper, std::span<const int> lower, int i,
                        double theta) noexcept;

}  // namespace rates

}  // namespace jackflow
