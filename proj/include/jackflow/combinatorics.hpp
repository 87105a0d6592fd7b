#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jackflow {

/// Thrown when a cell is not a box of the given diagram (or not addable to it).
class CellError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A Young diagram: non-increasing row lengths, trailing zeros trimmed.
class Partition {
 public:
  Partition() = default;
  /// Validates monotonicity and nonnegativity, then trims trailing zeros.
  explicit Partition(std::vector<int> rows);
  Partition(std::initializer_list<int> rows) : Partition(std::vector<int>(rows)) {}

  /// Row i, 1-based; zero beyond the length.
  int row(std::size_t i) const noexcept { return i >= 1 && i <= rows_.size() ? rows_[i - 1] : 0; }
  const std::vector<int>& rows() const noexcept { return rows_; }
  std::size_t length() const noexcept { return rows_.size(); }
  int size() const noexcept;
  bool empty() const noexcept { return rows_.empty(); }

  /// Length of column j (1-based), i.e. λ'_j.
  int column(int j) const noexcept;
  Partition transpose() const;

  /// Returns the diagram with one box added at the end of row i (1-based).
  /// Throws CellError if the result is not a partition.
  Partition with_box(std::size_t i) const;

  /// Rows padded with zeros to exactly n entries (n ≥ length()).
  std::vector<int> padded(std::size_t n) const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition&, const Partition&) = default;

 private:
  std::vector<int> rows_;
};

struct Cell {
  int row = 1;
  int col = 1;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct ArmLeg {
  int arm = 0;
  int leg = 0;
  int coarm = 0;
  int coleg = 0;
  friend bool operator==(const ArmLeg&, const ArmLeg&) = default;
};

bool contains(const Partition& lambda, Cell c) noexcept;

/// a(i,j) = λ_i − j, l(i,j) = λ'_j − i, a' = j − 1, l' = i − 1.
ArmLeg arm_leg(const Partition& lambda, Cell c);

/// Cells (i, λ_i + 1) whose addition keeps a partition with at most max_rows rows.
std::vector<Cell> addable_cells(const Partition& lambda, int max_rows);

/// μ ≺ λ: λ_i ≥ μ_i ≥ λ_{i+1} for all i.
bool interlaces(const Partition& mu, const Partition& lambda) noexcept;

/// Discrete Gelfand–Tsetlin array λ¹ ≺ λ² ≺ … ≺ λᴺ with ℓ(λᵏ) ≤ k.
class InterlacingArray {
 public:
  InterlacingArray() = default;
  /// Throws std::invalid_argument if the levels do not form a valid array.
  explicit InterlacingArray(std::vector<Partition> levels);
  /// The all-empty array with n levels.
  static InterlacingArray empty(int n);

  int depth() const noexcept { return static_cast<int>(levels_.size()); }
  /// Level k, 1-based.
  const Partition& level(int k) const { return levels_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<Partition>& levels() const noexcept { return levels_; }
  bool valid() const noexcept;

  /// Adds a box at (level k, row i) without validation; used by the simulators.
  void add_box_unchecked(int k, int i);

  friend bool operator==(const InterlacingArray&, const InterlacingArray&) = default;

 private:
  std::vector<Partition> levels_;
};

/// Nondecreasing real coordinates y_1 ≤ … ≤ y_N.
struct WeylPoint {
  std::vector<double> coords;
  bool valid(double tol = 0.0) const noexcept;
};

/// Real Gelfand–Tsetlin array; levels[k-1] holds y^k_1 ≤ … ≤ y^k_k.
struct ConePoint {
  std::vector<std::vector<double>> levels;

  int depth() const noexcept { return static_cast<int>(levels.size()); }
  std::size_t dimension() const noexcept;
  /// y^{k-1}_{i-1} - tol ≤ y^k_i ≤ y^{k-1}_i + tol for all (k, i); each level sorted.
  bool valid(double tol = 0.0) const noexcept;
  /// Strict interior (all adjacent-level and same-level gaps positive).
  bool interior() const noexcept;
  std::vector<double> flatten() const;
  static ConePoint unflatten(int depth, const std::vector<double>& flat);
};

struct ScalingParams {
  double epsilon = 1.0;
  double time = 0.0;
  double theta = 1.0;

  ScalingParams(double eps, double t, double th);
  /// Chain time s = ε⁻¹ t / θ.
  double chain_time() const noexcept { return time / (epsilon * theta); }
  /// Deterministic shift ε⁻¹ t.
  double shift() const noexcept { return time / epsilon; }
};

/// y_i = ε^{1/2} (λ_{level+1-i} − ε⁻¹ t), i = 1..level (nondecreasing).
std::vector<double> rescale_level(const Partition& lambda, const ScalingParams& p, int level);
ConePoint rescale_array(const InterlacingArray& arr, const ScalingParams& p);

/// "3,1,1" ↔ Partition. "" and "0" both denote ∅.
Partition parse_partition(std::string_view text);
std::string format_partition(const Partition& lambda);
/// "1;2,0;2,1,0" ↔ InterlacingArray (levels padded to their index on output).
InterlacingArray parse_array(std::string_view text);
std::string format_array(const InterlacingArray& arr);

/// All partitions of m with at most max_rows rows, in reverse lexicographic order.
std::vector<Partition> partitions_of(int m, int max_rows);
/// All μ with μ ≺ λ (ℓ(μ) ≤ ℓ(λ)).
std::vector<Partition> interlacing_predecessors(const Partition& lambda);

}  // namespace jackflow
