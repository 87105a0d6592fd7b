#include "jackflow/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace jackflow {

Partition::Partition(std::vector<int> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i] < 0) throw std::invalid_argument("partition rows must be nonnegative");
    if (i + 1 < rows_.size() && rows_[i] < rows_[i + 1])
      throw std::invalid_argument("partition rows must be non-increasing");
  }
  while (!rows_.empty() && rows_.back() == 0) rows_.pop_back();
}

int Partition::size() const noexcept { return std::accumulate(rows_.begin(), rows_.end(), 0); }

int Partition::column(int j) const noexcept {
  if (j < 1) return 0;
  int count = 0;
  for (int r : rows_) {
    if (r < j) break;
    ++count;
  }
  return count;
}

Partition Partition::transpose() const {
  std::vector<int> cols;
  const int width = rows_.empty() ? 0 : rows_.front();
  cols.reserve(static_cast<std::size_t>(width));
  for (int j = 1; j <= width; ++j) cols.push_back(column(j));
  return Partition(std::move(cols));
}

Partition Partition::with_box(std::size_t i) const {
  if (i < 1 || i > rows_.size() + 1)
    throw CellError("cannot add a box at row " + std::to_string(i));
  if (i > 1 && row(i - 1) == row(i))
    throw CellError("row " + std::to_string(i) + " is not addable");
  Partition out = *this;
  if (i == rows_.size() + 1)
    out.rows_.push_back(1);
  else
    ++out.rows_[i - 1];
  return out;
}

std::vector<int> Partition::padded(std::size_t n) const {
  std::vector<int> out = rows_;
  out.resize(std::max(n, rows_.size()), 0);
  return out;
}

bool contains(const Partition& lambda, Cell c) noexcept {
  return c.row >= 1 && c.col >= 1 && lambda.row(static_cast<std::size_t>(c.row)) >= c.col;
}

ArmLeg arm_leg(const Partition& lambda, Cell c) {
  if (!contains(lambda, c))
    throw CellError("cell (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                    ") is not in the diagram");
  return {lambda.row(static_cast<std::size_t>(c.row)) - c.col, lambda.column(c.col) - c.row,
          c.col - 1, c.row - 1};
}

std::vector<Cell> addable_cells(const Partition& lambda, int max_rows) {
  std::vector<Cell> out;
  const int limit = std::min<int>(max_rows, static_cast<int>(lambda.length()) + 1);
  for (int i = 1; i <= limit; ++i) {
    const auto r = static_cast<std::size_t>(i);
    if (i == 1 || lambda.row(r - 1) > lambda.row(r)) out.push_back({i, lambda.row(r) + 1});
  }
  return out;
}

bool interlaces(const Partition& mu, const Partition& lambda) noexcept {
  const std::size_t n = std::max(mu.length(), lambda.length()) + 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (mu.row(i) > lambda.row(i) || mu.row(i) < lambda.row(i + 1)) return false;
  }
  return true;
}

InterlacingArray::InterlacingArray(std::vector<Partition> levels) : levels_(std::move(levels)) {
  if (!valid()) throw std::invalid_argument("levels do not form an interlacing array");
}

InterlacingArray InterlacingArray::empty(int n) {
  InterlacingArray a;
  a.levels_.assign(static_cast<std::size_t>(std::max(n, 0)), Partition{});
  return a;
}

bool InterlacingArray::valid() const noexcept {
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (levels_[k].length() > k + 1) return false;
    if (k > 0 && !interlaces(levels_[k - 1], levels_[k])) return false;
  }
  return true;
}

void InterlacingArray::add_box_unchecked(int k, int i) {
  auto rows = levels_[static_cast<std::size_t>(k - 1)].padded(static_cast<std::size_t>(i));
  ++rows[static_cast<std::size_t>(i - 1)];
  levels_[static_cast<std::size_t>(k - 1)] = Partition(std::move(rows));
}

bool WeylPoint::valid(double tol) const noexcept {
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!std::isfinite(coords[i])) return false;
    if (i > 0 && coords[i] < coords[i - 1] - tol) return false;
  }
  return true;
}

std::size_t ConePoint::dimension() const noexcept {
  std::size_t n = 0;
  for (const auto& l : levels) n += l.size();
  return n;
}

bool ConePoint::valid(double tol) const noexcept {
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto& cur = levels[k];
    if (cur.size() != k + 1) return false;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (!std::isfinite(cur[i])) return false;
      if (i > 0 && cur[i] < cur[i - 1] - tol) return false;
    }
    if (k == 0) continue;
    const auto& below = levels[k - 1];
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (i > 0 && cur[i] < below[i - 1] - tol) return false;
      if (i < below.size() && cur[i] > below[i] + tol) return false;
    }
  }
  return true;
}

bool ConePoint::interior() const noexcept {
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto& cur = levels[k];
    if (cur.size() != k + 1) return false;
    for (std::size_t i = 1; i < cur.size(); ++i)
      if (!(cur[i] > cur[i - 1])) return false;
    if (k == 0) continue;
    const auto& below = levels[k - 1];
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (i > 0 && !(cur[i] > below[i - 1])) return false;
      if (i < below.size() && !(cur[i] < below[i])) return false;
    }
  }
  return true;
}

std::vector<double> ConePoint::flatten() const {
  std::vector<double> out;
  out.reserve(dimension());
  for (const auto& l : levels) out.insert(out.end(), l.begin(), l.end());
  return out;
}

ConePoint ConePoint::unflatten(int depth, const std::vector<double>& flat) {
  ConePoint p;
  std::size_t pos = 0;
  for (int k = 1; k <= depth; ++k) {
    if (pos + static_cast<std::size_t>(k) > flat.size())
      throw std::invalid_argument("flat vector too short for cone depth");
    p.levels.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                          flat.begin() + static_cast<std::ptrdiff_t>(pos + k));
    pos += static_cast<std::size_t>(k);
  }
  return p;
}

ScalingParams::ScalingParams(double eps, double t, double th) : epsilon(eps), time(t), theta(th) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  if (!(th > 0.0)) throw std::invalid_argument("theta must be positive");
}

std::vector<double> rescale_level(const Partition& lambda, const ScalingParams& p, int level) {
  if (level < static_cast<int>(lambda.length()))
    throw std::invalid_argument("partition has more rows than the level");
  const double scale = std::sqrt(p.epsilon);
  const double shift = p.shift();
  std::vector<double> y(static_cast<std::size_t>(level));
  for (int i = 1; i <= level; ++i)
    y[static_cast<std::size_t>(i - 1)] =
        scale * (static_cast<double>(lambda.row(static_cast<std::size_t>(level + 1 - i))) - shift);
  return y;
}

ConePoint rescale_array(const InterlacingArray& arr, const ScalingParams& p) {
  ConePoint out;
  for (int k = 1; k <= arr.depth(); ++k) out.levels.push_back(rescale_level(arr.level(k), p, k));
  return out;
}

namespace {

std::vector<int> parse_rows(std::string_view text) {
  std::vector<int> rows;
  if (text.empty()) return rows;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find(',', pos), text.size());
    const std::string token(text.substr(pos, next - pos));
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad partition entry '" + token + "'");
    }
    if (used != token.size()) throw std::invalid_argument("bad partition entry '" + token + "'");
    rows.push_back(value);
    pos = next + 1;
  }
  return rows;
}

}  // namespace

Partition parse_partition(std::string_view text) { return Partition(parse_rows(text)); }

std::string format_partition(const Partition& lambda) {
  std::ostringstream os;
  for (std::size_t i = 0; i < lambda.length(); ++i) {
    if (i) os << ',';
    os << lambda.rows()[i];
  }
  return os.str();
}

InterlacingArray parse_array(std::string_view text) {
  std::vector<Partition> levels;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find(';', pos), text.size());
    levels.push_back(parse_partition(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  return InterlacingArray(std::move(levels));
}

std::string format_array(const InterlacingArray& arr) {
  std::ostringstream os;
  for (int k = 1; k <= arr.depth(); ++k) {
    if (k > 1) os << ';';
    const auto rows = arr.level(k).padded(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < rows.size(); ++i) os << (i ? "," : "") << rows[i];
  }
  return os.str();
}

namespace {

void partitions_rec(int remaining, int max_part, int rows_left, std::vector<int>& cur,
                    std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(cur);
    return;
  }
  if (rows_left == 0) return;
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    cur.push_back(part);
    partitions_rec(remaining - part, part, rows_left - 1, cur, out);
    cur.pop_back();
  }
}

void predecessors_rec(const std::vector<int>& lam, std::size_t i, std::vector<int>& cur,
                      std::vector<Partition>& out) {
  if (i == lam.size()) {
    out.emplace_back(cur);
    return;
  }
  const int hi = lam[i];
  const int lo = i + 1 < lam.size() ? lam[i + 1] : 0;
  for (int v = hi; v >= lo; --v) {
    cur.push_back(v);
    predecessors_rec(lam, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions_of(int m, int max_rows) {
  std::vector<Partition> out;
  std::vector<int> cur;
  if (m < 0 || max_rows < 0) return out;
  partitions_rec(m, m, max_rows, cur, out);
  return out;
}

std::vector<Partition> interlacing_predecessors(const Partition& lambda) {
  std::vector<Partition> out;
  std::vector<int> cur;
  predecessors_rec(lambda.rows(), 0, cur, out);
  return out;
}

}  // namespace jackflow
