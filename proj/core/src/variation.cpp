#include "fbmarea/variation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fbmarea/errors.hpp"

namespace fbmarea {
namespace {

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw DomainError("variation exponent p must satisfy 1 <= p < inf");
  }
}

Partition full_partition(std::size_t n) {
  Partition part;
  part.indices.resize(n);
  for (std::size_t i = 0; i < n; ++i) part.indices[i] = i;
  return part;
}

// Interior subsets of {1..n-2} encoded as bit masks.
Partition partition_from_mask(std::size_t n, std::uint64_t mask) {
  Partition part;
  part.indices.push_back(0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (mask & (std::uint64_t{1} << (i - 1))) part.indices.push_back(i);
  }
  part.indices.push_back(n - 1);
  return part;
}

double power_sum(const Partition& rows, const Partition& cols, const RectIncrement& inc,
                 double p) {
  double s = 0.0;
  for (std::size_t a = 1; a < rows.indices.size(); ++a) {
    for (std::size_t b = 1; b < cols.indices.size(); ++b) {
      s += std::pow(std::fabs(inc(rows.indices[a - 1], rows.indices[a], cols.indices[b - 1],
                                  cols.indices[b])),
                    p);
    }
  }
  return s;
}

}  // namespace

double best_partition_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& cost,
                          Partition* argmax) {
  if (n == 0) throw DomainError("empty grid");
  if (n == 1) {
    if (argmax) argmax->indices = {0};
    return 0.0;
  }
  std::vector<double> best(n, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> prev(n, 0);
  best[0] = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const double candidate = best[i] + cost(i, j);
      if (candidate > best[j]) {
        best[j] = candidate;
        prev[j] = i;
      }
    }
  }
  if (argmax) {
    std::vector<std::size_t> rev;
    for (std::size_t k = n - 1;; k = prev[k]) {
      rev.push_back(k);
      if (k == 0) break;
    }
    argmax->indices.assign(rev.rbegin(), rev.rend());
  }
  return best[n - 1];
}

PVarResult pvar_exact(std::span<const double> values, double p) {
  check_p(p);
  if (values.empty()) throw DomainError("empty path");
  PVarResult out;
  const double s = best_partition_sum(
      values.size(),
      [&](std::size_t i, std::size_t j) { return std::pow(std::fabs(values[j] - values[i]), p); },
      &out.partition);
  out.value = std::pow(s, 1.0 / p);
  return out;
}

PVarResult pvar_exact(const GridPath& path, double p) {
  check_p(p);
  if (path.dim() == 1) return pvar_exact(path.component(0), p);
  PVarResult out;
  const double s = best_partition_sum(
      path.size(),
      [&](std::size_t i, std::size_t j) {
        double sq = 0.0;
        for (std::size_t c = 0; c < path.dim(); ++c) {
          const double d = path.value(c, j) - path.value(c, i);
          sq += d * d;
        }
        return std::pow(sq, 0.5 * p);
      },
      &out.partition);
  out.value = std::pow(s, 1.0 / p);
  return out;
}

double pvar_bruteforce(std::span<const double> values, double p) {
  check_p(p);
  const std::size_t n = values.size();
  if (n == 0) throw DomainError("empty path");
  if (n > kBruteforceMaxPoints) {
    throw SizeError("brute-force p-variation limited to " + std::to_string(kBruteforceMaxPoints) +
                    " points, got " + std::to_string(n));
  }
  if (n == 1) return 0.0;
  std::vector<double> cost(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      cost[i * n + j] = std::pow(std::fabs(values[j] - values[i]), p);
    }
  }
  const std::uint64_t masks = std::uint64_t{1} << (n - 2);
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    double s = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (mask & (std::uint64_t{1} << (i - 1))) {
        s += cost[last * n + i];
        last = i;
      }
    }
    s += cost[last * n + (n - 1)];
    if (s > best) best = s;
  }
  return std::pow(best, 1.0 / p);
}

PVar2DResult pvar2d(std::size_t n_rows, std::size_t n_cols, const RectIncrement& increment,
                    double p, Variation2DMode mode) {
  check_p(p);
  if (n_rows < 2 || n_cols < 2) throw DomainError("2D variation needs at least 2x2 grid points");
  PVar2DResult out;
  out.mode = mode;

  switch (mode) {
    case Variation2DMode::grid_only: {
      out.rows = full_partition(n_rows);
      out.cols = full_partition(n_cols);
      out.value = std::pow(power_sum(out.rows, out.cols, increment, p), 1.0 / p);
      return out;
    }
    case Variation2DMode::exact: {
      if (n_rows > kExact2DMaxPoints || n_cols > kExact2DMaxPoints) {
        throw SizeError("exact 2D variation limited to " + std::to_string(kExact2DMaxPoints) +
                        " points per axis");
      }
      const std::uint64_t row_masks = std::uint64_t{1} << (n_rows - 2);
      const std::uint64_t col_masks = std::uint64_t{1} << (n_cols - 2);
      std::vector<Partition> col_parts;
      col_parts.reserve(col_masks);
      for (std::uint64_t cm = 0; cm < col_masks; ++cm) {
        col_parts.push_back(partition_from_mask(n_cols, cm));
      }
      double best = -1.0;
      for (std::uint64_t rm = 0; rm < row_masks; ++rm) {
        const Partition rows = partition_from_mask(n_rows, rm);
        for (const auto& cols : col_parts) {
          const double s = power_sum(rows, cols, increment, p);
          if (s > best) {
            best = s;
            out.rows = rows;
            out.cols = cols;
          }
        }
      }
      out.value = std::pow(best, 1.0 / p);
      return out;
    }
    case Variation2DMode::heuristic: {
      // With one axis fixed the objective is additive over consecutive
      // breakpoints of the other axis, so each half-step is an exact DP.
      Partition rows = full_partition(n_rows);
      Partition cols = full_partition(n_cols);
      double current = power_sum(rows, cols, increment, p);
      for (int sweep = 0; sweep < 100; ++sweep) {
        Partition new_rows;
        best_partition_sum(
            n_rows,
            [&](std::size_t i0, std::size_t i1) {
              double s = 0.0;
              for (std::size_t b = 1; b < cols.indices.size(); ++b) {
                s += std::pow(std::fabs(increment(i0, i1, cols.indices[b - 1], cols.indices[b])), p);
              }
              return s;
            },
            &new_rows);
        Partition new_cols;
        best_partition_sum(
            n_cols,
            [&](std::size_t j0, std::size_t j1) {
              double s = 0.0;
              for (std::size_t a = 1; a < new_rows.indices.size(); ++a) {
                s += std::pow(
                    std::fabs(increment(new_rows.indices[a - 1], new_rows.indices[a], j0, j1)), p);
              }
              return s;
            },
            &new_cols);
        const double next = power_sum(new_rows, new_cols, increment, p);
        if (!(next > current)) break;
        current = next;
        rows = std::move(new_rows);
        cols = std::move(new_cols);
      }
      out.rows = std::move(rows);
      out.cols = std::move(cols);
      out.value = std::pow(current, 1.0 / p);
      return out;
    }
  }
  throw DomainError("unknown 2D variation mode");
}

PVar2DResult pvar2d(const Eigen::MatrixXd& f, double p, Variation2DMode mode) {
  const auto rows = static_cast<std::size_t>(f.rows());
  const auto cols = static_cast<std::size_t>(f.cols());
  return pvar2d(
      rows, cols,
      [&f](std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) {
        const auto a = static_cast<Eigen::Index>(i0), b = static_cast<Eigen::Index>(i1);
        const auto c = static_cast<Eigen::Index>(j0), d = static_cast<Eigen::Index>(j1);
        return f(b, d) - f(b, c) - f(a, d) + f(a, c);
      },
      p, mode);
}

}  // namespace fbmarea
