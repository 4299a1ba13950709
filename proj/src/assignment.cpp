#include "mtdist/assignment.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mtd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exhaustive search over partial matchings, feasible because both sides
// have at most six items. Costs are nonnegative in every call site, which
// makes prefix-cost pruning sound.
Assignment solve_exhaustive(int na, int nb,
                            const std::function<double(int, int)>& pair_cost,
                            const std::vector<double>& drop_a,
                            const std::vector<double>& drop_b) {
  Assignment best;
  best.cost = kInf;
  std::vector<std::pair<int, int>> cur;
  cur.reserve(na);

  // Cost of dropping every second-set item from j onward that is unused;
  // cheaper to finish with a precomputed tail than to rescan the mask.
  auto finish = [&](std::uint32_t used, double acc) {
    for (int j = 0; j < nb; ++j)
      if (!(used >> j & 1u)) acc += drop_b[j];
    if (acc < best.cost) {
      best.cost = acc;
      best.matches = cur;
    }
  };

  auto rec = [&](auto&& self, int a, std::uint32_t used, double acc) -> void {
    if (acc >= best.cost) return;
    if (a == na) {
      finish(used, acc);
      return;
    }
    for (int j = 0; j < nb; ++j) {
      if (used >> j & 1u) continue;
      cur.emplace_back(a, j);
      self(self, a + 1, used | (1u << j), acc + pair_cost(a, j));
      cur.pop_back();
    }
    self(self, a + 1, used, acc + drop_a[a]);
  };
  rec(rec, 0, 0u, 0.0);
  return best;
}

// Textbook potential-based Hungarian solve on a square matrix; returns the
// row matched to each column. Deterministic for a fixed matrix.
std::vector<int> hungarian(const std::vector<std::vector<double>>& c) {
  const int n = static_cast<int>(c.size());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_of_col(n, -1);
  for (int j = 1; j <= n; ++j) row_of_col[j - 1] = p[j] - 1;
  return row_of_col;
}

// Square embedding: real rows/columns first, then one drop slot per item
// on the opposite side. Drop slots are interchangeable, so the matrix
// stays fully finite and no large sentinel costs are needed.
Assignment solve_hungarian(int na, int nb,
                           const std::function<double(int, int)>& pair_cost,
                           const std::vector<double>& drop_a,
                           const std::vector<double>& drop_b) {
  const int n = na + nb;
  std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) c[i][j] = pair_cost(i, j);
    for (int j = nb; j < n; ++j) c[i][j] = drop_a[i];
  }
  for (int i = na; i < n; ++i)
    for (int j = 0; j < nb; ++j) c[i][j] = drop_b[j];

  const std::vector<int> row_of_col = hungarian(c);
  Assignment out;
  std::vector<char> a_matched(na, 0);
  for (int j = 0; j < nb; ++j) {
    const int i = row_of_col[j];
    if (i < na) {
      out.matches.emplace_back(i, j);
      out.cost += c[i][j];
      a_matched[i] = 1;
    } else {
      out.cost += drop_b[j];
    }
  }
  for (int i = 0; i < na; ++i)
    if (!a_matched[i]) out.cost += drop_a[i];
  std::sort(out.matches.begin(), out.matches.end());
  return out;
}

}  // namespace

Assignment solve_assignment(int na, int nb,
                            const std::function<double(int, int)>& pair_cost,
                            const std::vector<double>& drop_a,
                            const std::vector<double>& drop_b) {
  if (static_cast<int>(drop_a.size()) != na || static_cast<int>(drop_b.size()) != nb)
    throw std::invalid_argument("solve_assignment: drop cost sizes disagree with item counts");
  if (na == 0 || nb == 0) {
    Assignment out;
    for (double d : drop_a) out.cost += d;
    for (double d : drop_b) out.cost += d;
    return out;
  }
  if (na <= 6 && nb <= 6) return solve_exhaustive(na, nb, pair_cost, drop_a, drop_b);
  return solve_hungarian(na, nb, pair_cost, drop_a, drop_b);
}

}  // namespace mtd
