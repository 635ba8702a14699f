#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace coughsel::testing {

// Step-by-step evaluation of the entropy weights and TOPSIS closeness written
// with nested vectors and explicit loops, sharing no code with the library.
inline std::vector<double> oracle_closeness(const std::vector<std::vector<double>>& x, const std::vector<bool>& benefit) {
  const std::size_t m = x.size(), n = x[0].size();
  std::vector<double> e(n), w(n);
  for (std::size_t j = 0; j < n; ++j) {
    double lo = x[0][j], hi = x[0][j];
    for (std::size_t i = 1; i < m; ++i) {
      lo = std::min(lo, x[i][j]);
      hi = std::max(hi, x[i][j]);
    }
    std::vector<double> s(m);
    double sum = 0;
    for (std::size_t i = 0; i < m; ++i) sum += s[i] = (x[i][j] - lo) / (hi - lo);
    double h = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double p = s[i] / sum;
      if (p != 0) h -= p * std::log(p);
    }
    e[j] = h / std::log(double(m));
  }
  double d = 0;
  for (std::size_t j = 0; j < n; ++j) d += 1 - e[j];
  for (std::size_t j = 0; j < n; ++j) w[j] = (1 - e[j]) / d;

  std::vector<std::vector<double>> v(m, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    double ss = 0;
    for (std::size_t i = 0; i < m; ++i) ss += x[i][j] * x[i][j];
    for (std::size_t i = 0; i < m; ++i) v[i][j] = w[j] * x[i][j] / std::sqrt(ss);
  }
  std::vector<double> best(n), worst(n);
  for (std::size_t j = 0; j < n; ++j) {
    double lo = v[0][j], hi = v[0][j];
    for (std::size_t i = 1; i < m; ++i) {
      lo = std::min(lo, v[i][j]);
      hi = std::max(hi, v[i][j]);
    }
    best[j] = benefit[j] ? hi : lo;
    worst[j] = benefit[j] ? lo : hi;
  }
  std::vector<double> c(m);
  for (std::size_t i = 0; i < m; ++i) {
    double sp = 0, sm = 0;
    for (std::size_t j = 0; j < n; ++j) {
      sp += (v[i][j] - best[j]) * (v[i][j] - best[j]);
      sm += (v[i][j] - worst[j]) * (v[i][j] - worst[j]);
    }
    c[i] = std::sqrt(sm) / (std::sqrt(sp) + std::sqrt(sm));
  }
  return c;
}

}  // namespace coughsel::testing
