#pragma once

// Reference implementations used only by the tests. They share no code with
// the library so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

// Fraction of observations <= t, by direct counting.
inline double ecdf(const std::vector<double>& v, double t) {
  return static_cast<double>(std::count_if(v.begin(), v.end(), [&](double x) { return x <= t; })) /
         static_cast<double>(v.size());
}

inline std::vector<double> pooled(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> p(x);
  p.insert(p.end(), y.begin(), y.end());
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

inline double ks(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0.0;
  for (double t : pooled(x, y)) d = std::max(d, std::abs(ecdf(x, t) - ecdf(y, t)));
  return d;
}

inline double dminus(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0.0;
  for (double t : pooled(x, y)) d = std::max(d, ecdf(y, t) - ecdf(x, t));
  return d;
}

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// Exact null tail P(D- >= k/n) for two tie-free samples of equal size n
// (reflection principle for the two-sample one-sided statistic).
inline double exact_one_sided_tail(int n, int k) {
  if (k <= 0) return 1.0;
  return binom(2 * n, n - k) / binom(2 * n, n);
}

// Shoelace area of the triangle with vertices (x_i, y_i).
inline double shoelace(double x1, double y1, double x2, double y2, double x3, double y3) {
  return 0.5 * std::abs(x1 * (y2 - y3) - x2 * (y1 - y3) + x3 * (y1 - y2));
}

// Squared k-volume from pairwise squared distances via the Cayley-Menger
// determinant, evaluated with long double Gaussian elimination.
inline long double cayley_menger_sq_volume(const std::vector<std::vector<double>>& pts) {
  const int m = static_cast<int>(pts.size());  // k + 1 points
  const int k = m - 1;
  const int sz = m + 1;
  std::vector<std::vector<long double>> a(sz, std::vector<long double>(sz, 0.0L));
  for (int i = 1; i < sz; ++i) a[0][i] = a[i][0] = 1.0L;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      long double s = 0.0L;
      for (std::size_t c = 0; c < pts[i].size(); ++c) {
        const long double diff = static_cast<long double>(pts[i][c]) - pts[j][c];
        s += diff * diff;
      }
      a[i + 1][j + 1] = s;
    }
  }
  long double det = 1.0L;
  for (int c = 0; c < sz; ++c) {
    int piv = c;
    for (int r = c + 1; r < sz; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0L) return 0.0L;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < sz; ++r) {
      const long double f = a[r][c] / a[c][c];
      for (int cc = c; cc < sz; ++cc) a[r][cc] -= f * a[c][cc];
    }
  }
  long double fact = 1.0L;
  for (int i = 2; i <= k; ++i) fact *= i;
  const long double sign = (k % 2 == 0) ? -1.0L : 1.0L;  // (-1)^(k+1)
  return sign * det / (std::pow(2.0L, k) * fact * fact);
}

}  // namespace oracle
