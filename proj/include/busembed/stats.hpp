#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace busembed {

// Average ranks with ties.
inline std::vector<double> ranks_of(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    double avg = (double(i) + double(j)) / 2.0 + 1.0;
    for (size_t t = i; t <= j; ++t) r[idx[t]] = avg;
    i = j + 1;
  }
  return r;
}

inline double pearson(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0;
  return sxy / std::sqrt(sxx * syy);
}

inline double spearman_rho(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("spearman needs matched series, n >= 3");
  return pearson(ranks_of(x), ranks_of(y));
}

namespace detail {

// Regularized incomplete beta by Lentz's continued fraction.
inline double betacf(double a, double b, double x) {
  const int kMaxIter = 200;
  const double eps = 3e-14, fpmin = 1e-300;
  double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1, d = 1 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1) < eps) break;
  }
  return h;
}

inline double betai(double a, double b, double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double ln = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
              a * std::log(x) + b * std::log(1 - x);
  double bt = std::exp(ln);
  if (x < (a + 1) / (a + b + 2)) return bt * betacf(a, b, x) / a;
  return 1 - bt * betacf(b, a, 1 - x) / b;
}

}  // namespace detail

// P(T <= t) for Student's t with nu degrees of freedom.
inline double student_t_cdf(double t, double nu) {
  double x = nu / (nu + t * t);
  double p = 0.5 * detail::betai(nu / 2.0, 0.5, x);
  return t > 0 ? 1 - p : p;
}

// One-sided p-value for a negative rank correlation (H1: rho < 0) via the
// t approximation.
inline double spearman_negative_p(double rho, size_t n) {
  if (n < 4) throw std::invalid_argument("need n >= 4");
  double df = double(n) - 2;
  double denom = 1 - rho * rho;
  if (denom <= 0) return rho < 0 ? 0.0 : 1.0;
  double t = rho * std::sqrt(df / denom);
  return student_t_cdf(t, df);
}

}  // namespace busembed
