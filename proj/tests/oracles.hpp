#pragma once

// Brute-force reference computations for the test suites. Nothing here calls
// into the library's numerical routines.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

/// Gaussian elimination with partial pivoting, long double.
inline std::vector<long double> solve(std::vector<std::vector<long double>> a, std::vector<long double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<long double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Mean squared residual of a degree-`order` polynomial least-squares fit,
/// via explicit Vandermonde normal equations on abscissa i/a, i = 1..a.
inline double normal_equations_variance(const std::vector<double>& y, int order) {
  const std::size_t a = y.size();
  const std::size_t m = static_cast<std::size_t>(order) + 1;
  std::vector<std::vector<long double>> xtx(m, std::vector<long double>(m, 0.0L));
  std::vector<long double> xty(m, 0.0L);
  for (std::size_t i = 0; i < a; ++i) {
    const long double x = static_cast<long double>(i + 1) / static_cast<long double>(a);
    std::vector<long double> row(m);
    long double p = 1.0L;
    for (std::size_t k = 0; k < m; ++k, p *= x) row[k] = p;
    for (std::size_t r = 0; r < m; ++r) {
      xty[r] += row[r] * y[i];
      for (std::size_t c = 0; c < m; ++c) xtx[r][c] += row[r] * row[c];
    }
  }
  const auto coef = solve(xtx, xty);
  long double ss = 0.0L;
  for (std::size_t i = 0; i < a; ++i) {
    const long double x = static_cast<long double>(i + 1) / static_cast<long double>(a);
    long double fit = 0.0L, p = 1.0L;
    for (std::size_t k = 0; k < m; ++k, p *= x) fit += coef[k] * p;
    const long double r = y[i] - fit;
    ss += r * r;
  }
  return static_cast<double>(ss / static_cast<long double>(a));
}

/// Plain DFA (q = 2) with segments taken from both ends of the profile
/// Y(1..M), order-`order` detrending by normal equations. Returns the slope of
/// ln F2 against ln a.
inline double dfa_hurst(const std::vector<double>& x, const std::vector<std::size_t>& scales, int order) {
  const std::size_t n = x.size();
  long double mean = 0.0L;
  for (double v : x) mean += v;
  mean /= static_cast<long double>(n);
  std::vector<double> y(n);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i] - mean;
    y[i] = static_cast<double>(acc);
  }
  std::vector<double> lx, ly;
  for (std::size_t a : scales) {
    const std::size_t segs = n / a;
    long double total = 0.0L;
    for (std::size_t s = 0; s < segs; ++s) {
      std::vector<double> fwd(y.begin() + s * a, y.begin() + (s + 1) * a);
      std::vector<double> bwd(y.end() - (s + 1) * a, y.end() - s * a);
      total += normal_equations_variance(fwd, order) + normal_equations_variance(bwd, order);
    }
    lx.push_back(std::log(static_cast<double>(a)));
    ly.push_back(0.5 * std::log(static_cast<double>(total / (2.0L * segs))));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= ly.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

/// O(n^2) discrete Fourier transform.
inline std::vector<std::complex<double>> dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> s = 0.0L;
    for (std::size_t t = 0; t < n; ++t) {
      const long double ang = -2.0L * std::numbers::pi_v<long double> *
                              static_cast<long double>((k * t) % n) / static_cast<long double>(n);
      s += static_cast<long double>(x[t]) * std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    out[k] = {static_cast<double>(s.real()), static_cast<double>(s.imag())};
  }
  return out;
}

/// Circular autocovariance (1/n) sum (x_t - m)(x_{t+lag mod n} - m).
inline double circular_autocovariance(const std::vector<double>& x, std::size_t lag) {
  const std::size_t n = x.size();
  long double m = 0.0L;
  for (double v : x) m += v;
  m /= static_cast<long double>(n);
  long double s = 0.0L;
  for (std::size_t t = 0; t < n; ++t) s += (x[t] - m) * (x[(t + lag) % n] - m);
  return static_cast<double>(s / static_cast<long double>(n));
}

/// Legendre transform of the binomial-cascade mass exponent
/// tau(q) = -log2(w^q + (1-w)^q), by its closed-form derivative.
inline std::pair<double, double> cascade_alpha_f(double w, double q) {
  const double a = std::pow(w, q), b = std::pow(1.0 - w, q);
  const double tau = -std::log2(a + b);
  const double alpha = -(a * std::log(w) + b * std::log(1.0 - w)) / ((a + b) * std::numbers::ln2);
  return {alpha, q * alpha - tau};
}

}  // namespace oracle
