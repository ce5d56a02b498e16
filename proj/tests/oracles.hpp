#pragma once

// Independent reference computations for the tests. Nothing here calls the library's
// transforms, quadrature or Bessel code.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Continuous Fourier integral F(k) = (2 pi)^(-1/2) * sum_j a_j exp(-i k x_j) dx.
inline Complex direct_ft(const std::vector<Complex>& a, const std::vector<double>& x, double dx, double k) {
  Complex s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * std::polar(1.0, -k * x[j]);
  return s * dx / std::sqrt(2.0 * kPi);
}

// J1 by its power series, long double.
inline double j1_series(double x) {
  long double term = x / 2.0L;
  long double sum = term;
  const long double q = -(long double)x * x / 4.0L;
  for (int m = 1; m < 200; ++m) {
    term *= q / ((long double)m * (m + 1));
    sum += term;
    if (std::fabs((double)term) < 1e-30) break;
  }
  return (double)sum;
}

inline double bisect(const std::function<double(double)>& g, double lo, double hi, int iters = 200) {
  double glo = g(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Midpoint sum of g over [a, b] with n cells, then one Richardson step against n/2.
inline Complex midpoint_richardson(const std::function<Complex(double)>& g, double a, double b, int n) {
  auto mid = [&](int m) {
    const double h = (b - a) / m;
    Complex s = 0.0;
    for (int i = 0; i < m; ++i) s += g(a + (i + 0.5) * h);
    return s * h;
  };
  const Complex fine = mid(n);
  const Complex coarse = mid(n / 2);
  return (4.0 * fine - coarse) / 3.0;
}

// Integral over the disk |r| <= R of exp(-i a |r|^2) exp(-i b x) d^2r, as a 2-D midpoint sum
// over chords: x = R sin(theta), y = R cos(theta) t. Richardson-extrapolated on both axes.
inline Complex disk_integral_2d(double R, double a, double b, int n_theta, int n_t) {
  auto chord = [&](double c) {
    // int_{-c}^{c} exp(-i a y^2) dy
    return midpoint_richardson([&](double y) { return std::polar(1.0, -a * y * y); }, -c, c, n_t);
  };
  auto row = [&](double theta) {
    const double x = R * std::sin(theta);
    const double c = R * std::cos(theta);
    return std::polar(1.0, -a * x * x - b * x) * chord(c) * c;
  };
  return midpoint_richardson(row, -kPi / 2, kPi / 2, n_theta);
}

// Fock space with occupation-number keys. |state> = sum coeff |n_0 n_1 ...>.
using Occupation = std::vector<int>;
using FockState = std::map<Occupation, Complex>;

inline FockState create(const FockState& in, std::size_t mode, Complex amp = 1.0) {
  FockState out;
  for (const auto& [occ, c] : in) {
    Occupation o = occ;
    const double factor = std::sqrt(static_cast<double>(o[mode] + 1));
    o[mode] += 1;
    out[o] += amp * c * factor;
  }
  return out;
}

inline Complex overlap(const FockState& a, const FockState& b) {
  Complex s = 0.0;
  for (const auto& [occ, c] : a)
    if (auto it = b.find(occ); it != b.end()) s += std::conj(c) * it->second;
  return s;
}

inline double norm2(const FockState& a) { return std::real(overlap(a, a)); }

// U a_p^dag U^dag |0> = sum f(s1, s2) a^dag(s1) a^dag(s2) |0>.
inline FockState pair_state(const Eigen::MatrixXcd& f) {
  const std::size_t n = f.rows();
  FockState vac{{Occupation(n, 0), 1.0}};
  FockState out;
  for (std::size_t s1 = 0; s1 < n; ++s1)
    for (std::size_t s2 = 0; s2 < n; ++s2) {
      FockState t = create(create(vac, s2), s1, f(s1, s2));
      for (const auto& [o, c] : t) out[o] += c;
    }
  return out;
}

// Normalized k * A^dag(psi1) A^dag(psi2) |0>, with A^dag(psi) = sum psi(s) a^dag(s).
inline FockState detection_state(const Eigen::VectorXcd& psi1, const Eigen::VectorXcd& psi2) {
  const std::size_t n = psi1.size();
  FockState vac{{Occupation(n, 0), 1.0}};
  FockState one;
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& [o, c] : create(vac, s, psi2(s))) one[o] += c;
  FockState two;
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& [o, c] : create(one, s, psi1(s))) two[o] += c;
  const double scale = 1.0 / std::sqrt(norm2(two));
  for (auto& [o, c] : two) c *= scale;
  return two;
}

// First-quantized vectors on the N^2 product space.
inline Eigen::VectorXcd first_quantized_pair(const Eigen::MatrixXcd& f) {
  const auto n = f.rows();
  Eigen::VectorXcd v(n * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) v(a * n + b) = std::sqrt(2.0) * f(a, b);
  return v;
}

inline Eigen::VectorXcd first_quantized_detection(const Eigen::VectorXcd& psi1, const Eigen::VectorXcd& psi2) {
  const auto n = psi1.size();
  Eigen::VectorXcd v(n * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) v(a * n + b) = psi1(a) * psi2(b) + psi2(a) * psi1(b);
  return v.normalized();
}

}  // namespace oracle
