#include "timerev/analytic.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "timerev/errors.hpp"

namespace timerev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadTolerance = 1e-9;
constexpr int kMinPanels = 256;

void require_axial_validity(double z0, double f) {
  if (!(std::abs(z0) < f))
    throw DomainError("axial offset |z0| = " + std::to_string(std::abs(z0)) +
                      " outside the paraxial validity range |z0| < f");
}

Complex phase(double angle) { return std::polar(1.0, angle); }

double dot(Vec2 a, Vec2 b) { return a[0] * b[0] + a[1] * b[1]; }
double norm2(Vec2 a) { return dot(a, a); }

}  // namespace

double somb(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-8) return 0.5 - ax * ax / 16.0;
  return std::cyl_bessel_j(1.0, ax) / ax;
}

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double young_two_photon(double x0, const YoungParams& p) {
  return 0.5 * (1.0 + std::cos(8.0 * kPi * p.x1 * x0 / (p.f * p.lambda)));
}

double young_classical(double x0, const YoungParams& p) {
  return 0.5 * (1.0 + std::cos(4.0 * kPi * p.x1 * x0 / (p.f * p.lambda)));
}

double young_two_photon_period(const YoungParams& p) { return p.f * p.lambda / (4.0 * p.x1); }
double young_classical_period(const YoungParams& p) { return p.f * p.lambda / (2.0 * p.x1); }

double spot_lateral(double r0, const FocusParams& p, SpotKind kind) {
  const double scale = kind == SpotKind::two_photon ? 2.0 : 1.0;
  const double s = somb(scale * kPi * p.D * r0 / (p.f * p.lambda)) / 0.5;
  return s * s;
}

double spot_axial(double z0, const FocusParams& p, SpotKind kind, AxialPrefactor prefactor) {
  require_axial_validity(z0, p.f);
  const double c = kind == SpotKind::two_photon ? 4.0 : 8.0;
  const double s = sinc(kPi * p.D * p.D * z0 / (c * p.f * p.f * p.lambda));
  const double lever = prefactor == AxialPrefactor::exact ? p.f + z0 : p.f;
  const double l2 = lever * lever;
  return l2 * l2 * s * s;
}

Complex disk_chirp_integral(double radius, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  // Work on u = rho / radius in [0, 1] so the tolerance is dimensionless.
  const double A = a * radius * radius;
  const double B = b * radius;
  auto integrand = [A, B](double u) {
    return u * boost::math::cyl_bessel_j(0, std::abs(B) * u) * phase(-A * u * u);
  };
  const double cycles = (std::abs(A) + std::abs(B)) / (2.0 * kPi);
  const int panels = std::max(kMinPanels, static_cast<int>(std::ceil(4.0 * cycles)));

  Complex sum = 0.0;
  double err_total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = static_cast<double>(k) / panels;
    const double hi = static_cast<double>(k + 1) / panels;
    double err = 0.0;
    // One Kronrod pass per panel; the Gauss-Kronrod difference bounds the panel error.
    sum += gauss_kronrod<double, 15>::integrate(integrand, lo, hi, 0, 0.0, &err);
    err_total += err;
  }
  if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()) ||
      err_total > kQuadTolerance * (1.0 + std::abs(sum)))
    throw NumericalError("radial quadrature did not converge (error estimate " +
                         std::to_string(err_total) + ")");
  return 2.0 * kPi * radius * radius * sum;
}

double spot_offaxis(double r0, double z0, const FocusParams& p, SpotKind kind) {
  require_axial_validity(z0, p.f);
  const double scale = kind == SpotKind::two_photon ? 2.0 : 1.0;
  const double a = scale * kPi * z0 / (p.f * p.f * p.lambda);
  const double b = scale * 2.0 * kPi * std::abs(r0) / (p.f * p.lambda);
  const double lever = (p.f + z0) * (p.f + z0);
  return std::norm(lever * disk_chirp_integral(0.5 * p.D, a, b));
}

double spot_offaxis_two_photon(double r0, double z0, const FocusParams& p) {
  return spot_offaxis(r0, z0, p, SpotKind::two_photon);
}

double fwhm(std::span<const double> coords, std::span<const double> values) {
  if (coords.size() != values.size() || values.size() < 3)
    throw ShapeError("fwhm needs matching coordinate and value arrays of length >= 3");
  for (std::size_t i = 1; i < coords.size(); ++i)
    if (!(coords[i] > coords[i - 1])) throw ShapeError("fwhm coordinates must increase strictly");

  const auto peak_it = std::max_element(values.begin(), values.end());
  const std::size_t peak = static_cast<std::size_t>(peak_it - values.begin());
  const double half = 0.5 * *peak_it;

  auto crossing = [&](std::size_t inside, std::size_t outside) {
    const double t = (values[inside] - half) / (values[inside] - values[outside]);
    return coords[inside] + t * (coords[outside] - coords[inside]);
  };

  std::optional<double> left, right;
  for (std::size_t i = peak; i > 0; --i)
    if (values[i - 1] < half) {
      left = crossing(i, i - 1);
      break;
    }
  for (std::size_t i = peak; i + 1 < values.size(); ++i)
    if (values[i + 1] < half) {
      right = crossing(i, i + 1);
      break;
    }
  if (!left || !right) throw ShapeError("curve has no half-maximum crossing on both sides of its peak");
  return *right - *left;
}

double fringe_period(std::span<const double> coords, std::span<const double> values) {
  if (coords.size() != values.size() || values.size() < 3)
    throw ShapeError("fringe_period needs matching arrays of length >= 3");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double level = 0.5 * (*lo + *hi);
  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double a = values[i] - level;
    const double b = values[i + 1] - level;
    if ((a < 0.0) != (b < 0.0))
      crossings.push_back(coords[i] + a / (a - b) * (coords[i + 1] - coords[i]));
  }
  if (crossings.size() < 3) throw ShapeError("fewer than three fringe crossings in the curve");
  return 2.0 * (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
}

StageField appendix_young_field(int stage, double x, double x0, const YoungParams& p,
                                RelayDistances relay) {
  const double fl = p.f * p.lambda;
  const double theta = 2.0 * kPi * x0 * p.x1 / fl;
  const double image = p.x1 * p.f / relay.L1;
  switch (stage) {
    case 0:
      return std::vector<DeltaTerm>{{1.0, x0}};
    case 1:
      return phase(-2.0 * kPi * x0 * x / fl);
    case 2:
      return std::vector<DeltaTerm>{{phase(-theta), p.x1}, {phase(theta), -p.x1}};
    case 3:
      return std::vector<DeltaTerm>{{phase(-theta), -image}, {phase(theta), image}};
    case 4:
      return std::vector<DeltaTerm>{{phase(-2.0 * theta), -image}, {phase(2.0 * theta), image}};
    case 5:
      return Complex(std::cos(2.0 * theta - 4.0 * kPi * p.f * p.x1 * x / (relay.L1 * relay.L2 * p.lambda)));
    default:
      throw DomainError("Young train stage must be in 0..5, got " + std::to_string(stage));
  }
}

StageField2D appendix_focus_field(int stage, Vec2 r, Vec2 r0, double z0, const FocusParams& p,
                                  RelayDistances relay) {
  const double f = p.f;
  const double lam = p.lambda;
  const double lever = f + z0;
  const double m = relay.L1 / f;
  // Back-focal-plane field of the offset 2-f system at position u.
  auto pupil = [&](Vec2 u) {
    return lever * phase(-kPi * z0 * norm2(u) / (f * f * lam)) * phase(-2.0 * kPi * dot(r0, u) / (f * lam));
  };
  auto inside = [&](Vec2 u) { return norm2(u) <= 0.25 * p.D * p.D; };

  switch (stage) {
    case 0:
      return std::vector<DeltaTerm2D>{{1.0, r0}};
    case 1:
      return pupil(r);
    case 2:
      return inside(r) ? pupil(r) : Complex(0.0);
    case 3:
    case 4: {
      // Relay of magnification -f / L1: E3(r) = E2(-L1 r / f).
      const Vec2 u{-m * r[0], -m * r[1]};
      if (!inside(u)) return Complex(0.0);
      const Complex e3 = pupil(u);
      return stage == 3 ? e3 : e3 * e3;
    }
    case 5: {
      require_axial_validity(z0, f);
      const double a = 2.0 * kPi * z0 * m * m / (f * f * lam);
      // The SH field carries exp(+i 4 pi m r0 . r' / (f lambda)) after the inverting relay.
      const Vec2 q{r[0] / (relay.L2 * lam) - 2.0 * m * r0[0] / (f * lam),
                   r[1] / (relay.L2 * lam) - 2.0 * m * r0[1] / (f * lam)};
      const double b = 2.0 * kPi * std::sqrt(norm2(q));
      return lever * lever * disk_chirp_integral(0.5 * f * p.D / relay.L1, a, b);
    }
    default:
      throw DomainError("focusing train stage must be in 0..5, got " + std::to_string(stage));
  }
}

}  // namespace timerev
