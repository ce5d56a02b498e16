#include "timerev/quantum_forward.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "timerev/errors.hpp"

namespace timerev {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Grid1D fourier_grid(const Grid1D& in, double length, double wavelength) {
  return Grid1D(in.n(), length * wavelength / (static_cast<double>(in.n()) * in.dx()), 0.0);
}

// K_mj = dx / sqrt(L lambda) * exp(-i 2 pi x_m x_j / (L lambda)).
Eigen::MatrixXcd fourier_matrix(const Grid1D& in, const Grid1D& out, double length, double wavelength) {
  const double ll = length * wavelength;
  const double scale = in.dx() / std::sqrt(ll);
  Eigen::MatrixXcd k(out.n(), in.n());
  for (std::size_t j = 0; j < in.n(); ++j)
    for (std::size_t m = 0; m < out.n(); ++m)
      k(m, j) = scale * std::polar(1.0, -2.0 * kPi * out.coord(m) * in.coord(j) / ll);
  return k;
}

Eigen::VectorXcd chirp_vector(const Grid1D& g, double rate) {
  const double r_max = std::max(std::abs(g.coord(0)), std::abs(g.coord(g.n() - 1)));
  const double step = std::abs(rate) * (2.0 * r_max * g.dx() - g.dx() * g.dx());
  if (step > kPi) throw SamplingError("chirp phase advances more than pi per sample");
  Eigen::VectorXcd c(g.n());
  for (std::size_t k = 0; k < g.n(); ++k) c(k) = std::polar(1.0, -rate * g.coord(k) * g.coord(k));
  return c;
}

SampledCurve peak_normalized(Grid1D grid, std::vector<double> values) {
  const double peak = *std::max_element(values.begin(), values.end());
  if (peak > 0.0)
    for (auto& v : values) v /= peak;
  return {std::move(grid), std::move(values)};
}

void check_slits_on_grid(const YoungParams& p, const Grid1D& g, double w) {
  if (p.x1 + 0.5 * w > g.upper_edge() || -p.x1 - 0.5 * w < g.lower_edge())
    throw SamplingError("slits at +/-" + std::to_string(p.x1) + " m fall outside the slit-plane grid");
}

double young_period_samples(const YoungParams& p, const Grid1D& detection) {
  return p.f * p.lambda / (4.0 * p.x1) / detection.dx();
}

}  // namespace

TwoPhotonAmplitude::TwoPhotonAmplitude(Grid1D grid, Eigen::MatrixXcd psi)
    : grid_(std::move(grid)), psi_(std::move(psi)) {
  const auto n = static_cast<Eigen::Index>(grid_.n());
  if (psi_.rows() != n || psi_.cols() != n) throw DomainError("two-photon amplitude must be n x n");
  if (!psi_.allFinite()) throw NumericalError("two-photon amplitude is not finite");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (psi_(i, j) != psi_(j, i)) throw DomainError("two-photon amplitude violates exchange symmetry");
}

double TwoPhotonAmplitude::norm() const { return psi_.squaredNorm() * grid_.dx() * grid_.dx(); }

TwoPhotonAmplitude spdc_initial(const Grid1D& grid) {
  const auto n = static_cast<Eigen::Index>(grid.n());
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(n, n);
  psi.diagonal().setConstant(1.0 / grid.dx());
  return TwoPhotonAmplitude(grid, std::move(psi));
}

SingleParticleKernel kernel_of(const OpticalElement& element, const Grid1D& grid, double wavelength) {
  validate_element(element);
  const auto n = static_cast<Eigen::Index>(grid.n());
  return std::visit(
      overloaded{
          [&](const FourierLens& e) {
            Grid1D out = fourier_grid(grid, e.f, wavelength);
            return SingleParticleKernel{grid, out, fourier_matrix(grid, out, e.f, wavelength)};
          },
          [&](const FreeSpaceFourier& e) {
            Grid1D out = fourier_grid(grid, e.L, wavelength);
            return SingleParticleKernel{grid, out, fourier_matrix(grid, out, e.L, wavelength)};
          },
          [&](const TwoFWithOffset& e) {
            Grid1D out = fourier_grid(grid, e.f, wavelength);
            const double rate = kPi * e.z / (e.f * e.f * wavelength);
            Eigen::MatrixXcd k = ((e.f + e.z) / e.f) * fourier_matrix(grid, out, e.f, wavelength);
            if (e.chirp_on_output) k = chirp_vector(out, rate).asDiagonal() * k;
            else k = k * chirp_vector(grid, rate).asDiagonal();
            return SingleParticleKernel{grid, out, std::move(k)};
          },
          [&](const DoubleSlit& e) {
            const double w = e.slit_width.value_or(grid.dx());
            if (!(e.x1 > 0.5 * w)) throw ConfigError("double_slit: slits overlap (x1 <= slit_width / 2)");
            const double half = 0.5 * w + 1e-9 * grid.dx();
            Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
              const double x = grid.coord(static_cast<std::size_t>(i));
              if (std::abs(x - e.x1) <= half || std::abs(x + e.x1) <= half) k(i, i) = 1.0;
            }
            return SingleParticleKernel{grid, grid, std::move(k), true};
          },
          [&](const Magnifier& e) {
            Grid1D out(grid.n(), std::abs(e.M) * grid.dx(), e.M * grid.center());
            const double scale = 1.0 / std::sqrt(std::abs(e.M));
            Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(n, n);
            const std::size_t h2 = 2 * (grid.n() / 2);
            for (std::size_t j = 0; j < grid.n(); ++j) {
              const std::size_t src = e.M < 0 ? (h2 + grid.n() - j) % grid.n() : j;
              k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(src)) = scale;
            }
            return SingleParticleKernel{grid, out, std::move(k), e.M > 0};
          },
          [&](const CircularAperture&) -> SingleParticleKernel {
            throw UnsupportedError("circular aperture has no 1-D single-photon kernel");
          },
          [&](const Shg&) -> SingleParticleKernel {
            throw UnsupportedError("SHG is nonlinear and has no single-photon kernel");
          },
          [&](const PinholeSample&) -> SingleParticleKernel {
            throw UnsupportedError("a pinhole measurement has no single-photon kernel");
          },
      },
      element);
}

SampledField apply_kernel(const SingleParticleKernel& kernel, const SampledField& field) {
  if (!field.grid1d().matches(kernel.grid_in)) throw IncompatibleError("field grid does not match kernel input grid");
  const auto in = field.amplitudes();
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(in.data(), static_cast<Eigen::Index>(in.size()));
  Eigen::VectorXcd out = kernel.matrix * v;
  return SampledField(kernel.grid_out, field.wavelength(), std::vector<Complex>(out.data(), out.data() + out.size()));
}

TwoPhotonAmplitude evolve(const TwoPhotonAmplitude& state, const SingleParticleKernel& kernel) {
  if (!state.grid().matches(kernel.grid_in))
    throw IncompatibleError("two-photon state grid does not match kernel input grid");
  const Eigen::MatrixXcd& psi = state.psi();
  const Eigen::MatrixXcd& k = kernel.matrix;
  const Eigen::Index n_in = psi.rows();
  const Eigen::Index n_out = k.rows();

  if (kernel.diagonal) {
    const Eigen::VectorXcd d = k.diagonal();
    Eigen::MatrixXcd out(n_out, n_out);
    for (Eigen::Index j = 0; j < n_out; ++j)
      for (Eigen::Index i = 0; i < n_out; ++i) out(i, j) = psi(i, j) * (d(i) * d(j));
    return TwoPhotonAmplitude(kernel.grid_out, std::move(out));
  }

  // Post-slit states have a handful of nonzero entries; sum their outer products.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> nonzero;
  for (Eigen::Index j = 0; j < n_in && static_cast<Eigen::Index>(nonzero.size()) <= n_in / 4; ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      if (psi(i, j) != Complex(0.0)) nonzero.emplace_back(i, j);

  Eigen::MatrixXcd out;
  if (static_cast<Eigen::Index>(nonzero.size()) <= n_in / 4) {
    out = Eigen::MatrixXcd::Zero(n_out, n_out);
    // Upper triangle only, mirrored afterwards, so the result is exactly symmetric.
    for (const auto& [i, j] : nonzero) {
      const Complex w = psi(i, j);
      const auto ci = k.col(i);
      const auto cj = k.col(j);
      for (Eigen::Index b = 0; b < n_out; ++b)
        for (Eigen::Index a = 0; a <= b; ++a)
          out(a, b) += i == j ? w * (ci(a) * ci(b)) : w * (ci(a) * cj(b) + cj(a) * ci(b));
    }
    for (Eigen::Index b = 0; b < n_out; ++b)
      for (Eigen::Index a = 0; a < b; ++a) out(b, a) = out(a, b);
  } else {
    const Eigen::MatrixXcd a = k * psi * k.transpose();
    out = 0.5 * (a + a.transpose());
  }
  return TwoPhotonAmplitude(kernel.grid_out, std::move(out));
}

std::vector<double> coincidence_diagonal(const TwoPhotonAmplitude& state) {
  std::vector<double> p(state.grid().n());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    p[k] = 2.0 * std::norm(state.psi()(i, i));
  }
  return p;
}

SampledCurve forward_young(const YoungParams& p, const Grid1D& slit_grid, std::optional<double> slit_width) {
  const double w = slit_width.value_or(slit_grid.dx());
  check_slits_on_grid(p, slit_grid, w);
  const Grid1D detection = fourier_grid(slit_grid, p.f, p.lambda);
  const double samples_per_fringe = young_period_samples(p, detection);
  if (samples_per_fringe < 8.0)
    throw SamplingError("two-photon fringe spans " + std::to_string(samples_per_fringe) +
                        " detection samples; at least 8 are required");

  TwoPhotonAmplitude state = spdc_initial(slit_grid);
  state = evolve(state, kernel_of(DoubleSlit{p.x1, slit_width}, slit_grid, p.lambda));
  state = evolve(state, kernel_of(FourierLens{p.f}, slit_grid, p.lambda));
  return peak_normalized(state.grid(), coincidence_diagonal(state));
}

SampledCurve forward_young_classical(const YoungParams& p, const Grid1D& slit_grid,
                                     std::optional<double> slit_width) {
  check_slits_on_grid(p, slit_grid, slit_width.value_or(slit_grid.dx()));
  const SampledField beam(slit_grid, p.lambda, std::vector<Complex>(slit_grid.n(), 1.0));
  const SampledField out = apply_fourier_lens(apply_double_slit(beam, p.x1, slit_width), p.f);
  std::vector<double> intensity(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) intensity[k] = std::norm(out[k]);
  return peak_normalized(out.grid1d(), std::move(intensity));
}

EquivalenceReport forward_vs_reversed_young(const YoungParams& p, const Grid1D& slit_grid,
                                            std::optional<double> slit_width, RelayDistances relay,
                                            std::optional<Grid1D> reversed_source_grid) {
  SampledCurve forward = forward_young(p, slit_grid, slit_width);
  const Grid1D& detection = forward.grid;
  if (reversed_source_grid && !reversed_source_grid->matches(detection))
    throw IncompatibleError("reversed source grid differs from the forward detection grid");

  std::vector<double> reversed(detection.n());
  for (std::size_t k = 0; k < detection.n(); ++k)
    reversed[k] = reversed_young_intensity(detection, detection.coord(k), p, slit_width, relay);
  SampledCurve rev = peak_normalized(detection, std::move(reversed));

  double max_err = 0.0;
  for (std::size_t k = 0; k < detection.n(); ++k)
    max_err = std::max(max_err, std::abs(forward.values[k] - rev.values[k]));
  return {max_err, std::move(forward), std::move(rev)};
}

}  // namespace timerev
