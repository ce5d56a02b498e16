#include "timerev/grid_field.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "centered_dft.hpp"
#include "timerev/errors.hpp"

namespace timerev {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool close_rel(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

// FFTW planning is not thread-safe; execution on a private plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void shift_axis(std::vector<Complex>& data, std::size_t nx, std::size_t ny, int axis,
                std::size_t offset) {
  const std::size_t n = axis == 0 ? nx : ny;
  if (offset % n == 0) return;
  std::vector<Complex> line(n);
  const std::size_t lines = axis == 0 ? ny : nx;
  for (std::size_t l = 0; l < lines; ++l) {
    auto at = [&](std::size_t k) -> Complex& {
      return axis == 0 ? data[l * nx + k] : data[k * nx + l];
    };
    for (std::size_t k = 0; k < n; ++k) line[k] = at((k + offset) % n);
    for (std::size_t k = 0; k < n; ++k) at(k) = line[k];
  }
}

}  // namespace

namespace detail {

void centered_dft(std::vector<Complex>& data, std::size_t nx, std::size_t ny, int sign) {
  // Rotate so the centered index j - n/2 sits at position 0, transform, rotate back.
  shift_axis(data, nx, ny, 0, nx / 2);
  if (ny > 1) shift_axis(data, nx, ny, 1, ny / 2);

  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  const int fftw_sign = sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = ny > 1 ? fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf, buf,
                                     fftw_sign, FFTW_ESTIMATE)
                  : fftw_plan_dft_1d(static_cast<int>(nx), buf, buf, fftw_sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  shift_axis(data, nx, ny, 0, nx - nx / 2);
  if (ny > 1) shift_axis(data, nx, ny, 1, ny - ny / 2);
}

}  // namespace detail

Grid1D::Grid1D(std::size_t n, double dx, double center) : n_(n), dx_(dx), center_(center) {
  if (n < 2) throw DomainError("grid needs at least 2 samples");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw DomainError("grid spacing must be positive and finite");
  if (!std::isfinite(center)) throw DomainError("grid center must be finite");
}

double Grid1D::coord(std::size_t k) const {
  return center_ + (static_cast<double>(k) - static_cast<double>(n_ / 2)) * dx_;
}

std::vector<double> Grid1D::coords() const {
  std::vector<double> out(n_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = coord(k);
  return out;
}

std::optional<std::size_t> Grid1D::nearest_index(double pos) const {
  if (!std::isfinite(pos)) return std::nullopt;
  const double u = (pos - center_) / dx_;
  // ceil(u - 1/2) picks the nearer sample and sends exact ties toward -inf.
  const double k = std::ceil(u - 0.5) + static_cast<double>(n_ / 2);
  if (k < 0.0 || k > static_cast<double>(n_ - 1)) return std::nullopt;
  return static_cast<std::size_t>(k);
}

bool Grid1D::matches(const Grid1D& other) const {
  return n_ == other.n_ && close_rel(dx_, other.dx_) &&
         std::abs(center_ - other.center_) <= 1e-12 * std::max(dx_ * n_, std::abs(center_));
}

SampledField::SampledField(Grid grid, double wavelength, std::vector<Complex> amplitudes)
    : grid_(std::move(grid)), wavelength_(wavelength), amp_(std::move(amplitudes)) {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength))
    throw DomainError("wavelength must be positive and finite");
  const std::size_t expected = std::visit(
      [](const auto& g) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Grid1D>) return g.n();
        else return g.size();
      },
      grid_);
  if (amp_.size() != expected)
    throw IncompatibleError("amplitude count " + std::to_string(amp_.size()) +
                            " does not match grid size " + std::to_string(expected));
  for (const auto& a : amp_)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw NumericalError("field amplitude is not finite");
}

SampledField::SampledField(Grid grid, double wavelength)
    : SampledField(grid, wavelength,
                   std::vector<Complex>(std::holds_alternative<Grid1D>(grid)
                                            ? std::get<Grid1D>(grid).n()
                                            : std::get<Grid2D>(grid).size())) {}

const Grid1D& SampledField::grid1d() const {
  if (rank() != 1) throw IncompatibleError("expected a 1-D field");
  return std::get<Grid1D>(grid_);
}

const Grid2D& SampledField::grid2d() const {
  if (rank() != 2) throw IncompatibleError("expected a 2-D field");
  return std::get<Grid2D>(grid_);
}

const Grid1D& SampledField::axis(int i) const {
  if (rank() == 1) {
    if (i != 0) throw IncompatibleError("1-D field has a single axis");
    return std::get<Grid1D>(grid_);
  }
  return i == 0 ? std::get<Grid2D>(grid_).x : std::get<Grid2D>(grid_).y;
}

double SampledField::cell_area() const {
  return rank() == 1 ? grid1d().dx() : grid2d().cell_area();
}

Vec2 SampledField::position(std::size_t i) const {
  if (rank() == 1) return {grid1d().coord(i), 0.0};
  const auto& g = grid2d();
  return {g.x.coord(i % g.x.n()), g.y.coord(i / g.x.n())};
}

bool SampledField::same_grid(const SampledField& other) const {
  if (rank() != other.rank()) return false;
  return rank() == 1 ? grid1d().matches(other.grid1d()) : grid2d().matches(other.grid2d());
}

SampledField point_source(const Grid1D& grid, double pos, double total_power, double wavelength) {
  const auto k = grid.nearest_index(pos);
  if (!k) throw DomainError("point source position " + std::to_string(pos) + " is outside the grid");
  if (!(total_power >= 0.0)) throw DomainError("point source power must be nonnegative");
  std::vector<Complex> amp(grid.n());
  amp[*k] = std::sqrt(total_power / grid.dx());
  return SampledField(grid, wavelength, std::move(amp));
}

SampledField point_source(const Grid2D& grid, Vec2 pos, double total_power, double wavelength) {
  const auto kx = grid.x.nearest_index(pos[0]);
  const auto ky = grid.y.nearest_index(pos[1]);
  if (!kx || !ky) throw DomainError("point source position is outside the grid");
  if (!(total_power >= 0.0)) throw DomainError("point source power must be nonnegative");
  std::vector<Complex> amp(grid.size());
  amp[*ky * grid.x.n() + *kx] = std::sqrt(total_power / grid.cell_area());
  return SampledField(grid, wavelength, std::move(amp));
}

double power(const SampledField& field) {
  double sum = 0.0;
  for (const auto& a : field.amplitudes()) sum += std::norm(a);
  return sum * field.cell_area();
}

namespace {

Grid spectral_grid(const SampledField& field) {
  auto k_axis = [](const Grid1D& g) { return Grid1D(g.n(), kTwoPi / (g.n() * g.dx()), 0.0); };
  if (field.rank() == 1) return k_axis(field.grid1d());
  return Grid2D{k_axis(field.grid2d().x), k_axis(field.grid2d().y)};
}

// Multiplies by exp(sign * i * k_m * c) along each axis, k taken from `kgrid`.
void apply_center_phase(std::vector<Complex>& data, const Grid& kgrid, Vec2 center, int sign) {
  auto phases = [&](const Grid1D& ks, double c) {
    std::vector<Complex> p(ks.n(), 1.0);
    if (c != 0.0)
      for (std::size_t m = 0; m < ks.n(); ++m) p[m] = std::polar(1.0, sign * ks.coord(m) * c);
    return p;
  };
  if (const auto* g = std::get_if<Grid1D>(&kgrid)) {
    const auto px = phases(*g, center[0]);
    for (std::size_t m = 0; m < data.size(); ++m) data[m] *= px[m];
    return;
  }
  const auto& g2 = std::get<Grid2D>(kgrid);
  const auto px = phases(g2.x, center[0]);
  const auto py = phases(g2.y, center[1]);
  for (std::size_t iy = 0; iy < g2.y.n(); ++iy)
    for (std::size_t ix = 0; ix < g2.x.n(); ++ix) data[iy * g2.x.n() + ix] *= px[ix] * py[iy];
}

}  // namespace

SampledField unitary_fourier(const SampledField& field) {
  std::vector<Complex> data(field.amplitudes().begin(), field.amplitudes().end());
  const std::size_t nx = field.axis(0).n();
  const std::size_t ny = field.rank() == 2 ? field.axis(1).n() : 1;
  detail::centered_dft(data, nx, ny, -1);

  const Grid kgrid = spectral_grid(field);
  const Vec2 center{field.axis(0).center(), field.rank() == 2 ? field.axis(1).center() : 0.0};
  apply_center_phase(data, kgrid, center, -1);

  const double scale = field.cell_area() / std::pow(kTwoPi, 0.5 * field.rank());
  for (auto& a : data) a *= scale;
  return SampledField(kgrid, field.wavelength(), std::move(data));
}

SampledField inverse_unitary_fourier(const SampledField& spectrum, Vec2 center) {
  auto x_axis = [](const Grid1D& k, double c) { return Grid1D(k.n(), kTwoPi / (k.n() * k.dx()), c); };
  Grid xgrid = spectrum.rank() == 1
                   ? Grid(x_axis(spectrum.grid1d(), center[0]))
                   : Grid(Grid2D{x_axis(spectrum.grid2d().x, center[0]),
                                 x_axis(spectrum.grid2d().y, center[1])});

  std::vector<Complex> data(spectrum.amplitudes().begin(), spectrum.amplitudes().end());
  // The spectral grid is centered at k = 0 for every spectrum this library produces;
  // a nonzero k-center would add a carrier exp(i k_c x) that is applied below.
  apply_center_phase(data, spectrum.grid(), center, +1);
  const std::size_t nx = spectrum.axis(0).n();
  const std::size_t ny = spectrum.rank() == 2 ? spectrum.axis(1).n() : 1;
  detail::centered_dft(data, nx, ny, +1);

  auto carrier = [](const Grid1D& k, const Grid1D& x) {
    std::vector<Complex> p(x.n(), 1.0);
    if (k.center() != 0.0)
      for (std::size_t j = 0; j < x.n(); ++j) p[j] = std::polar(1.0, k.center() * x.coord(j));
    return p;
  };
  if (spectrum.rank() == 1) {
    const auto p = carrier(spectrum.grid1d(), std::get<Grid1D>(xgrid));
    for (std::size_t j = 0; j < data.size(); ++j) data[j] *= p[j];
  } else {
    const auto& xg = std::get<Grid2D>(xgrid);
    const auto px = carrier(spectrum.grid2d().x, xg.x);
    const auto py = carrier(spectrum.grid2d().y, xg.y);
    for (std::size_t iy = 0; iy < xg.y.n(); ++iy)
      for (std::size_t ix = 0; ix < xg.x.n(); ++ix) data[iy * xg.x.n() + ix] *= px[ix] * py[iy];
  }

  const double scale = spectrum.cell_area() / std::pow(kTwoPi, 0.5 * spectrum.rank());
  for (auto& a : data) a *= scale;
  return SampledField(std::move(xgrid), spectrum.wavelength(), std::move(data));
}

Complex inner_product(const SampledField& a, const SampledField& b) {
  if (!a.same_grid(b)) throw IncompatibleError("inner product of fields on different grids");
  if (std::abs(a.wavelength() - b.wavelength()) > 1e-12 * a.wavelength())
    throw IncompatibleError("inner product of fields with different wavelengths");
  Complex sum = 0.0;
  const auto aa = a.amplitudes();
  const auto bb = b.amplitudes();
  for (std::size_t i = 0; i < aa.size(); ++i) sum += std::conj(aa[i]) * bb[i];
  return sum * a.cell_area();
}

}  // namespace timerev
