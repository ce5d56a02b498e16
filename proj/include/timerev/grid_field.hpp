#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace timerev {

using Complex = std::complex<double>;
using Vec2 = std::array<double, 2>;

// Uniform 1-D sampling: x_k = center + (k - n/2) * dx, with integer division n/2.
class Grid1D {
 public:
  Grid1D(std::size_t n, double dx, double center = 0.0);

  std::size_t n() const { return n_; }
  double dx() const { return dx_; }
  double center() const { return center_; }

  // Index of the sample whose coordinate is zero offset from the center.
  std::size_t center_index() const { return n_ / 2; }
  double coord(std::size_t k) const;
  std::vector<double> coords() const;

  // Cell boundaries of the first and last samples.
  double lower_edge() const { return coord(0) - 0.5 * dx_; }
  double upper_edge() const { return coord(n_ - 1) + 0.5 * dx_; }

  // Nearest sample to pos; ties round toward -inf. Empty if pos lies outside the cells.
  std::optional<std::size_t> nearest_index(double pos) const;

  // Same sample count and, to 1e-12 relative, the same spacing and center.
  bool matches(const Grid1D& other) const;

 private:
  std::size_t n_;
  double dx_;
  double center_;
};

// Row-major 2-D grid: sample (ix, iy) is stored at iy * nx + ix.
struct Grid2D {
  Grid1D x;
  Grid1D y;

  std::size_t size() const { return x.n() * y.n(); }
  double cell_area() const { return x.dx() * y.dx(); }
  bool matches(const Grid2D& other) const { return x.matches(other.x) && y.matches(other.y); }
};

using Grid = std::variant<Grid1D, Grid2D>;

// Complex scalar field sampled on a 1-D or 2-D grid. Immutable once built.
class SampledField {
 public:
  SampledField(Grid grid, double wavelength, std::vector<Complex> amplitudes);

  // All-zero field.
  SampledField(Grid grid, double wavelength);

  const Grid& grid() const { return grid_; }
  int rank() const { return std::holds_alternative<Grid1D>(grid_) ? 1 : 2; }
  const Grid1D& grid1d() const;
  const Grid2D& grid2d() const;

  // Axis 0 is x, axis 1 is y (2-D only).
  const Grid1D& axis(int i) const;

  double wavelength() const { return wavelength_; }
  double cell_area() const;
  std::size_t size() const { return amp_.size(); }
  std::span<const Complex> amplitudes() const { return amp_; }
  Complex operator[](std::size_t i) const { return amp_[i]; }

  // Lateral position of sample i; y is zero for 1-D fields.
  Vec2 position(std::size_t i) const;

  bool same_grid(const SampledField& other) const;

 private:
  Grid grid_;
  double wavelength_;
  std::vector<Complex> amp_;
};

SampledField point_source(const Grid1D& grid, double pos, double total_power, double wavelength);
SampledField point_source(const Grid2D& grid, Vec2 pos, double total_power, double wavelength);

// Sum of |amp|^2 times the cell area.
double power(const SampledField& field);

// Unitary transform onto angular spatial frequency k (rad/m), centered at k = 0:
//   F(k) = (2*pi)^(-d/2) * sum_j amp_j exp(-i k x_j) * cell_area
// Output spacing per axis is 2*pi / (n * dx); power is preserved.
SampledField unitary_fourier(const SampledField& field);

// Inverse of unitary_fourier. `center` gives the spatial grid center per axis.
SampledField inverse_unitary_fourier(const SampledField& spectrum, Vec2 center = {0.0, 0.0});

// Sum of conj(a) * b * cell_area; grids and wavelengths must agree.
Complex inner_product(const SampledField& a, const SampledField& b);

}  // namespace timerev
