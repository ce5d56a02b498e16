#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "timerev/grid_field.hpp"
#include "timerev/optics.hpp"
#include "timerev/params.hpp"

namespace timerev {

// 1-D two-photon wavefunction psi(x_i, x_j) in 1/m, exchange-symmetric.
class TwoPhotonAmplitude {
 public:
  // Throws DomainError unless psi is n x n, finite and exactly symmetric.
  TwoPhotonAmplitude(Grid1D grid, Eigen::MatrixXcd psi);

  const Grid1D& grid() const { return grid_; }
  const Eigen::MatrixXcd& psi() const { return psi_; }

  // Sum of |psi|^2 dx^2.
  double norm() const;

 private:
  Grid1D grid_;
  Eigen::MatrixXcd psi_;
};

// Matrix of one linear element acting on one photon: out = matrix * in, with the
// input cell width folded into the matrix entries.
struct SingleParticleKernel {
  Grid1D grid_in;
  Grid1D grid_out;
  Eigen::MatrixXcd matrix;
  bool diagonal = false;
};

// Ideal position-correlated pair state: psi = delta_ij / dx.
TwoPhotonAmplitude spdc_initial(const Grid1D& grid);

// Throws UnsupportedError for SHG, pinholes and 2-D-only elements.
SingleParticleKernel kernel_of(const OpticalElement& element, const Grid1D& grid, double wavelength);

// Single-field action of a kernel, for comparison with the optics pipeline.
SampledField apply_kernel(const SingleParticleKernel& kernel, const SampledField& field);

// psi' = K psi K^T.
TwoPhotonAmplitude evolve(const TwoPhotonAmplitude& state, const SingleParticleKernel& kernel);

// P(x_k) = 2 |psi(k, k)|^2, unnormalized.
std::vector<double> coincidence_diagonal(const TwoPhotonAmplitude& state);

struct SampledCurve {
  Grid1D grid;
  std::vector<double> values;
};

// SPDC pair -> double slit -> Fourier lens -> coincidences on the detection grid,
// peak-normalized. The slit-plane grid is `slit_grid`; the detection grid has spacing
// f lambda / (n dx). Throws SamplingError if a fringe spans fewer than 8 detection
// samples or a slit falls off the grid.
SampledCurve forward_young(const YoungParams& p, const Grid1D& slit_grid,
                           std::optional<double> slit_width = std::nullopt);

// Classical counterpart: uniform beam -> double slit -> Fourier lens -> intensity.
SampledCurve forward_young_classical(const YoungParams& p, const Grid1D& slit_grid,
                                     std::optional<double> slit_width = std::nullopt);

struct EquivalenceReport {
  // Largest |forward - reversed| over the sweep, both curves peak-normalized.
  double max_rel_err;
  SampledCurve forward;
  SampledCurve reversed;
};

// Sweeps the reversed source over every detection sample and compares the pinhole
// intensity with the forward coincidence curve. `reversed_source_grid`, when given,
// must equal the forward detection grid.
EquivalenceReport forward_vs_reversed_young(const YoungParams& p, const Grid1D& slit_grid,
                                            std::optional<double> slit_width = std::nullopt,
                                            RelayDistances relay = {},
                                            std::optional<Grid1D> reversed_source_grid = std::nullopt);

}  // namespace timerev
