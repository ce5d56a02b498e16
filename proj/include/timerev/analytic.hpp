#pragma once

#include <span>
#include <variant>
#include <vector>

#include "timerev/grid_field.hpp"
#include "timerev/params.hpp"

namespace timerev {

// J1(x) / x, equal to 1/2 at the origin.
double somb(double x);

// sin(x) / x, equal to 1 at the origin.
double sinc(double x);

// Two-photon Young fringe 1/2 [1 + cos(8 pi x1 x0 / (f lambda))]; period f lambda / (4 x1).
double young_two_photon(double x0, const YoungParams& p);

// Classical Young fringe 1/2 [1 + cos(4 pi x1 x0 / (f lambda))]; period f lambda / (2 x1).
double young_classical(double x0, const YoungParams& p);

double young_two_photon_period(const YoungParams& p);
double young_classical_period(const YoungParams& p);

enum class SpotKind { classical, two_photon };

// How the (f + z0)^4 prefactor of the axial laws is treated.
enum class AxialPrefactor { exact, frozen };

// Peak-normalized lateral spot at z0 = 0:
//   two-photon somb^2(2 pi D r0 / (f lambda)), classical somb^2(pi D r0 / (f lambda)).
double spot_lateral(double r0, const FocusParams& p, SpotKind kind);

// On-axis spot (f + z0)^4 sinc^2(pi D^2 z0 / (c f^2 lambda)), c = 4 (two-photon) or 8
// (classical). With AxialPrefactor::frozen the prefactor is f^4. Requires |z0| < f.
double spot_axial(double z0, const FocusParams& p, SpotKind kind,
                  AxialPrefactor prefactor = AxialPrefactor::exact);

// |(f + z0)^2 * integral over |r| <= D/2 of exp(-i 2 pi z0 |r|^2 / (f^2 lambda))
//                                       * exp(-i 4 pi r . r0 / (f lambda)) dr|^2
// evaluated through the radial J0 reduction. Requires |z0| < f.
double spot_offaxis_two_photon(double r0, double z0, const FocusParams& p);

// Same law for either kind; the classical kernel has half the chirp rate and half the
// lateral frequency, and at r0 = 0 reduces to spot_axial(classical).
double spot_offaxis(double r0, double z0, const FocusParams& p, SpotKind kind);

// integral over |r| <= radius of exp(-i a |r|^2) exp(-i b r . e) d^2r for a unit vector e,
// as 2 pi * int_0^radius rho J0(b rho) exp(-i a rho^2) d rho. 15-point Gauss-Kronrod on at
// least 256 panels, four per oscillation; throws NumericalError if the estimated error exceeds
// 1e-9 (absolute + relative, on the integral scaled by 2 pi radius^2).
Complex disk_chirp_integral(double radius, double a, double b);

// Width between the half-maximum crossings adjacent to the peak, linearly interpolated.
// Throws ShapeError when either crossing is missing.
double fwhm(std::span<const double> coords, std::span<const double> values);

// Mean spacing of mid-level crossings, doubled. Needs at least three crossings.
double fringe_period(std::span<const double> coords, std::span<const double> values);

struct DeltaTerm {
  Complex weight;
  double position;
};

struct DeltaTerm2D {
  Complex weight;
  Vec2 position;
};

// Pointwise value, or a sum of weighted deltas for stages whose field is singular.
using StageField = std::variant<Complex, std::vector<DeltaTerm>>;
using StageField2D = std::variant<Complex, std::vector<DeltaTerm2D>>;

// Closed-form field of the time-reversed Young train after stage 0..5 (source, lens,
// slit, relay L1 + lens, SHG, relay L2) for an ideal point source at x0 and delta slits.
StageField appendix_young_field(int stage, double x, double x0, const YoungParams& p,
                                RelayDistances relay = {});

// Closed-form field of the time-reversed focusing train after stage 0..5 (source,
// offset 2-f system, aperture, relay L1 + lens, SHG, relay L2) for a point source at (r0, z0).
StageField2D appendix_focus_field(int stage, Vec2 r, Vec2 r0, double z0, const FocusParams& p,
                                  RelayDistances relay = {});

}  // namespace timerev
