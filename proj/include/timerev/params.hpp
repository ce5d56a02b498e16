#pragma once

namespace timerev {

// Two-photon Young interferometer: slit half-separation x1, focal length f of the
// Fourier lens, wavelength of the down-converted (fundamental) light. Meters.
struct YoungParams {
  double x1;
  double f;
  double lambda;
};

// Focusing system: aperture diameter D in the back focal plane, focal length f,
// fundamental wavelength. Meters.
struct FocusParams {
  double D;
  double f;
  double lambda;
};

// Long free-space Fourier relays of the time-reversed trains (before and after SHG).
struct RelayDistances {
  double L1 = 3.24;
  double L2 = 3.24;
};

}  // namespace timerev
