#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "timerev/grid_field.hpp"
#include "timerev/params.hpp"

namespace timerev {

// 2-f system: output x carries spatial frequency 2*pi*x / (f * lambda) of the input.
struct FourierLens {
  double f;
};

// Far-field (Fraunhofer) propagation over L; same kernel as a lens with f -> L.
struct FreeSpaceFourier {
  double L;
};

// 2-f system observed a distance z beyond the focal plane (Fresnel). The factor
// ((f + z) / f) * exp(-i*pi*z*|r|^2 / (f^2 * lambda)) lives on the back-focal-plane
// side, which is the input when propagating toward the focus and the output when
// the element is traversed in reverse (chirp_on_output).
struct TwoFWithOffset {
  double f;
  double z;
  bool chirp_on_output = false;
};

// Transmission 1 on |x -/+ x1| <= slit_width / 2. Width defaults to one grid cell.
struct DoubleSlit {
  double x1;
  std::optional<double> slit_width;
};

// circ(|r| / D): 1 for |r| <= D / 2.
struct CircularAperture {
  double D;
};

// E'(x) = E(x / M) * |M|^(-d/2).
struct Magnifier {
  double M;
};

// Undepleted thin-crystal second-harmonic generation: E -> E^2, lambda -> lambda / 2.
struct Shg {};

// Intensity behind a pinhole centered on the axis. Radius 0 selects the on-axis sample.
struct PinholeSample {
  double radius = 0.0;
};

using OpticalElement = std::variant<FourierLens, FreeSpaceFourier, TwoFWithOffset, DoubleSlit,
                                    CircularAperture, Magnifier, Shg, PinholeSample>;

std::string element_name(const OpticalElement& element);
bool is_linear(const OpticalElement& element);

// Throws ConfigError when a length or factor is out of range.
void validate_element(const OpticalElement& element);

// Ordered element list. SHG appears at most once and a pinhole, if any, is last.
class OpticalTrain {
 public:
  OpticalTrain() = default;
  explicit OpticalTrain(std::vector<OpticalElement> elements);

  const std::vector<OpticalElement>& elements() const { return elements_; }
  bool empty() const { return elements_.empty(); }
  bool ends_in_pinhole() const;

 private:
  std::vector<OpticalElement> elements_;
};

SampledField apply_fourier_lens(const SampledField& field, double f);
SampledField free_space_fourier(const SampledField& field, double L);

// Throws SamplingError when the chirp advances by more than pi between samples.
SampledField two_f_with_offset(const SampledField& field, double f, double z,
                               bool chirp_on_output = false);

SampledField apply_double_slit(const SampledField& field, double x1,
                               std::optional<double> slit_width = std::nullopt);
SampledField apply_circular_aperture(const SampledField& field, double D);
SampledField magnify(const SampledField& field, double M);
SampledField shg(const SampledField& field);
double pinhole_intensity(const SampledField& field, double radius = 0.0);

// Applies one field-valued element. A pinhole is not field-valued and is rejected.
SampledField apply_element(const SampledField& field, const OpticalElement& element);

using TrainResult = std::variant<SampledField, double>;

// Left-to-right application; yields an intensity when the train ends in a pinhole.
TrainResult run_train(const SampledField& source, const OpticalTrain& train);

// Time-reversed Young interferometer, source side first:
// lens f, double slit, free space L1, lens f, SHG, free space L2, on-axis pinhole.
OpticalTrain young_reversed_train(const YoungParams& p, std::optional<double> slit_width = std::nullopt,
                                  RelayDistances relay = {});

// Time-reversed focusing system for a source at axial offset z0:
// offset 2-f system, aperture D, free space L1, lens f, SHG, free space L2, on-axis pinhole.
OpticalTrain focus_reversed_train(const FocusParams& p, double z0, RelayDistances relay = {});

// Pinhole intensity of the reversed Young train for a unit point source at x0.
double reversed_young_intensity(const Grid1D& source_grid, double x0, const YoungParams& p,
                                std::optional<double> slit_width = std::nullopt,
                                RelayDistances relay = {});

// Pinhole intensity of the reversed focusing train for a unit point source at (r0, z0).
double reversed_focus_intensity(const Grid2D& source_grid, Vec2 r0, double z0,
                                const FocusParams& p, RelayDistances relay = {});

void to_json(nlohmann::json& j, const OpticalElement& element);
void from_json(const nlohmann::json& j, OpticalElement& element);
void to_json(nlohmann::json& j, const OpticalTrain& train);
void from_json(const nlohmann::json& j, OpticalTrain& train);

}  // namespace timerev
