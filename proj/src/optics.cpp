#include "timerev/optics.hpp"

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

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

Grid map_axes(const SampledField& field, auto&& axis_fn) {
  if (field.rank() == 1) return axis_fn(field.grid1d());
  return Grid2D{axis_fn(field.grid2d().x), axis_fn(field.grid2d().y)};
}

// Fourier transform onto a plane where x corresponds to k = 2*pi*x / (length * lambda).
SampledField fourier_to_plane(const SampledField& field, double length) {
  const SampledField spectrum = unitary_fourier(field);
  const double lambda = field.wavelength();
  Grid out = map_axes(field, [&](const Grid1D& g) {
    return Grid1D(g.n(), length * lambda / (static_cast<double>(g.n()) * g.dx()), 0.0);
  });
  // |amp|^2 dk must equal |amp|^2 dx_out, and dk / dx_out = 2*pi / (length * lambda).
  const double scale = std::pow(2.0 * kPi / (length * lambda), 0.5 * field.rank());
  std::vector<Complex> amp(spectrum.amplitudes().begin(), spectrum.amplitudes().end());
  for (auto& a : amp) a *= scale;
  return SampledField(std::move(out), lambda, std::move(amp));
}

void check_chirp_sampling(const SampledField& field, double chirp_rate) {
  for (int ax = 0; ax < field.rank(); ++ax) {
    const Grid1D& g = field.axis(ax);
    const double r_max = std::max(std::abs(g.coord(0)), std::abs(g.coord(g.n() - 1)));
    const double step = std::abs(chirp_rate) * (2.0 * r_max * g.dx() - g.dx() * g.dx());
    if (step > kPi)
      throw SamplingError("chirp phase advances " + std::to_string(step) +
                          " rad per sample (limit pi); refine the grid or reduce |z|");
  }
}

SampledField multiply_chirp(const SampledField& field, double amplitude, double chirp_rate) {
  std::vector<Complex> amp(field.amplitudes().begin(), field.amplitudes().end());
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const Vec2 r = field.position(i);
    amp[i] *= amplitude * std::polar(1.0, -chirp_rate * (r[0] * r[0] + r[1] * r[1]));
  }
  return SampledField(field.grid(), field.wavelength(), std::move(amp));
}

std::vector<std::size_t> parity_permutation(const Grid1D& g) {
  // Sample j holds coordinate (j - h) dx; its mirror image is index 2h - j (mod n).
  const std::size_t n = g.n();
  const std::size_t h2 = 2 * (n / 2);
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < n; ++j) perm[j] = (h2 + n - j) % n;
  return perm;
}

}  // namespace

std::string element_name(const OpticalElement& element) {
  return std::visit(overloaded{
                        [](const FourierLens&) { return std::string("fourier_lens"); },
                        [](const FreeSpaceFourier&) { return std::string("free_space"); },
                        [](const TwoFWithOffset&) { return std::string("two_f_offset"); },
                        [](const DoubleSlit&) { return std::string("double_slit"); },
                        [](const CircularAperture&) { return std::string("circular_aperture"); },
                        [](const Magnifier&) { return std::string("magnifier"); },
                        [](const Shg&) { return std::string("shg"); },
                        [](const PinholeSample&) { return std::string("pinhole"); },
                    },
                    element);
}

bool is_linear(const OpticalElement& element) {
  return !std::holds_alternative<Shg>(element) && !std::holds_alternative<PinholeSample>(element);
}

void validate_element(const OpticalElement& element) {
  auto fail = [&](const std::string& what) {
    throw ConfigError(element_name(element) + ": " + what);
  };
  std::visit(overloaded{
                 [&](const FourierLens& e) {
                   if (!positive(e.f)) fail("focal length must be > 0");
                 },
                 [&](const FreeSpaceFourier& e) {
                   if (!positive(e.L)) fail("distance must be > 0");
                 },
                 [&](const TwoFWithOffset& e) {
                   if (!positive(e.f)) fail("focal length must be > 0");
                   if (!std::isfinite(e.z)) fail("offset must be finite");
                 },
                 [&](const DoubleSlit& e) {
                   if (!positive(e.x1)) fail("slit half-separation must be > 0");
                   if (e.slit_width) {
                     if (!positive(*e.slit_width)) fail("slit width must be > 0");
                     if (!(e.x1 > 0.5 * *e.slit_width)) fail("slits overlap (x1 <= slit_width / 2)");
                   }
                 },
                 [&](const CircularAperture& e) {
                   if (!positive(e.D)) fail("aperture diameter must be > 0");
                 },
                 [&](const Magnifier& e) {
                   if (e.M == 0.0 || !std::isfinite(e.M)) fail("magnification must be nonzero");
                 },
                 [](const Shg&) {},
                 [&](const PinholeSample& e) {
                   if (!(e.radius >= 0.0) || !std::isfinite(e.radius)) fail("radius must be >= 0");
                 },
             },
             element);
}

OpticalTrain::OpticalTrain(std::vector<OpticalElement> elements) : elements_(std::move(elements)) {
  int shg_count = 0;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    validate_element(elements_[i]);
    if (std::holds_alternative<Shg>(elements_[i]) && ++shg_count > 1)
      throw ConfigError("optical train contains more than one SHG stage");
    if (std::holds_alternative<PinholeSample>(elements_[i]) && i + 1 != elements_.size())
      throw ConfigError("pinhole must be the last element of an optical train");
  }
}

bool OpticalTrain::ends_in_pinhole() const {
  return !elements_.empty() && std::holds_alternative<PinholeSample>(elements_.back());
}

SampledField apply_fourier_lens(const SampledField& field, double f) {
  validate_element(FourierLens{f});
  return fourier_to_plane(field, f);
}

SampledField free_space_fourier(const SampledField& field, double L) {
  validate_element(FreeSpaceFourier{L});
  return fourier_to_plane(field, L);
}

SampledField two_f_with_offset(const SampledField& field, double f, double z, bool chirp_on_output) {
  validate_element(TwoFWithOffset{f, z, chirp_on_output});
  const double rate = kPi * z / (f * f * field.wavelength());
  const double amplitude = (f + z) / f;
  if (!chirp_on_output) {
    check_chirp_sampling(field, rate);
    return fourier_to_plane(multiply_chirp(field, amplitude, rate), f);
  }
  SampledField out = fourier_to_plane(field, f);
  check_chirp_sampling(out, rate);
  return multiply_chirp(out, amplitude, rate);
}

SampledField apply_double_slit(const SampledField& field, double x1, std::optional<double> slit_width) {
  const Grid1D& g = field.grid1d();
  const double w = slit_width.value_or(g.dx());
  if (!positive(w)) throw ConfigError("double_slit: slit width must be > 0");
  if (!(x1 > 0.5 * w)) throw ConfigError("double_slit: slits overlap (x1 <= slit_width / 2)");
  // Samples within rounding of the slit edge count as inside.
  const double half = 0.5 * w + 1e-9 * g.dx();
  std::vector<Complex> amp(field.amplitudes().begin(), field.amplitudes().end());
  for (std::size_t k = 0; k < amp.size(); ++k) {
    const double x = g.coord(k);
    if (std::abs(x - x1) > half && std::abs(x + x1) > half) amp[k] = 0.0;
  }
  return SampledField(g, field.wavelength(), std::move(amp));
}

SampledField apply_circular_aperture(const SampledField& field, double D) {
  validate_element(CircularAperture{D});
  if (field.rank() != 2) throw IncompatibleError("circular aperture needs a 2-D field");
  const double r2 = 0.25 * D * D;
  std::vector<Complex> amp(field.amplitudes().begin(), field.amplitudes().end());
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const Vec2 r = field.position(i);
    if (r[0] * r[0] + r[1] * r[1] > r2) amp[i] = 0.0;
  }
  return SampledField(field.grid(), field.wavelength(), std::move(amp));
}

SampledField magnify(const SampledField& field, double M) {
  validate_element(Magnifier{M});
  const double scale = std::pow(std::abs(M), -0.5 * field.rank());
  Grid out = map_axes(field, [&](const Grid1D& g) { return Grid1D(g.n(), std::abs(M) * g.dx(), M * g.center()); });

  std::vector<Complex> amp(field.size());
  if (field.rank() == 1) {
    const auto& g = field.grid1d();
    const auto perm = parity_permutation(g);
    for (std::size_t j = 0; j < g.n(); ++j) amp[j] = scale * field[M < 0 ? perm[j] : j];
  } else {
    const auto& g = field.grid2d();
    const auto px = parity_permutation(g.x);
    const auto py = parity_permutation(g.y);
    const std::size_t nx = g.x.n();
    for (std::size_t iy = 0; iy < g.y.n(); ++iy)
      for (std::size_t ix = 0; ix < nx; ++ix) {
        const std::size_t sx = M < 0 ? px[ix] : ix;
        const std::size_t sy = M < 0 ? py[iy] : iy;
        amp[iy * nx + ix] = scale * field[sy * nx + sx];
      }
  }
  return SampledField(std::move(out), field.wavelength(), std::move(amp));
}

SampledField shg(const SampledField& field) {
  std::vector<Complex> amp(field.amplitudes().begin(), field.amplitudes().end());
  for (auto& a : amp) a *= a;
  return SampledField(field.grid(), 0.5 * field.wavelength(), std::move(amp));
}

double pinhole_intensity(const SampledField& field, double radius) {
  validate_element(PinholeSample{radius});
  if (radius == 0.0) {
    const auto kx = field.axis(0).nearest_index(0.0);
    const auto ky = field.rank() == 2 ? field.axis(1).nearest_index(0.0) : std::optional<std::size_t>(0);
    if (!kx || !ky) throw DomainError("pinhole axis lies outside the field grid");
    return std::norm(field[*ky * field.axis(0).n() + *kx]);
  }
  const double r2 = radius * radius;
  double sum = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const Vec2 r = field.position(i);
    if (r[0] * r[0] + r[1] * r[1] <= r2) sum += std::norm(field[i]);
  }
  return sum * field.cell_area();
}

SampledField apply_element(const SampledField& field, const OpticalElement& element) {
  return std::visit(
      overloaded{
          [&](const FourierLens& e) { return apply_fourier_lens(field, e.f); },
          [&](const FreeSpaceFourier& e) { return free_space_fourier(field, e.L); },
          [&](const TwoFWithOffset& e) { return two_f_with_offset(field, e.f, e.z, e.chirp_on_output); },
          [&](const DoubleSlit& e) { return apply_double_slit(field, e.x1, e.slit_width); },
          [&](const CircularAperture& e) { return apply_circular_aperture(field, e.D); },
          [&](const Magnifier& e) { return magnify(field, e.M); },
          [&](const Shg&) { return shg(field); },
          [&](const PinholeSample&) -> SampledField {
            throw UnsupportedError("pinhole yields an intensity, not a field");
          },
      },
      element);
}

TrainResult run_train(const SampledField& source, const OpticalTrain& train) {
  SampledField field = source;
  for (const auto& element : train.elements()) {
    if (const auto* pin = std::get_if<PinholeSample>(&element)) return pinhole_intensity(field, pin->radius);
    field = apply_element(field, element);
  }
  return field;
}

OpticalTrain young_reversed_train(const YoungParams& p, std::optional<double> slit_width,
                                  RelayDistances relay) {
  return OpticalTrain({FourierLens{p.f}, DoubleSlit{p.x1, slit_width}, FreeSpaceFourier{relay.L1},
                       FourierLens{p.f}, Shg{}, FreeSpaceFourier{relay.L2}, PinholeSample{0.0}});
}

OpticalTrain focus_reversed_train(const FocusParams& p, double z0, RelayDistances relay) {
  return OpticalTrain({TwoFWithOffset{p.f, z0, true}, CircularAperture{p.D}, FreeSpaceFourier{relay.L1},
                       FourierLens{p.f}, Shg{}, FreeSpaceFourier{relay.L2}, PinholeSample{0.0}});
}

double reversed_young_intensity(const Grid1D& source_grid, double x0, const YoungParams& p,
                                std::optional<double> slit_width, RelayDistances relay) {
  const auto source = point_source(source_grid, x0, 1.0, p.lambda);
  return std::get<double>(run_train(source, young_reversed_train(p, slit_width, relay)));
}

double reversed_focus_intensity(const Grid2D& source_grid, Vec2 r0, double z0, const FocusParams& p,
                                RelayDistances relay) {
  const auto source = point_source(source_grid, r0, 1.0, p.lambda);
  return std::get<double>(run_train(source, focus_reversed_train(p, z0, relay)));
}

void to_json(nlohmann::json& j, const OpticalElement& element) {
  j = nlohmann::json{{"element", element_name(element)}};
  std::visit(overloaded{
                 [&](const FourierLens& e) { j["f"] = e.f; },
                 [&](const FreeSpaceFourier& e) { j["L"] = e.L; },
                 [&](const TwoFWithOffset& e) {
                   j["f"] = e.f;
                   j["z"] = e.z;
                   j["chirp_on_output"] = e.chirp_on_output;
                 },
                 [&](const DoubleSlit& e) {
                   j["x1"] = e.x1;
                   if (e.slit_width) j["slit_width"] = *e.slit_width;
                 },
                 [&](const CircularAperture& e) { j["D"] = e.D; },
                 [&](const Magnifier& e) { j["M"] = e.M; },
                 [](const Shg&) {},
                 [&](const PinholeSample& e) { j["radius"] = e.radius; },
             },
             element);
}

void from_json(const nlohmann::json& j, OpticalElement& element) {
  try {
    const std::string name = j.at("element").get<std::string>();
    if (name == "fourier_lens") element = FourierLens{j.at("f").get<double>()};
    else if (name == "free_space") element = FreeSpaceFourier{j.at("L").get<double>()};
    else if (name == "two_f_offset")
      element = TwoFWithOffset{j.at("f").get<double>(), j.at("z").get<double>(),
                               j.value("chirp_on_output", false)};
    else if (name == "double_slit")
      element = DoubleSlit{j.at("x1").get<double>(),
                           j.contains("slit_width") ? std::optional<double>(j["slit_width"].get<double>())
                                                    : std::nullopt};
    else if (name == "circular_aperture") element = CircularAperture{j.at("D").get<double>()};
    else if (name == "magnifier") element = Magnifier{j.at("M").get<double>()};
    else if (name == "shg") element = Shg{};
    else if (name == "pinhole") element = PinholeSample{j.value("radius", 0.0)};
    else throw ConfigError("unknown optical element '" + name + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed optical element: ") + e.what());
  }
  validate_element(element);
}

void to_json(nlohmann::json& j, const OpticalTrain& train) {
  j = nlohmann::json::array();
  for (const auto& e : train.elements()) j.push_back(e);
}

void from_json(const nlohmann::json& j, OpticalTrain& train) {
  if (!j.is_array()) throw ConfigError("optical train must be a JSON array of elements");
  std::vector<OpticalElement> elements;
  for (const auto& item : j) {
    OpticalElement e = Shg{};
    from_json(item, e);
    elements.push_back(e);
  }
  train = OpticalTrain(std::move(elements));
}

}  // namespace timerev
