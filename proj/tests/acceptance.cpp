// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "timerev/analytic.hpp"
#include "timerev/discrete_modes.hpp"
#include "timerev/experiment.hpp"
#include "timerev/optics.hpp"
#include "timerev/quantum_forward.hpp"

using namespace timerev;

namespace {

constexpr double kPi = 3.14159265358979323846;
const FocusParams kFocus{0.0127, 0.05, 7.8e-7};

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out{false, ""};
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt < budget_s;
  const bool pass = out.ok && in_time;
  if (!pass) ++failures;
  fmt::print("{} [{}] {}: {} | {:.2f} s (limit {} s{})\n", pass ? "PASS" : "FAIL", id, name, out.detail, dt, budget_s,
             in_time ? "" : ", over budget");
  std::fflush(stdout);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * double(i) / double(n - 1);
  return v;
}

// max |c num - ref| / max |ref| with c the least-squares scale
double scaled_linf(const std::vector<double>& num, const std::vector<double>& ref) {
  double sn = 0, sd = 0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    sn += num[i] * ref[i];
    sd += num[i] * num[i];
  }
  const double c = sn / sd;
  double err = 0, peak = 0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    err = std::max(err, std::abs(c * num[i] - ref[i]));
    peak = std::max(peak, std::abs(ref[i]));
  }
  return err / peak;
}

Outcome period_halving() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> cells_d(4, 24);
  std::uniform_real_distribution<double> f_d(0.04, 0.08), lam_d(7e-7, 9e-7);
  const Grid1D g(256, 2e-5);
  double worst_ratio = 0, worst_period = 0;
  for (int t = 0; t < 3; ++t) {
    // 256 / (4 cells) samples per two-photon fringe: cells <= 8 keeps at least 8
    const int cells = 2 + cells_d(rng) % 7;
    const YoungParams p{cells * g.dx(), f_d(rng), lam_d(rng)};
    const auto two = forward_young(p, g);
    const auto one = forward_young_classical(p, g);
    const auto xs = two.grid.coords();
    const double t2 = fringe_period(xs, two.values);
    const double t1 = fringe_period(xs, one.values);
    worst_ratio = std::max(worst_ratio, std::abs(t2 / t1 - 0.5));
    worst_period = std::max({worst_period, std::abs(t2 / young_two_photon_period(p) - 1),
                             std::abs(t1 / young_classical_period(p) - 1)});
  }
  return {worst_ratio <= 0.005 && worst_period <= 0.005,
          fmt::format("max |ratio - 0.5| = {:.2e} (tol 5e-3), max period rel err = {:.2e} (tol 5e-3)", worst_ratio,
                      worst_period)};
}

Outcome young_equivalence() {
  const Grid1D g(1024, 2e-5);
  // 16 cells: 1024 / 64 = 16 detection samples per fringe
  const YoungParams p{16 * g.dx(), 0.05, 7.8e-7};
  const double delta = forward_vs_reversed_young(p, g).max_rel_err;
  const double wide = forward_vs_reversed_young(p, g, 4 * g.dx()).max_rel_err;
  return {delta <= 1e-6 && wide <= 1e-6,
          fmt::format("delta slits {:.2e}, 4-cell slits {:.2e} (tol 1e-6)", delta, wide)};
}

template <class F>
std::vector<double> sample(const std::vector<double>& xs, F&& fn) {
  std::vector<double> v;
  for (double x : xs) v.push_back(fn(x));
  return v;
}

Outcome lateral_widths() {
  const auto rs = linspace(-4e-6, 4e-6, 8001);
  const double w2 = fwhm(rs, sample(rs, [](double r) { return spot_lateral(r, kFocus, SpotKind::two_photon); }));
  const double w1 = fwhm(rs, sample(rs, [](double r) { return spot_lateral(r, kFocus, SpotKind::classical); }));
  const double unit = kFocus.lambda * kFocus.f / (kPi * kFocus.D);
  const double e2 = std::abs(w2 / (1.62 * unit) - 1);
  const double e1 = std::abs(w1 / (3.23 * unit) - 1);
  return {e2 <= 5e-3 && e1 <= 5e-3,
          fmt::format("two-photon {:.4f} um (rel err {:.2e}), classical {:.4f} um (rel err {:.2e}), tol 5e-3",
                      w2 * 1e6, e2, w1 * 1e6, e1)};
}

Outcome axial_width() {
  const auto zs = linspace(-1.5e-4, 1.5e-4, 6001);
  const double w = fwhm(zs, sample(zs, [](double z) {
                          return spot_axial(z, kFocus, SpotKind::two_photon, AxialPrefactor::frozen);
                        }));
  const double unit = kFocus.lambda * kFocus.f * kFocus.f / (kPi * kFocus.D * kFocus.D);
  const double e = std::abs(w / (11.1 * unit) - 1);
  return {e <= 1e-2, fmt::format("two-photon {:.3f} um, rel err {:.2e} (tol 1e-2)", w * 1e6, e)};
}

Outcome offaxis_oracle() {
  const double R = kFocus.D / 2;
  std::vector<double> lib, ref;
  for (double r0 : {0.0, 0.25e-6, 0.5e-6, 0.75e-6, 1.0e-6})
    for (double z0 : {-40e-6, -20e-6, 0.0, 20e-6, 40e-6}) {
      lib.push_back(spot_offaxis_two_photon(r0, z0, kFocus));
      // brute-force sum on the unit disk, rescaled
      const double a = 2 * kPi * z0 / (kFocus.f * kFocus.f * kFocus.lambda) * R * R;
      const double b = 4 * kPi * r0 / (kFocus.f * kFocus.lambda) * R;
      const Complex I = oracle::disk_integral_2d(1.0, a, b, 8000, 400) * (R * R);
      ref.push_back(std::pow(kFocus.f + z0, 4) * std::norm(I));
    }
  const double peak = *std::max_element(ref.begin(), ref.end());
  double err = 0;
  for (std::size_t i = 0; i < lib.size(); ++i) err = std::max(err, std::abs(lib[i] - ref[i]) / peak);
  return {err <= 1e-6, fmt::format("5x5 lattice max |lib - oracle| / max = {:.2e} (tol 1e-6)", err)};
}

Outcome appendix_chains() {
  // Young: slit-plane cell of 25 um, so x1 = 20 cells
  const YoungParams yp{5e-4, 0.05, 7.8e-7};
  const std::size_t ny = 1024;
  const Grid1D src(ny, yp.f * yp.lambda / (ny * 25e-6));
  std::vector<double> num, ref;
  for (int k = -5; k <= 5; ++k) {
    const double x0 = src.coord(ny / 2 + 2 * k);
    num.push_back(reversed_young_intensity(src, x0, yp));
    ref.push_back(std::norm(std::get<Complex>(appendix_young_field(5, 0.0, x0, yp))));
  }
  const double ey = scaled_linf(num, ref);

  // focus: joint lateral and defocus sweep
  const std::size_t nf = 2048;
  const Grid1D ax(nf, 0.4e-6);
  const Grid2D g{ax, ax};
  num.clear();
  ref.clear();
  for (int k = 0; k <= 10; ++k) {
    const Vec2 r0{ax.coord(nf / 2 + k), 0.0};
    const double z0 = (k - 5) * 10e-6;
    num.push_back(reversed_focus_intensity(g, r0, z0, kFocus));
    ref.push_back(std::norm(std::get<Complex>(appendix_focus_field(5, {0.0, 0.0}, r0, z0, kFocus))));
  }
  const double ef = scaled_linf(num, ref);
  return {ey <= 1e-3 && ef <= 1e-3,
          fmt::format("Young (n={}) {:.2e}, focus (n={}x{}) {:.2e} (tol 1e-3)", ny, ey, nf, nf, ef)};
}

Outcome audit_and_reduction() {
  const auto report = time_reversal_audit(16, 1000, 7);
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto fc = random_coeff(16, seed);
    for (std::size_t s = 0; s < 16; ++s) {
      const auto e = basis_mode(16, s);
      worst = std::max(worst, std::abs(forward_prob_general(fc, e, e) - forward_prob_single(fc, s)));
    }
  }
  return {report.max_ratio_dev <= 1e-9 && worst <= 1e-12,
          fmt::format("audit N=16 trials=1000 max ratio dev {:.2e} (tol 1e-9), equal-mode reduction {:.2e} (tol 1e-12)",
                      report.max_ratio_dev, worst)};
}

Outcome mixtures() {
  using Case = std::pair<FinalMode, FinalMode>;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> u(0.05, 1.0);
  auto vec = [&](std::size_t n) {
    Eigen::VectorXcd v(n);
    for (auto& x : v) x = Complex(gauss(rng), gauss(rng));
    return FinalMode(v.normalized());
  };
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + t % 5;
    const auto fc = random_coeff(n, rng);
    double w[3] = {u(rng), u(rng), u(rng)};
    const double sw = w[0] + w[1] + w[2];
    std::vector<WeightedCase<Case>> mix;
    for (double wi : w) mix.push_back({wi / sw, Case{vec(n), vec(n)}});
    // weights must sum to one within 1e-12; fold the rounding into the last
    mix.back().weight = 1.0 - mix[0].weight - mix[1].weight;
    const double got = mixed_reconstruction<Case>(
        mix, [&](const Case& c) { return forward_prob_general(fc, c.first, c.second); });

    // Tr(rho P), rho the detection-state mixture on the N^2 product space
    const Eigen::VectorXcd pair = oracle::first_quantized_pair(fc.matrix());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n * n, n * n);
    for (const auto& m : mix) {
      const Eigen::VectorXcd d = oracle::first_quantized_detection(m.value.first.psi(), m.value.second.psi());
      rho += m.weight * d * d.adjoint();
    }
    const double want = std::real((rho * pair * pair.adjoint()).trace());
    worst = std::max(worst, std::abs(got - want));
  }
  return {worst <= 1e-12, fmt::format("200 random mixtures, max |mixture - Tr(rho P)| = {:.2e} (tol 1e-12)", worst)};
}

Outcome determinism() {
  const std::vector<nlohmann::json> configs = {
      {{"experiment", "young"},
       {"mode", "compare"},
       {"params", {{"lambda", 7.8e-7}, {"f", 0.05}, {"x1", 1.6e-4}, {"slit_width", 4e-5}}},
       {"sweep", {{"axis", "x0"}, {"start", -4e-5}, {"stop", 4e-5}, {"count", 41}}},
       {"grid", {{"n", 512}, {"dx", 1e-5}}},
       {"seed", 3},
       {"output", "young.csv"}},
      {{"experiment", "modes-audit"},
       {"mode", "forward"},
       {"params", {{"lambda", 7.8e-7}, {"f", 0.05}, {"x1", 5e-4}}},
       {"audit", {{"n", 6}, {"trials", 50}}},
       {"seed", 11},
       {"output", "audit.csv"}}};
  std::string detail;
  bool ok = true;
  for (const auto& j : configs) {
    const auto cfg = parse_config(j);
    const auto a = run(cfg);
    const auto b = run(parse_config(j));
    const bool same = a.csv == b.csv && a.summary.dump() == b.summary.dump();
    ok = ok && same && !a.csv.empty();
    detail += fmt::format("{}{} {} bytes {}", detail.empty() ? "" : ", ", j["experiment"].get<std::string>(),
                          a.csv.size(), same ? "identical" : "DIFFER");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  criterion(1, "Young period halving", 1, period_halving);
  criterion(2, "forward/reversed Young equivalence", 5, young_equivalence);
  criterion(3, "lateral spot FWHM", 1, lateral_widths);
  criterion(4, "axial spot FWHM (frozen prefactor)", 1, axial_width);
  criterion(5, "off-axis radial quadrature vs 2-D disk sum", 30, offaxis_oracle);
  criterion(6, "reversed trains vs closed-form stage-5 fields", 60, appendix_chains);
  criterion(7, "mode audit and equal-mode reduction", 10, audit_and_reduction);
  criterion(8, "mixtures vs density-matrix trace", 5, mixtures);
  criterion(9, "deterministic CSV", 60, determinism);
  fmt::print("{} failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
