#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "timerev/errors.hpp"
#include "timerev/grid_field.hpp"

using namespace timerev;

namespace {

std::vector<Complex> random_amps(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> a(n);
  for (auto& v : a) v = Complex(g(rng), g(rng));
  return a;
}

double rel_l2(const SampledField& a, const SampledField& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("grid coordinates and nearest index") {
  Grid1D g(8, 1.0);
  CHECK(g.center_index() == 4);
  CHECK(g.coord(0) == -4.0);
  CHECK(g.coord(7) == 3.0);
  CHECK(*g.nearest_index(2.4) == 6);
  CHECK(*g.nearest_index(-0.5) == 3);  // tie goes toward -inf
  CHECK_FALSE(g.nearest_index(g.upper_edge() + 1.0).has_value());
  CHECK_THROWS_AS(Grid1D(1, 1.0), DomainError);
  CHECK_THROWS_AS(Grid1D(4, 0.0), DomainError);
  CHECK_THROWS_AS(Grid1D(4, -1.0), DomainError);
  Grid1D shifted(5, 0.5, 2.0);
  CHECK(shifted.coord(2) == doctest::Approx(2.0));
}

TEST_CASE("field construction checks") {
  Grid1D g(4, 1.0);
  CHECK_THROWS_AS(SampledField(g, 1e-6, std::vector<Complex>(3)), IncompatibleError);
  CHECK_THROWS_AS(SampledField(g, -1.0), DomainError);
  std::vector<Complex> bad(4, 1.0);
  bad[2] = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(SampledField(g, 1e-6, bad), NumericalError);
}

TEST_CASE("point source is a discrete delta carrying the requested power") {
  Grid1D g(8, 1.0);
  auto f = point_source(g, 0.0, 1.0, 1e-6);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK((i == 4 ? std::abs(f[i]) > 0 : f[i] == Complex(0.0)));
  CHECK(std::norm(f[4]) * g.dx() == doctest::Approx(1.0).epsilon(1e-15));

  auto f2 = point_source(g, 2.4, 1.0, 1e-6);
  CHECK(std::abs(f2[6]) > 0);
  CHECK_THROWS_AS(point_source(g, g.upper_edge() + 1.0, 1.0, 1e-6), DomainError);
  CHECK(power(point_source(Grid1D(16, 0.3), 0.7, 3.5, 1e-6)) == doctest::Approx(3.5).epsilon(1e-15));

  Grid2D g2{Grid1D(8, 0.5), Grid1D(6, 0.25)};
  auto p2 = point_source(g2, {0.5, -0.25}, 2.0, 1e-6);
  CHECK(power(p2) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::abs(p2[2 * 8 + 5]) > 0);
}

TEST_CASE("power") {
  CHECK(power(SampledField(Grid1D(4, 1.0), 1e-6)) == 0.0);
  std::vector<Complex> a{1.0, 1.0};
  CHECK(power(SampledField(Grid1D(2, 0.5), 1e-6, a)) == doctest::Approx(1.0));
}

TEST_CASE("unitary fourier: delta to flat, Parseval, round trip") {
  std::mt19937_64 rng(11);
  Grid1D g(64, 0.1);
  auto spec = unitary_fourier(point_source(g, 0.0, 1.0, 1e-6));
  const double m0 = std::abs(spec[0]);
  for (std::size_t i = 0; i < spec.size(); ++i) CHECK(std::abs(spec[i]) == doctest::Approx(m0).epsilon(1e-13));
  CHECK(spec.grid1d().dx() == doctest::Approx(2 * oracle::kPi / (64 * 0.1)));

  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 16 + 7 * trial;  // odd and even sizes
    Grid1D gi(n, 0.01 * (1 + trial), 0.03 * trial);
    SampledField f(gi, 5e-7, random_amps(n, rng));
    auto F = unitary_fourier(f);
    CHECK(std::abs(power(F) - power(f)) <= 1e-12 * power(f));
    auto back = inverse_unitary_fourier(F, {gi.center(), 0.0});
    CHECK(back.grid1d().matches(gi));
    CHECK(rel_l2(back, f) <= 1e-12);
  }

  Grid2D g2{Grid1D(12, 0.2), Grid1D(9, 0.3, 0.1)};
  SampledField f2(g2, 5e-7, random_amps(g2.size(), rng));
  auto F2 = unitary_fourier(f2);
  CHECK(std::abs(power(F2) - power(f2)) <= 1e-12 * power(f2));
  CHECK(rel_l2(inverse_unitary_fourier(F2, {0.0, 0.1}), f2) <= 1e-12);
}

TEST_CASE("unitary fourier matches the direct transform sum") {
  std::mt19937_64 rng(3);
  Grid1D g(24, 0.2, 0.35);
  SampledField f(g, 5e-7, random_amps(24, rng));
  auto F = unitary_fourier(f);
  std::vector<Complex> a(f.amplitudes().begin(), f.amplitudes().end());
  const auto xs = g.coords();
  for (std::size_t m = 0; m < F.size(); ++m) {
    const Complex ref = oracle::direct_ft(a, xs, g.dx(), F.grid1d().coord(m));
    CHECK(std::abs(F[m] - ref) <= 1e-12 * (1 + std::abs(ref)));
  }
}

TEST_CASE("gaussian of width sigma maps to width 1/sigma") {
  const double sigma = 0.7;
  Grid1D g(256, 0.05);
  std::vector<Complex> a(256);
  for (std::size_t i = 0; i < 256; ++i) a[i] = std::exp(-g.coord(i) * g.coord(i) / (2 * sigma * sigma));
  auto F = unitary_fourier(SampledField(g, 1e-6, a));
  const auto xs = g.coords();
  for (std::size_t m = 96; m < 160; m += 4) {
    const double k = F.grid1d().coord(m);
    const Complex quad = oracle::direct_ft(a, xs, g.dx(), k);
    const double closed = sigma * std::exp(-k * k * sigma * sigma / 2);
    CHECK(std::abs(F[m] - quad) <= 1e-12);
    CHECK(std::abs(F[m] - closed) <= 1e-9);
  }
}

TEST_CASE("inner product") {
  std::mt19937_64 rng(5);
  Grid1D g(32, 0.1);
  SampledField a(g, 5e-7, random_amps(32, rng));
  SampledField b(g, 5e-7, random_amps(32, rng));
  CHECK(std::real(inner_product(a, a)) == doctest::Approx(power(a)).epsilon(1e-14));
  CHECK(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))) <= 1e-14);
  CHECK(inner_product(point_source(g, 0.0, 1.0, 5e-7), point_source(g, 0.2, 1.0, 5e-7)) == Complex(0.0));
  CHECK_THROWS_AS(inner_product(a, SampledField(Grid1D(32, 0.2), 5e-7)), IncompatibleError);
  CHECK_THROWS_AS(inner_product(a, SampledField(g, 6e-7)), IncompatibleError);
}
