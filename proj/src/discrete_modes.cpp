#include "timerev/discrete_modes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace timerev {

namespace {

Eigen::MatrixXcd complex_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

void check_mode(const TwoPhotonCoeff& fc, std::size_t s) {
  if (s >= fc.modes())
    throw DomainError("mode index " + std::to_string(s) + " out of range for N = " + std::to_string(fc.modes()));
}

void check_modes(const TwoPhotonCoeff& fc, const FinalMode& f1, const FinalMode& f2) {
  if (f1.modes() != fc.modes() || f2.modes() != fc.modes())
    throw IncompatibleError("final modes and coefficients have different mode counts");
}

// sum_{s1,s2} psi_f1*(s1) psi_f2*(s2) f(s1, s2)
Complex projection(const TwoPhotonCoeff& fc, const FinalMode& f1, const FinalMode& f2) {
  return f1.psi().dot(fc.matrix() * f2.psi().conjugate());
}

}  // namespace

TwoPhotonCoeff::TwoPhotonCoeff(Eigen::MatrixXcd f, std::string pump_label)
    : f_(std::move(f)), pump_label_(std::move(pump_label)) {
  if (f_.rows() < 1 || f_.rows() != f_.cols()) throw DomainError("pair coefficients must be a nonempty square matrix");
  if (!f_.allFinite()) throw NumericalError("pair coefficients are not finite");
  if (f_ != f_.transpose()) throw DomainError("pair coefficients violate exchange symmetry");
  const double total = 2.0 * f_.squaredNorm();
  if (std::abs(total - 1.0) > 1e-12)
    throw DomainError("pair coefficients must satisfy 2 sum |f|^2 = 1, got " + std::to_string(total));
}

FinalMode::FinalMode(Eigen::VectorXcd psi) : psi_(std::move(psi)) {
  if (psi_.size() < 1) throw DomainError("final mode needs at least one component");
  if (!psi_.allFinite()) throw NumericalError("final mode is not finite");
  if (std::abs(psi_.norm() - 1.0) > 1e-12) throw DomainError("final mode must have unit norm");
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TwoPhotonCoeff random_coeff(std::size_t n, std::mt19937_64& rng) {
  if (n < 1) throw DomainError("random_coeff needs N >= 1");
  const auto dim = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXcd g = complex_gaussian(dim, dim, rng);
  Eigen::MatrixXcd f = 0.5 * (g + g.transpose());
  f /= std::sqrt(2.0 * f.squaredNorm());
  // Rescaling can leave 2 sum |f|^2 a few ulps from 1; a second pass settles it.
  f /= std::sqrt(2.0 * f.squaredNorm());
  return TwoPhotonCoeff(std::move(f));
}

TwoPhotonCoeff random_coeff(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(split_seed(seed, 0));
  return random_coeff(n, rng);
}

FinalMode random_final_mode(std::size_t n, std::mt19937_64& rng) {
  if (n < 1) throw DomainError("random_final_mode needs N >= 1");
  Eigen::VectorXcd v = complex_gaussian(static_cast<Eigen::Index>(n), 1, rng).col(0);
  v.normalize();
  return FinalMode(std::move(v));
}

FinalMode basis_mode(std::size_t n, std::size_t s) {
  if (s >= n) throw DomainError("basis index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(s)) = 1.0;
  return FinalMode(std::move(v));
}

double forward_prob_single(const TwoPhotonCoeff& fc, std::size_t s_f) {
  check_mode(fc, s_f);
  const auto i = static_cast<Eigen::Index>(s_f);
  return 2.0 * std::norm(fc.matrix()(i, i));
}

double pair_normalization(const FinalMode& f1, const FinalMode& f2) {
  return 1.0 / std::sqrt(1.0 + std::norm(f1.psi().dot(f2.psi())));
}

double forward_prob_general(const TwoPhotonCoeff& fc, const FinalMode& f1, const FinalMode& f2) {
  check_modes(fc, f1, f2);
  const double k = pair_normalization(f1, f2);
  return 4.0 * k * k * std::norm(projection(fc, f1, f2));
}

double reversed_intensity_single(const TwoPhotonCoeff& fc, std::size_t s_f) {
  check_mode(fc, s_f);
  const auto i = static_cast<Eigen::Index>(s_f);
  return std::norm(fc.matrix()(i, i));
}

double reversed_intensity_conditional(const TwoPhotonCoeff& fc, const FinalMode& f1, const FinalMode& f2) {
  check_modes(fc, f1, f2);
  const Complex amp = f1.psi().transpose() * fc.matrix().conjugate() * f2.psi();
  return std::norm(amp);
}

AuditTrial audit_trial(std::size_t n, std::uint64_t seed, std::size_t t) {
  std::mt19937_64 rng(split_seed(seed, t));
  const TwoPhotonCoeff fc = random_coeff(n, rng);
  const FinalMode f1 = random_final_mode(n, rng);
  const FinalMode f2 = random_final_mode(n, rng);
  const double forward = forward_prob_general(fc, f1, f2);
  const double reversed = reversed_intensity_conditional(fc, f1, f2);
  const double k = pair_normalization(f1, f2);
  const double expected = 4.0 * k * k * reversed;
  double dev = 0.0;
  if (expected > 0.0) dev = std::abs(forward / expected - 1.0);
  else if (forward != 0.0) dev = 1.0;
  return {forward, reversed, 4.0 * k * k, dev};
}

AuditReport time_reversal_audit(std::size_t n, std::size_t trials, std::uint64_t seed, double tolerance) {
  if (n < 1) throw ConfigError("audit needs N >= 1");
  if (trials < 1) throw ConfigError("audit needs at least one trial");
  double max_dev = 0.0;
  for (std::size_t t = 0; t < trials; ++t) max_dev = std::max(max_dev, audit_trial(n, seed, t).ratio_dev);
  return {n, trials, seed, max_dev, tolerance, max_dev <= tolerance};
}

void to_json(nlohmann::json& j, const AuditReport& report) {
  j = nlohmann::json{{"N", report.modes},
                     {"trials", report.trials},
                     {"seed", report.seed},
                     {"max_ratio_dev", report.max_ratio_dev},
                     {"tolerance", report.tolerance},
                     {"pass", report.pass}};
}

}  // namespace timerev
