#pragma once

#include <cstddef>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "timerev/errors.hpp"

namespace timerev {

using Complex = std::complex<double>;

// Pair coefficients f(s1, s2) of U a_p^dag(s_i) U^dag over N discrete modes.
// Invariants: f == f^T exactly and 2 * sum |f|^2 == 1 (unit pair-emission probability).
class TwoPhotonCoeff {
 public:
  TwoPhotonCoeff(Eigen::MatrixXcd f, std::string pump_label = "s_i");

  std::size_t modes() const { return static_cast<std::size_t>(f_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return f_; }
  const std::string& pump_label() const { return pump_label_; }

 private:
  Eigen::MatrixXcd f_;
  std::string pump_label_;
};

// Normalized single-photon wavefunction psi_f(s) over N modes.
class FinalMode {
 public:
  explicit FinalMode(Eigen::VectorXcd psi);

  std::size_t modes() const { return static_cast<std::size_t>(psi_.size()); }
  const Eigen::VectorXcd& psi() const { return psi_; }

 private:
  Eigen::VectorXcd psi_;
};

// Per-stream seed derived from a base seed (SplitMix64 finalizer), so trial t draws the
// same numbers whether trials run serially or in parallel.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

TwoPhotonCoeff random_coeff(std::size_t n, std::mt19937_64& rng);
TwoPhotonCoeff random_coeff(std::size_t n, std::uint64_t seed);
FinalMode random_final_mode(std::size_t n, std::mt19937_64& rng);
FinalMode basis_mode(std::size_t n, std::size_t s);

// Two-photon detection in a single mode s_f: 2 |f(s_f, s_f)|^2.
double forward_prob_single(const TwoPhotonCoeff& fc, std::size_t s_f);

// k = [1 + |<psi_f1, psi_f2>|^2]^(-1/2).
double pair_normalization(const FinalMode& f1, const FinalMode& f2);

// Detection in modes psi_f1, psi_f2: 4 k^2 |sum psi_f1*(s1) psi_f2*(s2) f(s1, s2)|^2.
double forward_prob_general(const TwoPhotonCoeff& fc, const FinalMode& f1, const FinalMode& f2);

// Coherent-state reversed system, |alpha|^4 set to 1: |f(s_f, s_f)|^2.
double reversed_intensity_single(const TwoPhotonCoeff& fc, std::size_t s_f);

// Reversed system with conditional SFG: |sum f*(s1, s2) psi_f1(s1) psi_f2(s2)|^2.
double reversed_intensity_conditional(const TwoPhotonCoeff& fc, const FinalMode& f1, const FinalMode& f2);

template <class Case>
struct WeightedCase {
  double weight;
  Case value;
};

// Weights must be nonnegative and sum to 1 within 1e-12.
template <class Case, class Evaluator>
double mixed_reconstruction(std::span<const WeightedCase<Case>> mixture, Evaluator&& evaluate) {
  if (mixture.empty()) throw ConfigError("mixture has no components");
  double total = 0.0;
  for (const auto& c : mixture) {
    if (!(c.weight >= 0.0)) throw ConfigError("mixture weights must be nonnegative");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("mixture weights must sum to 1");
  double sum = 0.0;
  for (const auto& c : mixture) sum += c.weight * evaluate(c.value);
  return sum;
}

struct AuditTrial {
  double forward;
  double reversed;
  double four_k2;
  // |forward / (4 k^2 reversed) - 1|
  double ratio_dev;
};

// Trial t of an audit: draws f, psi_f1, psi_f2 from stream split_seed(seed, t).
AuditTrial audit_trial(std::size_t n, std::uint64_t seed, std::size_t t);

struct AuditReport {
  std::size_t modes;
  std::size_t trials;
  std::uint64_t seed;
  double max_ratio_dev;
  double tolerance;
  bool pass;
};

// For random coefficients and random final-mode pairs, checks that the forward
// probability equals 4 k^2 times the conditional-SFG reversed intensity. Returns the
// largest relative deviation of the ratio from 4 k^2.
AuditReport time_reversal_audit(std::size_t n, std::size_t trials, std::uint64_t seed,
                                double tolerance = 1e-9);

void to_json(nlohmann::json& j, const AuditReport& report);

}  // namespace timerev
