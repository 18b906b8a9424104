#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lieprop/fusion.hpp"
#include "lieprop/so3.hpp"

namespace lieprop {

enum class ObservationKind { kEuclidean, kGroup };

/// "euclidean" / "group"; parse throws std::invalid_argument on anything else.
std::string to_string(ObservationKind kind);
ObservationKind parse_observation_kind(const std::string& name);

/// `points` values from lo to hi, evenly spaced in log10, lo and hi included.
std::vector<double> log_tau_grid(double lo, double hi, int points);

struct ExperimentConfig {
  ObservationKind kind = ObservationKind::kEuclidean;
  std::size_t sample_count = 10000;
  std::vector<double> tau_grid = log_tau_grid(1e-3, 1.0, 13);
  std::uint64_t seed = 42;
  bool timing = false;  // wall_ms stays 0 otherwise, keeping output reproducible

  void validate() const;
};

/// Attitude prior: mean exp(pi/3, pi/4, pi/6), covariance diag(0.5, 1, 0.8).
ConcentratedGaussian build_prior();

/// Non-empty when the covariance breaks the concentration premise (|cov|_2 > 0.5).
std::optional<std::string> concentration_warning(const ConcentratedGaussian& dist);

/// Noise-free accelerometer/magnetometer readings (R^T g, R^T b).
Vector accel_mag(const GroupElement& R);

/// tau diag(0.3, 0.3, 0.3, 0.1, 0.1, 0.1)
Matrix accel_mag_covariance(double tau);

/// tau diag(0.3, 0.3, 0.3)
Matrix rotation_noise_covariance(double tau);

ObservationModelEuclidean accel_mag_model(double tau);

/// accel_mag(R) + N(0, accel_mag_covariance(tau)); draws come from the
/// stream keyed by `key`.
Vector observe_euclidean(const GroupElement& R, double tau, std::uint64_t key);

/// R exp(r), r ~ N(0, rotation_noise_covariance(tau)).
GroupElement observe_group(const GroupElement& R, double tau, std::uint64_t key);

struct TrialRecord {
  double tau = 0.0;
  double c1_plain = 0.0;
  double c1_mod = 0.0;
  double c2_plain = 0.0;
  double c2_mod = 0.0;
  double wall_ms = 0.0;
  // not written to CSV
  std::size_t excluded = 0;
  double c2_plain_se = 0.0;  // sd of the per-sample squared errors / sqrt(n)
  double c2_mod_se = 0.0;
};

struct SweepResult {
  std::vector<TrialRecord> records;  // ordered by tau ascending
  std::size_t evaluated = 0;
  std::size_t excluded = 0;
  std::vector<std::string> warnings;

  /// At most 0.1% of samples excluded at every tau.
  bool within_exclusion_bound() const;
};

/**
 * For each tau: draw sample_count truths from build_prior(), one observation
 * per truth, fuse it against the prior once, and score both the modified
 * posterior mean mu exp(m') and the plain one mu exp(m) with c1/c2. Truth
 * draws are keyed by (seed, tau index), observation noise by (seed, tau
 * index, sample index). Samples whose update or error log leaves the domain
 * are excluded and counted.
 */
SweepResult run_sweep(const ExperimentConfig& cfg);

/// Header `tau,c1_plain,c1_mod,c2_plain,c2_mod,wall_ms`, one %.17e row per
/// record in tau order. Throws std::runtime_error naming the path on I/O
/// failure.
void emit_csv(const std::vector<TrialRecord>& records, const std::string& path);

/// gnuplot script plotting c1 and c2 against tau (log-log) from `csv_path`.
void emit_gnuplot(const std::string& csv_path, const std::string& script_path,
                  ObservationKind kind);

}  // namespace lieprop
