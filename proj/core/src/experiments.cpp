#include "lieprop/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lieprop/errors.hpp"
#include "lieprop/parallel.hpp"
#include "lieprop/random.hpp"

namespace lieprop {

namespace {

const Eigen::Vector3d kGravity(0.0, 0.0, -9.82);
const Eigen::Vector3d kMagnetic(0.33, 0.0, -0.95);

constexpr double kMaxExcludedFraction = 1e-3;

const SO3& so3() {
  static const SO3 group;
  return group;
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

struct SampleOutcome {
  bool excluded = false;
  Vector err_plain;  // log(truth^{-1} estimate)
  Vector err_mod;
};

FusionResult fuse_one(ObservationKind kind, const ConcentratedGaussian& prior,
                      const ObservationModelEuclidean& euclidean, const Matrix& group_noise,
                      const GroupElement& truth, double tau, std::uint64_t key) {
  if (kind == ObservationKind::kEuclidean) {
    return fuse_euclidean(so3(), prior, euclidean, observe_euclidean(truth, tau, key));
  }
  return fuse_group(so3(), prior, group_noise, observe_group(truth, tau, key));
}

}  // namespace

std::string to_string(ObservationKind kind) {
  return kind == ObservationKind::kEuclidean ? "euclidean" : "group";
}

ObservationKind parse_observation_kind(const std::string& name) {
  if (name == "euclidean") return ObservationKind::kEuclidean;
  if (name == "group") return ObservationKind::kGroup;
  throw std::invalid_argument("unknown observation model '" + name + "'");
}

std::vector<double> log_tau_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo) || points < 1) {
    throw std::invalid_argument("log_tau_grid: need 0 < lo <= hi and at least one point");
  }
  std::vector<double> out(static_cast<std::size_t>(points));
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < points; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (points - 1));
  out.back() = hi;
  return out;
}

void ExperimentConfig::validate() const {
  if (sample_count < 1) throw std::invalid_argument("ExperimentConfig: sample_count must be >= 1");
  for (double tau : tau_grid) {
    if (!(tau > 0.0)) throw std::invalid_argument("ExperimentConfig: tau must be positive");
  }
}

ConcentratedGaussian build_prior() {
  const Eigen::Vector3d xi(M_PI / 3.0, M_PI / 4.0, M_PI / 6.0);
  return {so3().exp(xi), Matrix(Eigen::Vector3d(0.5, 1.0, 0.8).asDiagonal())};
}

std::optional<std::string> concentration_warning(const ConcentratedGaussian& dist) {
  if (is_concentrated(Vector::Zero(dist.cov.rows()), dist.cov)) return std::nullopt;
  const double spectral =
      Eigen::SelfAdjointEigenSolver<Matrix>(dist.cov, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  std::ostringstream os;
  os << "prior covariance has spectral norm " << spectral << " > " << kConcentrationCovLimit
     << "; the second-order fusion formulas are outside their small-covariance regime";
  return os.str();
}

Vector accel_mag(const GroupElement& R) {
  Vector out(6);
  out << R.transpose() * kGravity, R.transpose() * kMagnetic;
  return out;
}

Matrix accel_mag_covariance(double tau) {
  Vector d(6);
  d << 0.3, 0.3, 0.3, 0.1, 0.1, 0.1;
  return tau * Matrix(d.asDiagonal());
}

Matrix rotation_noise_covariance(double tau) { return 0.3 * tau * Matrix::Identity(3, 3); }

ObservationModelEuclidean accel_mag_model(double tau) {
  return {[](const GroupElement& R) { return accel_mag(R); }, accel_mag_covariance(tau)};
}

Vector observe_euclidean(const GroupElement& R, double tau, std::uint64_t key) {
  NormalStream normal(key);
  return accel_mag(R) + accel_mag_covariance(tau).diagonal().cwiseSqrt().cwiseProduct(normal.next(6));
}

GroupElement observe_group(const GroupElement& R, double tau, std::uint64_t key) {
  NormalStream normal(key);
  return R * so3().exp(std::sqrt(0.3 * tau) * normal.next(3));
}

bool SweepResult::within_exclusion_bound() const {
  for (const auto& r : records) {
    if (static_cast<double>(r.excluded) > kMaxExcludedFraction * static_cast<double>(evaluated)) {
      return false;
    }
  }
  return true;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const ConcentratedGaussian prior = build_prior();
  const std::size_t n = cfg.sample_count;

  SweepResult result;
  result.evaluated = n;
  if (auto w = concentration_warning(prior)) result.warnings.push_back(*w);

  for (std::size_t t = 0; t < cfg.tau_grid.size(); ++t) {
    const auto start = std::chrono::steady_clock::now();
    const double tau = cfg.tau_grid[t];
    const std::vector<GroupElement> truths = sample(so3(), prior, n, derive_seed(cfg.seed, {t})).samples;
    const ObservationModelEuclidean euclidean = accel_mag_model(tau);
    const Matrix group_noise = rotation_noise_covariance(tau);

    std::vector<SampleOutcome> outcomes(n);
    parallel_for(n, [&](std::size_t i) {
      SampleOutcome& o = outcomes[i];
      try {
        const FusionResult f = fuse_one(cfg.kind, prior, euclidean, group_noise, truths[i], tau,
                                        derive_seed(cfg.seed, {t, i}));
        const GroupElement truth_inv = so3().inverse(truths[i]);
        o.err_plain = so3().log(truth_inv * prior.mean * so3().exp(f.m));
        o.err_mod = so3().log(truth_inv * f.posterior.mean);
      } catch (const DomainError&) {
        o.excluded = true;
      }
    });

    // Costs in index order over the kept samples.
    TrialRecord rec;
    rec.tau = tau;
    Vector sum_plain = Vector::Zero(3), sum_mod = Vector::Zero(3);
    double sq_plain = 0.0, sq_mod = 0.0, sq2_plain = 0.0, sq2_mod = 0.0;
    for (const auto& o : outcomes) {
      if (o.excluded) {
        ++rec.excluded;
        continue;
      }
      sum_plain += o.err_plain;
      sum_mod += o.err_mod;
      const double a = o.err_plain.squaredNorm(), b = o.err_mod.squaredNorm();
      sq_plain += a;
      sq_mod += b;
      sq2_plain += a * a;
      sq2_mod += b * b;
    }
    const double kept = static_cast<double>(n - rec.excluded);
    if (kept > 0) {
      rec.c1_plain = (sum_plain / kept).squaredNorm();
      rec.c1_mod = (sum_mod / kept).squaredNorm();
      rec.c2_plain = sq_plain / kept;
      rec.c2_mod = sq_mod / kept;
      if (kept > 1) {
        auto se = [kept](double s, double s2) {
          const double var = std::max(0.0, (s2 - s * s / kept) / (kept - 1.0));
          return std::sqrt(var / kept);
        };
        rec.c2_plain_se = se(sq_plain, sq2_plain);
        rec.c2_mod_se = se(sq_mod, sq2_mod);
      }
    } else {
      rec.c1_plain = rec.c1_mod = rec.c2_plain = rec.c2_mod = std::nan("");
    }
    if (cfg.timing) {
      rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                        .count();
    }
    result.excluded += rec.excluded;
    result.records.push_back(rec);
  }
  return result;
}

void emit_csv(const std::vector<TrialRecord>& records, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << "tau,c1_plain,c1_mod,c2_plain,c2_mod,wall_ms\n";
  for (const auto& r : records) {
    os << csv_number(r.tau) << ',' << csv_number(r.c1_plain) << ',' << csv_number(r.c1_mod) << ','
       << csv_number(r.c2_plain) << ',' << csv_number(r.c2_mod) << ',' << csv_number(r.wall_ms)
       << '\n';
  }
  if (!os.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

void emit_gnuplot(const std::string& csv_path, const std::string& script_path,
                  ObservationKind kind) {
  std::ofstream os(script_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + script_path + "' for writing");
  const std::string base = csv_path.substr(0, csv_path.rfind('.'));
  os << "# fusion cost sweep, " << to_string(kind) << " observation model\n"
     << "set datafile separator ','\n"
     << "set key top left autotitle columnhead\n"
     << "set logscale xy\n"
     << "set xlabel 'tau'\n"
     << "set grid\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output '" << base << "_c1.png'\n"
     << "set ylabel 'c1'\n"
     << "plot '" << csv_path << "' using 1:2 with linespoints title 'plain', \\\n"
     << "     '' using 1:3 with linespoints title 'modified'\n"
     << "set output '" << base << "_c2.png'\n"
     << "set ylabel 'c2'\n"
     << "plot '" << csv_path << "' using 1:4 with linespoints title 'plain', \\\n"
     << "     '' using 1:5 with linespoints title 'modified'\n";
  if (!os.flush()) throw std::runtime_error("write to '" + script_path + "' failed");
}

}  // namespace lieprop
