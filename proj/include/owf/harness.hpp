#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "owf/baseline.hpp"
#include "owf/imaging.hpp"
#include "owf/linalg.hpp"
#include "owf/solver.hpp"

namespace owf::harness {

using Rng = std::mt19937_64;

/// splitmix64 finalizer over (master, a, b); per-trial stream seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();
inline constexpr double kOctonionGaussianStd = 0.35355339059327373;  // 1/sqrt(8)

/// x_k with i.i.d. N(0, 1) coefficients, then scaled to unit norm.
OctVector gen_signal(std::size_t n, Rng& rng);

/// m x n matrix with i.i.d. N(0, component_std^2) coefficients.
OctMatrix gen_sensing(std::size_t m, std::size_t n, Rng& rng, double component_std = kOctonionGaussianStd);

/// y_l = |a_l^* x|^2.
std::vector<double> measure(const OctMatrix& a, std::span<const Octonion> x);

/// Adds N(0, |y|^2 10^(-snr/10) / m) noise to every entry and clamps at 0.
/// kNoiseless returns y unchanged.
std::vector<double> add_noise(std::span<const double> y, double snr_db, Rng& rng);

/// 10 log10(peak^2 / MSE) over all samples; +inf for identical images.
double psnr(const SpectralImage& ref, const SpectralImage& rec, double peak = 1.0);

/// m = round(ratio * n), at least 1.
std::size_t measurements_for(double ratio, std::size_t n);

struct ExperimentConfig {
  std::size_t n = 30;
  std::vector<double> ratios;
  int trials = 1;
  std::uint64_t seed = 0;
  /// Empty means a single noiseless cell per ratio.
  std::vector<double> snr_db;
  OwfConfig solver;
  double success_tol = 1e-5;
  /// Worker threads; results do not depend on it.
  int jobs = 1;
  /// Record wall-clock time per trial. Off keeps the outputs reproducible.
  bool timing = false;

  void validate() const;
};

struct TrialRecord {
  std::size_t ratio_index = 0;
  std::size_t snr_index = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  double ratio = 0.0;
  double snr_db = kNoiseless;
  int iters = 0;
  double final_distance = 0.0;
  bool success = false;
  bool diverged = false;
  double wall_ms = 0.0;
};

struct SweepCell {
  double ratio = 0.0;
  double snr_db = kNoiseless;
  std::size_t m = 0;
  int trials = 0;
  double success_rate = 0.0;
  double mean_distance = 0.0;
  double median_distance = 0.0;
  double mean_iters = 0.0;
  double runtime_ms = 0.0;
};

struct SweepResult {
  std::vector<TrialRecord> trials;  // ordered by (ratio, snr, trial)
  std::vector<SweepCell> cells;     // ordered by (ratio, snr)
};

/// One seeded OWF trial. The instance (x, A) depends on (seed, ratio index,
/// trial); the noise on the SNR index as well, so every SNR sees the same
/// instance.
TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t ratio_index, std::size_t snr_index, int trial);

SweepResult success_sweep(const ExperimentConfig& cfg);

/// CSV: seed,n,m,snr_db,iters,final_distance,success,wall_ms
void write_trials_csv(std::ostream& out, std::span<const TrialRecord> rows);
/// CSV: ratio,m,snr_db,trials,success_rate,mean_distance,median_distance,mean_iters,runtime_ms
void write_cells_csv(std::ostream& out, std::span<const SweepCell> cells);

struct ConvergenceResult {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  SolveReport report;
};

/// Single noiseless instance with the distance trace recorded.
ConvergenceResult convergence_trace(std::size_t n, double ratio, std::uint64_t seed, const OwfConfig& solver);

/// CSV: iter,objective,distance
void write_trace_csv(std::ostream& out, const SolveReport& report);

struct AmbiguityProbe {
  int pair = 0;
  double max_abs_deviation = 0.0;  // max_l | |a_l^*(x z)|^2 - |a_l^* x|^2 |
  double max_rel_deviation = 0.0;  // same, divided by max_l |a_l^* x|^2
};

/// For `pairs` seeded (x, z) with |x| = 1 and |z| = 1, compares measurements of
/// x and its entrywise right product x z under one sensing matrix.
std::vector<AmbiguityProbe> ambiguity_probe(std::size_t n, double ratio, int pairs, std::uint64_t seed);

enum class ImageMethod { kOwf, kGd };
ImageMethod parse_image_method(const std::string& s);

struct ImageExperimentConfig {
  double ratio = 20.0;
  ImageMethod method = ImageMethod::kOwf;
  std::uint64_t seed = 0;
  OwfConfig owf;
  baseline::GdConfig gd;
};

struct ImageExperimentResult {
  SpectralImage reconstruction;  // aligned to the reference
  double psnr_db = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  int iterations = 0;
  double final_objective = 0.0;
  double wall_ms = 0.0;
};

/// OWF: x = pack(img), A octonion Gaussian m x n, estimate aligned by
/// phase_align. GD: bands concatenated into x in R^{8n}, A real Gaussian
/// m x 8n, estimate sign-aligned. Both use the same m.
ImageExperimentResult run_image_experiment(const SpectralImage& img, const ImageExperimentConfig& cfg);

/// Smooth synthetic 8-band scene in [0, 1]: a few Gaussian blobs, each with
/// its own spectrum, over a slowly varying background.
SpectralImage synthetic_image(std::uint32_t width, std::uint32_t height, std::uint64_t seed);

/// "a..b" (step 1), "a..b:s", or a comma list; mixed forms allowed.
std::vector<double> parse_number_list(const std::string& spec);

/// Worst-case deviations of the algebra identities over seeded random pairs.
struct AlgebraReport {
  int pairs = 0;
  double norm_mult_rel = 0.0;         // | |ab| - |a||b| | / (|a||b|)
  double left_alternative = 0.0;      // |a(ab) - (aa)b|
  double right_alternative = 0.0;     // |(ba)a - b(aa)|
  double representation = 0.0;        // |aleph(ab) - gimel(a) aleph(b)|
  double gimel_transpose = 0.0;       // |gimel(a)^T - gimel(conj a)|
  double gimel_orthogonality = 0.0;   // |gimel(a)^T gimel(a) - |a|^2 I| / |a|^2
  bool non_associative_triple = false;
  bool anticommuting_units = false;
};

AlgebraReport algebra_report(int pairs, std::uint64_t seed);

}  // namespace owf::harness
