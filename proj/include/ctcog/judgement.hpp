#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ctcog/linalg.hpp"
#include "ctcog/rng.hpp"

namespace ctcog::sim {

// Stream purposes; subject i draws from substream(seed, purpose, i).
inline constexpr std::uint64_t kTruth = 1;   // pooled truth sheet (also the X sheet unpooled)
inline constexpr std::uint64_t kFlip = 2;    // flips for the pooled / X sheet
inline constexpr std::uint64_t kTruthY = 3;  // unpooled Y sheet
inline constexpr std::uint64_t kFlipY = 4;
inline constexpr std::uint64_t kTruthC = 5;  // unpooled conjunction sheet
inline constexpr std::uint64_t kFlipC = 6;
inline constexpr std::uint64_t kQuantX = 7;  // sampled quantum draws
inline constexpr std::uint64_t kQuantY = 8;
inline constexpr std::uint64_t kQuantSeq = 9;

enum class ScenarioKind { ClassicalJoint, QuantumSequential };
enum class MeasurementOrder { XThenY, YThenX };
enum class Regime { Rational, Noisy, Quantum };

// Joint probability table over two binary events.
struct JointTable {
  double p11 = 0.0;  // x and y
  double p10 = 0.0;  // x only
  double p01 = 0.0;  // y only
  double p00 = 0.0;  // neither

  double px() const { return p11 + p10; }
  double py() const { return p11 + p01; }
  double pxy() const { return p11; }
  double sum() const { return p11 + p10 + p01 + p00; }
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::ClassicalJoint;
  std::string name;
  JointTable joint{};

  // QuantumSequential data; dimension-2 unit vectors.
  la::vec psi;
  la::vec basis_x;
  la::vec basis_y;
  MeasurementOrder order = MeasurementOrder::XThenY;

  double noise_rate = 0.0;  // d in [0, 0.5]
  std::int64_t samples_per_subject = 1;
  std::int64_t cohort_size = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

// One replica: the latent truth of both events plus the recorded readings.
// Readings equal truths until noise is applied.
struct SampleRecord {
  bool x_truth = false;
  bool y_truth = false;
  bool x_read = false;
  bool y_read = false;
  bool conj_read = false;  // reading of the conjunction indicator
};

struct SampleSheet {
  std::vector<SampleRecord> records;
};

// Judged probabilities. Sampled records hold exact integer counts over n, so
// fallacy comparisons never touch floating point; analytic records hold the
// Born-rule values directly.
struct JudgementRecord {
  std::int64_t n = 0;
  std::int64_t count_x = 0;
  std::int64_t count_y = 0;
  std::int64_t count_xy = 0;
  bool analytic = false;
  double px = 0.0;
  double py = 0.0;
  double pxy = 0.0;

  double j_x() const;
  double j_y() const;
  double j_xy() const;
  bool xy_exceeds_x() const;
  bool xy_exceeds_y() const;
  bool conjunction_error() const;  // J_XY > min(J_X, J_Y)
  bool double_error() const;       // J_XY > J_X and J_XY > J_Y
};

struct EventStats {
  double mean = 0.0;      // mean judged probability
  double variance = 0.0;  // population variance of the judgements
  double p_high = 0.0;    // binary-format frequencies
  double p_low = 0.0;
};

struct ConjunctionStats {
  std::size_t cohort = 0;
  std::int64_t n = 0;
  double mean_error_x = 0.0;  // mean of (J_XY - J_X)
  double mean_error_y = 0.0;
  double sd_error_x = 0.0;  // sample standard deviations of the same differences
  double sd_error_y = 0.0;
  double pct_conjunction = 0.0;  // J_XY > min(J_X, J_Y)
  double pct_ranking = 0.0;      // conjunction ranked strictly most probable
  double pct_double = 0.0;       // J_XY above both marginals
  EventStats x, y, xy;
};

enum class ResponseFormat { Deciles, BinaryHighLow, Ranking };

struct BinnedJudgement {
  ResponseFormat format = ResponseFormat::Deciles;
  std::array<int, 3> bins{};    // deciles 0..9, or ranks 1..3 (ties share)
  std::array<char, 3> labels{};  // 'H'/'L' under the binary format
};

struct NoiseOptions {
  // true: flip the recorded conjunction indicator itself (the reading that can
  // produce fallacies); false: conjoin the flipped single-event readings.
  bool flip_conjunction_indicator = true;
};

struct SimOptions {
  bool pooled = true;  // one sheet answers all three queries
  NoiseOptions noise{};
  bool quantum_sampled = false;  // default analytic
  int threads = 1;
};

// Exact joint distribution of the noisy (count_x, count_xy) pair.
struct NoisyCountDistribution {
  std::int64_t n = 0;
  std::vector<std::vector<double>> p;  // p[count_x][count_xy]

  double fallacy_probability() const;  // P(count_xy > count_x)
  double mean_count_diff() const;      // E[count_xy - count_x]
};

std::vector<SampleSheet> draw_cohort(const Scenario& scenario);
JudgementRecord rational_judgement(const SampleSheet& sheet);
JudgementRecord noisy_judgement(const SampleSheet& sheet, double d, SplitMix64& flips,
                                const NoiseOptions& noise = {});
NoisyCountDistribution exact_noisy_distribution(double f_x, double f_xy, double d,
                                                std::int64_t n);
double quantum_event_probability(const la::vec& psi, const std::vector<la::vec>& projectors);
std::vector<JudgementRecord> quantum_judgement(const Scenario& scenario,
                                               const SimOptions& opts = {});
std::vector<JudgementRecord> run_regime(const Scenario& scenario, Regime regime,
                                        const SimOptions& opts = {});
ConjunctionStats conjunction_stats(const std::vector<JudgementRecord>& records);
BinnedJudgement bin_judgement(const JudgementRecord& record, ResponseFormat format);

}  // namespace ctcog::sim
