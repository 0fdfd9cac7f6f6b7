#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "ctcog/judgement.hpp"

#include "helpers.hpp"

using namespace ctcog;
using testutil::raises;

namespace {

sim::Scenario joint_scenario(double p11, double p10, double p01, double p00, double d,
                             std::int64_t n, std::int64_t cohort, std::uint64_t seed) {
  sim::Scenario s;
  s.kind = sim::ScenarioKind::ClassicalJoint;
  s.name = "joint";
  s.joint = {p11, p10, p01, p00};
  s.noise_rate = d;
  s.samples_per_subject = n;
  s.cohort_size = cohort;
  s.seed = seed;
  return s;
}

sim::Scenario sequential_scenario(double psi_deg, double x_deg, double y_deg, std::int64_t n,
                                  std::int64_t cohort, std::uint64_t seed) {
  sim::Scenario s;
  s.kind = sim::ScenarioKind::QuantumSequential;
  s.name = "sequential";
  s.psi = la::qubit_at_angle(psi_deg);
  s.basis_x = la::qubit_at_angle(x_deg);
  s.basis_y = la::qubit_at_angle(y_deg);
  s.samples_per_subject = n;
  s.cohort_size = cohort;
  s.seed = seed;
  return s;
}

sim::SampleSheet sheet_from(const std::vector<std::pair<bool, bool>>& truths) {
  sim::SampleSheet sheet;
  for (auto [x, y] : truths) {
    sim::SampleRecord r;
    r.x_truth = r.x_read = x;
    r.y_truth = r.y_read = y;
    r.conj_read = x && y;
    sheet.records.push_back(r);
  }
  return sheet;
}

}  // namespace

TEST_CASE("cohort sampling") {
  sim::Scenario sure = joint_scenario(1, 0, 0, 0, 0, 20, 5, 3);
  for (const sim::SampleSheet& sheet : sim::draw_cohort(sure))
    for (const sim::SampleRecord& r : sheet.records) {
      CHECK(r.x_truth);
      CHECK(r.y_truth);
      CHECK(r.conj_read);
    }

  sim::Scenario s = joint_scenario(0.45, 0.45, 0.05, 0.05, 0, 100000, 1, 99);
  auto once = sim::draw_cohort(s);
  auto twice = sim::draw_cohort(s);
  REQUIRE(once.size() == twice.size());
  std::size_t both = 0;
  for (std::size_t k = 0; k < once[0].records.size(); ++k) {
    CHECK(once[0].records[k].x_truth == twice[0].records[k].x_truth);
    CHECK(once[0].records[k].y_truth == twice[0].records[k].y_truth);
    both += once[0].records[k].x_truth && once[0].records[k].y_truth;
  }
  // p11 = 0.45; three sigma over 1e5 draws
  double frac = static_cast<double>(both) / 100000.0;
  CHECK(std::abs(frac - 0.45) < 3.0 * std::sqrt(0.45 * 0.55 / 100000.0));

  sim::Scenario q = sequential_scenario(0, 45, 90, 10, 1, 1);
  CHECK(raises(Errc::InvalidScenario, [&] { sim::draw_cohort(q); }));
  CHECK(raises(Errc::InvalidScenario,
               [&] { sim::draw_cohort(joint_scenario(1, 0, 0, 0, 0, 0, 1, 1)); }));
  CHECK(raises(Errc::InvariantViolation,
               [&] { sim::draw_cohort(joint_scenario(0.5, 0.1, 0.1, 0.1, 0, 1, 1, 1)); }));
  CHECK(raises(Errc::InvalidNoise,
               [&] { sim::draw_cohort(joint_scenario(1, 0, 0, 0, 0.75, 1, 1, 1)); }));
}

TEST_CASE("rational judgement") {
  sim::SampleSheet sheet = sheet_from({{true, true}, {true, false}, {false, true}, {true, true}});
  sim::JudgementRecord rec = sim::rational_judgement(sheet);
  CHECK(rec.n == 4);
  CHECK(rec.count_x == 3);
  CHECK(rec.count_y == 3);
  CHECK(rec.count_xy == 2);
  CHECK(rec.j_x() == doctest::Approx(0.75));
  CHECK(rec.j_xy() == doctest::Approx(0.5));
  CHECK_FALSE(rec.conjunction_error());

  sim::JudgementRecord sure = sim::rational_judgement(sheet_from({{true, true}, {true, true}}));
  CHECK(sure.j_x() == 1.0);
  CHECK(sure.j_xy() == 1.0);
  CHECK_FALSE(sure.conjunction_error());

  CHECK(raises(Errc::EmptySheet, [&] { sim::rational_judgement(sim::SampleSheet{}); }));
}

TEST_CASE("rational judgements never commit the fallacy") {
  SplitMix64 rng(424242);
  for (int trial = 0; trial < 100; ++trial) {
    double a = rng.next_double(), b = rng.next_double(), c = rng.next_double(),
           e = rng.next_double();
    double z = a + b + c + e;
    sim::Scenario s = joint_scenario(a / z, b / z, c / z, e / z, 0, 40, 25,
                                     rng.next());
    for (const sim::JudgementRecord& rec : sim::run_regime(s, sim::Regime::Rational)) {
      CHECK(rec.count_xy <= std::min(rec.count_x, rec.count_y));
      CHECK_FALSE(rec.conjunction_error());
    }
  }
}

TEST_CASE("noisy judgement") {
  sim::Scenario s = joint_scenario(0.45, 0.45, 0.05, 0.05, 0, 2000, 1, 11);
  sim::SampleSheet sheet = sim::draw_cohort(s)[0];

  SplitMix64 flips = substream(7, sim::kFlip, 0);
  sim::JudgementRecord calm = sim::noisy_judgement(sheet, 0.0, flips);
  sim::JudgementRecord ration = sim::rational_judgement(sheet);
  CHECK(calm.count_x == ration.count_x);
  CHECK(calm.count_y == ration.count_y);
  CHECK(calm.count_xy == ration.count_xy);

  // at d = 1/2 every reading is a coin toss
  sim::Scenario big = joint_scenario(0.45, 0.45, 0.05, 0.05, 0, 100000, 1, 12);
  sim::SampleSheet wide = sim::draw_cohort(big)[0];
  SplitMix64 max_flips = substream(13, sim::kFlip, 0);
  sim::JudgementRecord fuzz = sim::noisy_judgement(wide, 0.5, max_flips);
  double tol = 3.0 * std::sqrt(0.25 / 100000.0);
  CHECK(std::abs(fuzz.j_x() - 0.5) < tol);
  CHECK(std::abs(fuzz.j_y() - 0.5) < tol);
  CHECK(std::abs(fuzz.j_xy() - 0.5) < tol);

  // P(x reads true) = f(1-d) + (1-f)d with f = 0.9, d = 0.25
  sim::Scenario linda = joint_scenario(0.85, 0.05, 0.05, 0.05, 0, 100000, 1, 14);
  sim::SampleSheet lw = sim::draw_cohort(linda)[0];
  SplitMix64 lf = substream(15, sim::kFlip, 0);
  sim::JudgementRecord noisy = sim::noisy_judgement(lw, 0.25, lf);
  CHECK(std::abs(noisy.j_x() - (0.9 * 0.75 + 0.1 * 0.25)) < 3.0 * std::sqrt(0.25 / 100000.0));

  SplitMix64 spare(1);
  CHECK(raises(Errc::InvalidNoise, [&] { sim::noisy_judgement(sheet, 0.7, spare); }));
  CHECK(raises(Errc::EmptySheet, [&] { sim::noisy_judgement(sim::SampleSheet{}, 0.1, spare); }));
}

TEST_CASE("exact noisy count distribution") {
  sim::NoisyCountDistribution clean = sim::exact_noisy_distribution(0.95, 0.90, 0.0, 10);
  CHECK(clean.fallacy_probability() == 0.0);
  for (std::size_t cx = 0; cx < clean.p.size(); ++cx)
    for (std::size_t cc = cx + 1; cc < clean.p[cx].size(); ++cc) CHECK(clean.p[cx][cc] == 0.0);

  // single record, x certain, conjunction never true: overtake needs both flips
  sim::NoisyCountDistribution one = sim::exact_noisy_distribution(1.0, 0.0, 0.25, 1);
  CHECK(one.fallacy_probability() == doctest::Approx(0.0625).epsilon(1e-15));

  // the mean count difference never favours the conjunction
  SplitMix64 rng(5566);
  for (int trial = 0; trial < 50; ++trial) {
    double fx = rng.next_double();
    double fxy = fx * rng.next_double();
    double d = 0.5 * rng.next_double();
    sim::NoisyCountDistribution dist =
        sim::exact_noisy_distribution(fx, fxy, d, 1 + static_cast<std::int64_t>(rng.next() % 20));
    CHECK(dist.mean_count_diff() <= 1e-12);
    double total = 0.0;
    for (const auto& row : dist.p)
      for (double v : row) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }

  // Monte Carlo agreement on the acceptance point
  sim::Scenario s = joint_scenario(0.90, 0.05, 0.0, 0.05, 0.25, 10, 20000, 77);
  std::vector<sim::JudgementRecord> cohort = sim::run_regime(s, sim::Regime::Noisy);
  double exceed = 0.0;
  for (const sim::JudgementRecord& r : cohort) exceed += r.xy_exceeds_x() ? 1.0 : 0.0;
  exceed /= static_cast<double>(cohort.size());
  sim::NoisyCountDistribution oracle = sim::exact_noisy_distribution(0.95, 0.90, 0.25, 10);
  double p = oracle.fallacy_probability();
  CHECK(std::abs(exceed - p) < 3.0 * std::sqrt(p * (1.0 - p) / 20000.0) + 1e-12);

  CHECK(raises(Errc::EnumerationTooLarge,
               [&] { sim::exact_noisy_distribution(0.9, 0.8, 0.1, 21); }));
  CHECK(raises(Errc::InvalidArgument, [&] { sim::exact_noisy_distribution(0.9, 0.8, 0.1, 0); }));
  CHECK(raises(Errc::InvalidArgument, [&] { sim::exact_noisy_distribution(0.5, 0.8, 0.1, 5); }));
  CHECK(raises(Errc::InvalidNoise, [&] { sim::exact_noisy_distribution(0.9, 0.8, 0.9, 5); }));
}

TEST_CASE("quantum event probabilities") {
  la::vec psi = la::qubit_at_angle(0);
  CHECK(sim::quantum_event_probability(psi, {la::qubit_at_angle(90)}) < 1e-30);
  CHECK(sim::quantum_event_probability(psi, {la::qubit_at_angle(0)}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sim::quantum_event_probability(psi, {la::qubit_at_angle(45), la::qubit_at_angle(90)}) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sim::quantum_event_probability(psi, {}) == 1.0);
  CHECK(raises(Errc::DimensionMismatch, [&] {
    sim::quantum_event_probability(psi, {la::basis_vector(3, 0)});
  }));
}

TEST_CASE("quantum judgements") {
  sim::Scenario s = sequential_scenario(0, 45, 90, 100, 10, 7);
  std::vector<sim::JudgementRecord> recs = sim::quantum_judgement(s);
  REQUIRE(recs.size() == 10);
  for (const sim::JudgementRecord& r : recs) {
    CHECK(r.analytic);
    CHECK(r.px == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.py == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.pxy == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.conjunction_error());
    CHECK_FALSE(r.double_error());
  }

  sim::Scenario rev = s;
  rev.order = sim::MeasurementOrder::YThenX;
  CHECK(sim::quantum_judgement(rev)[0].pxy == doctest::Approx(0.0).epsilon(1e-12));

  sim::Scenario aligned = sequential_scenario(0, 0, 0, 10, 1, 1);
  sim::JudgementRecord all = sim::quantum_judgement(aligned)[0];
  CHECK(all.px == doctest::Approx(1.0));
  CHECK(all.py == doctest::Approx(1.0));
  CHECK(all.pxy == doctest::Approx(1.0));

  sim::SimOptions sampled;
  sampled.quantum_sampled = true;
  sim::Scenario wide = sequential_scenario(0, 45, 90, 2000, 50, 21);
  std::vector<sim::JudgementRecord> draws = sim::quantum_judgement(wide, sampled);
  std::int64_t hits = 0, trials = 0;
  for (const sim::JudgementRecord& r : draws) {
    CHECK_FALSE(r.analytic);
    hits += r.count_xy;
    trials += r.n;
  }
  double frac = static_cast<double>(hits) / static_cast<double>(trials);
  CHECK(std::abs(frac - 0.25) < 3.0 * std::sqrt(0.25 * 0.75 / static_cast<double>(trials)));

  CHECK(raises(Errc::InvalidScenario,
               [&] { sim::quantum_judgement(joint_scenario(1, 0, 0, 0, 0, 1, 1, 1)); }));
}

TEST_CASE("regime dispatch") {
  sim::Scenario classical = joint_scenario(0.4, 0.3, 0.2, 0.1, 0.1, 50, 20, 5);
  sim::Scenario quantum = sequential_scenario(0, 45, 90, 50, 20, 5);

  CHECK(raises(Errc::RegimeMismatch, [&] { sim::run_regime(classical, sim::Regime::Quantum); }));
  CHECK(raises(Errc::RegimeMismatch, [&] { sim::run_regime(quantum, sim::Regime::Noisy); }));
  CHECK(raises(Errc::RegimeMismatch, [&] { sim::run_regime(quantum, sim::Regime::Rational); }));

  for (sim::Regime regime : {sim::Regime::Rational, sim::Regime::Noisy}) {
    sim::SimOptions serial, wide;
    wide.threads = 4;
    std::vector<sim::JudgementRecord> a = sim::run_regime(classical, regime, serial);
    std::vector<sim::JudgementRecord> b = sim::run_regime(classical, regime, wide);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].count_x == b[i].count_x);
      CHECK(a[i].count_y == b[i].count_y);
      CHECK(a[i].count_xy == b[i].count_xy);
    }
  }

  sim::SimOptions unpooled;
  unpooled.pooled = false;
  std::vector<sim::JudgementRecord> split = sim::run_regime(classical, sim::Regime::Noisy, unpooled);
  for (const sim::JudgementRecord& r : split) {
    CHECK(r.n == 50);
    CHECK(r.count_x >= 0);
    CHECK(r.count_x <= 50);
    CHECK(r.count_y >= 0);
    CHECK(r.count_y <= 50);
    CHECK(r.count_xy >= 0);
    CHECK(r.count_xy <= 50);
  }
  // the pooled X sheet and flips are shared, so count_x agrees with pooled mode
  std::vector<sim::JudgementRecord> pooled = sim::run_regime(classical, sim::Regime::Noisy);
  REQUIRE(pooled.size() == split.size());
  for (std::size_t i = 0; i < split.size(); ++i) CHECK(split[i].count_x == pooled[i].count_x);

  // conjoined readings make the conjunction a subset of both marginals
  sim::SimOptions conjoin;
  conjoin.noise.flip_conjunction_indicator = false;
  sim::Scenario noisy = joint_scenario(0.85, 0.1, 0.0, 0.05, 0.3, 40, 200, 31);
  for (const sim::JudgementRecord& r : sim::run_regime(noisy, sim::Regime::Noisy, conjoin)) {
    CHECK(r.count_xy <= std::min(r.count_x, r.count_y));
    CHECK_FALSE(r.conjunction_error());
  }
  CHECK(sim::conjunction_stats(sim::run_regime(noisy, sim::Regime::Noisy, conjoin))
            .pct_conjunction == 0.0);
}

TEST_CASE("cohort statistics") {
  sim::JudgementRecord solo;
  solo.n = 100;
  solo.analytic = true;
  solo.px = 0.5;
  solo.py = 0.45;
  solo.pxy = 0.4;
  sim::ConjunctionStats one = sim::conjunction_stats({solo});
  CHECK(one.cohort == 1);
  CHECK(one.mean_error_x == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(one.mean_error_y == doctest::Approx(-0.05).epsilon(1e-12));
  CHECK(one.sd_error_x == 0.0);
  CHECK(one.pct_conjunction == 0.0);
  CHECK(one.x.mean == doctest::Approx(0.5));
  CHECK(one.x.p_high == 0.0);  // exactly one half counts as low

  sim::JudgementRecord flat, tilt;
  flat.n = tilt.n = 10;
  flat.count_x = flat.count_y = flat.count_xy = 5;
  tilt.count_x = 3;
  tilt.count_y = 4;
  tilt.count_xy = 7;
  sim::ConjunctionStats pair = sim::conjunction_stats({flat, tilt});
  CHECK(pair.pct_conjunction == doctest::Approx(0.5));
  CHECK(pair.pct_double == doctest::Approx(0.5));
  CHECK(pair.pct_ranking == doctest::Approx(0.5));
  CHECK(pair.mean_error_x == doctest::Approx((0.0 + 0.4) / 2.0));
  CHECK(pair.sd_error_x ==
        doctest::Approx(std::sqrt((0.04 + 0.04) / 1.0)).epsilon(1e-12));
  CHECK(pair.xy.mean == doctest::Approx(0.6));
  CHECK(pair.xy.variance == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(pair.xy.p_high == doctest::Approx(0.5));

  CHECK(raises(Errc::EmptyCohort, [&] { sim::conjunction_stats({}); }));
  sim::JudgementRecord other = flat;
  other.n = 11;
  CHECK(raises(Errc::InvalidArgument, [&] { sim::conjunction_stats({flat, other}); }));
}

TEST_CASE("binned responses") {
  sim::JudgementRecord rec;
  rec.n = 100;
  rec.analytic = true;
  rec.px = 1.0;
  rec.py = 0.5;
  rec.pxy = 0.73;
  sim::BinnedJudgement dec = sim::bin_judgement(rec, sim::ResponseFormat::Deciles);
  CHECK(dec.bins[0] == 9);
  CHECK(dec.bins[1] == 5);
  CHECK(dec.bins[2] == 7);

  sim::BinnedJudgement bin = sim::bin_judgement(rec, sim::ResponseFormat::BinaryHighLow);
  CHECK(bin.labels[0] == 'H');
  CHECK(bin.labels[1] == 'L');
  CHECK(bin.labels[2] == 'H');

  sim::JudgementRecord counts;
  counts.n = 10;
  counts.count_x = 5;
  counts.count_y = 5;
  counts.count_xy = 3;
  sim::BinnedJudgement rank = sim::bin_judgement(counts, sim::ResponseFormat::Ranking);
  CHECK(rank.bins[0] == 1);
  CHECK(rank.bins[1] == 1);
  CHECK(rank.bins[2] == 3);
  sim::BinnedJudgement cdec = sim::bin_judgement(counts, sim::ResponseFormat::Deciles);
  CHECK(cdec.bins[0] == 5);
  CHECK(cdec.bins[2] == 3);
  sim::BinnedJudgement cbin = sim::bin_judgement(counts, sim::ResponseFormat::BinaryHighLow);
  CHECK(cbin.labels[0] == 'L');  // exactly half the samples

  counts.count_x = 10;
  CHECK(sim::bin_judgement(counts, sim::ResponseFormat::Deciles).bins[0] == 9);
  CHECK(sim::bin_judgement(counts, sim::ResponseFormat::BinaryHighLow).labels[0] == 'H');

  CHECK(raises(Errc::UnknownFormat,
               [&] { sim::bin_judgement(rec, static_cast<sim::ResponseFormat>(99)); }));
}
