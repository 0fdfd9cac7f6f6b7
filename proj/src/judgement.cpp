#include "ctcog/judgement.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ctcog/error.hpp"

namespace ctcog::sim {

namespace {

// Deterministic per-subject parallelism: every subject writes only its own
// slot, so the schedule can never change a byte of the result.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  std::size_t workers = threads > 1 ? std::min<std::size_t>(threads, count) : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

bool unit_qubit(const la::vec& v) {
  return v.size() == 2 && std::abs(la::norm(v) - 1.0) <= 1e-6;
}

SampleSheet draw_sheet(const Scenario& scenario, std::uint64_t purpose, std::uint64_t subject) {
  SplitMix64 rng = substream(scenario.seed, purpose, subject);
  const JointTable& t = scenario.joint;
  SampleSheet sheet;
  sheet.records.resize(static_cast<std::size_t>(scenario.samples_per_subject));
  for (SampleRecord& r : sheet.records) {
    double u = rng.next_double();
    if (u < t.p11) {
      r.x_truth = r.y_truth = true;
    } else if (u < t.p11 + t.p10) {
      r.x_truth = true;
      r.y_truth = false;
    } else if (u < t.p11 + t.p10 + t.p01) {
      r.x_truth = false;
      r.y_truth = true;
    } else {
      r.x_truth = r.y_truth = false;
    }
    r.x_read = r.x_truth;
    r.y_read = r.y_truth;
    r.conj_read = r.x_truth && r.y_truth;
  }
  return sheet;
}

int decile_bin(const JudgementRecord& r, int event) {
  if (!r.analytic) {
    std::int64_t c = event == 0 ? r.count_x : event == 1 ? r.count_y : r.count_xy;
    return c == r.n ? 9 : static_cast<int>((10 * c) / r.n);
  }
  double f = event == 0 ? r.px : event == 1 ? r.py : r.pxy;
  if (f >= 1.0) return 9;
  return std::clamp(static_cast<int>(f * 10.0), 0, 9);
}

bool binary_high(const JudgementRecord& r, int event) {
  if (!r.analytic) {
    std::int64_t c = event == 0 ? r.count_x : event == 1 ? r.count_y : r.count_xy;
    return 2 * c > r.n;  // exact 1/2 counts as L
  }
  double f = event == 0 ? r.px : event == 1 ? r.py : r.pxy;
  return f > 0.5;
}

// 1 + number of strictly greater judgements; ties share a rank.
std::array<int, 3> competition_ranks(const JudgementRecord& r) {
  auto greater = [&](int a, int b) {
    if (!r.analytic) {
      auto c = [&](int e) { return e == 0 ? r.count_x : e == 1 ? r.count_y : r.count_xy; };
      return c(a) > c(b);
    }
    auto p = [&](int e) { return e == 0 ? r.px : e == 1 ? r.py : r.pxy; };
    return p(a) > p(b);
  };
  std::array<int, 3> ranks{};
  for (int i = 0; i < 3; ++i) {
    int rank = 1;
    for (int j = 0; j < 3; ++j)
      if (j != i && greater(j, i)) ++rank;
    ranks[static_cast<std::size_t>(i)] = rank;
  }
  return ranks;
}

}  // namespace

void Scenario::validate() const {
  if (samples_per_subject < 1)
    raise(Errc::InvalidScenario, "samples_per_subject must be at least 1");
  if (cohort_size < 1) raise(Errc::InvalidScenario, "cohort_size must be at least 1");
  if (!(noise_rate >= 0.0 && noise_rate <= 0.5))
    raise(Errc::InvalidNoise, "noise_rate must lie in [0, 0.5]");
  if (kind == ScenarioKind::ClassicalJoint) {
    const double cells[] = {joint.p11, joint.p10, joint.p01, joint.p00};
    for (double c : cells)
      if (!(c >= 0.0)) raise(Errc::InvalidScenario, "joint table cells must be nonnegative");
    if (std::abs(joint.sum() - 1.0) > 1e-12)
      raise(Errc::InvariantViolation, "joint table must sum to 1 within 1e-12");
  } else {
    if (!unit_qubit(psi)) raise(Errc::InvalidScenario, "psi must be a unit vector of dimension 2");
    if (!unit_qubit(basis_x) || !unit_qubit(basis_y))
      raise(Errc::InvalidScenario, "measurement bases must be unit vectors of dimension 2");
  }
}

double JudgementRecord::j_x() const {
  return analytic ? px : static_cast<double>(count_x) / static_cast<double>(n);
}
double JudgementRecord::j_y() const {
  return analytic ? py : static_cast<double>(count_y) / static_cast<double>(n);
}
double JudgementRecord::j_xy() const {
  return analytic ? pxy : static_cast<double>(count_xy) / static_cast<double>(n);
}
bool JudgementRecord::xy_exceeds_x() const {
  return analytic ? pxy > px : count_xy > count_x;
}
bool JudgementRecord::xy_exceeds_y() const {
  return analytic ? pxy > py : count_xy > count_y;
}
bool JudgementRecord::conjunction_error() const { return xy_exceeds_x() || xy_exceeds_y(); }
bool JudgementRecord::double_error() const { return xy_exceeds_x() && xy_exceeds_y(); }

std::vector<SampleSheet> draw_cohort(const Scenario& scenario) {
  scenario.validate();
  if (scenario.kind != ScenarioKind::ClassicalJoint)
    raise(Errc::InvalidScenario, "cohort sampling needs a classical joint-table scenario");
  std::vector<SampleSheet> cohort(static_cast<std::size_t>(scenario.cohort_size));
  for (std::size_t i = 0; i < cohort.size(); ++i) cohort[i] = draw_sheet(scenario, kTruth, i);
  return cohort;
}

JudgementRecord rational_judgement(const SampleSheet& sheet) {
  if (sheet.records.empty()) raise(Errc::EmptySheet, "cannot judge an empty sample sheet");
  JudgementRecord rec;
  rec.n = static_cast<std::int64_t>(sheet.records.size());
  for (const SampleRecord& r : sheet.records) {
    rec.count_x += r.x_read;
    rec.count_y += r.y_read;
    rec.count_xy += r.x_read && r.y_read;  // pooled records: both hold at once
  }
  return rec;
}

JudgementRecord noisy_judgement(const SampleSheet& sheet, double d, SplitMix64& flips,
                                const NoiseOptions& noise) {
  if (sheet.records.empty()) raise(Errc::EmptySheet, "cannot judge an empty sample sheet");
  if (!(d >= 0.0 && d <= 0.5)) raise(Errc::InvalidNoise, "noise rate must lie in [0, 0.5]");
  JudgementRecord rec;
  rec.n = static_cast<std::int64_t>(sheet.records.size());
  for (const SampleRecord& r : sheet.records) {
    // Three flip draws per record in a fixed order, consumed in both modes so
    // the two conjunction readings can be compared on identical streams.
    bool fx = flips.bernoulli(d);
    bool fy = flips.bernoulli(d);
    bool fc = flips.bernoulli(d);
    bool x_read = r.x_truth != fx;
    bool y_read = r.y_truth != fy;
    bool conj_read = noise.flip_conjunction_indicator ? ((r.x_truth && r.y_truth) != fc)
                                                      : (x_read && y_read);
    rec.count_x += x_read;
    rec.count_y += y_read;
    rec.count_xy += conj_read;
  }
  return rec;
}

double NoisyCountDistribution::fallacy_probability() const {
  double total = 0.0;
  for (std::size_t cx = 0; cx < p.size(); ++cx)
    for (std::size_t cc = cx + 1; cc < p[cx].size(); ++cc) total += p[cx][cc];
  return total;
}

double NoisyCountDistribution::mean_count_diff() const {
  double total = 0.0;
  for (std::size_t cx = 0; cx < p.size(); ++cx)
    for (std::size_t cc = 0; cc < p[cx].size(); ++cc)
      total += (static_cast<double>(cc) - static_cast<double>(cx)) * p[cx][cc];
  return total;
}

NoisyCountDistribution exact_noisy_distribution(double f_x, double f_xy, double d,
                                                std::int64_t n) {
  if (n < 1) raise(Errc::InvalidArgument, "record count must be at least 1");
  if (n > 20) raise(Errc::EnumerationTooLarge, "exact enumeration is bounded at n = 20");
  if (!(f_x >= 0.0 && f_x <= 1.0 && f_xy >= 0.0 && f_xy <= f_x))
    raise(Errc::InvalidArgument, "need 0 <= f_xy <= f_x <= 1");
  if (!(d >= 0.0 && d <= 0.5)) raise(Errc::InvalidNoise, "noise rate must lie in [0, 0.5]");

  // Per-record truth cells: conjunction true implies the single event true.
  const double t11 = f_xy;        // x true, conjunction true
  const double t10 = f_x - f_xy;  // x true, conjunction false
  const double t00 = 1.0 - f_x;   // both false
  auto flip = [&](bool truth, bool read) { return truth == read ? 1.0 - d : d; };
  double q[2][2];  // q[x_read][conj_read]
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      q[a][b] = t11 * flip(true, a) * flip(true, b) + t10 * flip(true, a) * flip(false, b) +
                t00 * flip(false, a) * flip(false, b);

  NoisyCountDistribution dist;
  dist.n = n;
  std::size_t side = static_cast<std::size_t>(n) + 1;
  dist.p.assign(side, std::vector<double>(side, 0.0));
  dist.p[0][0] = 1.0;
  for (std::int64_t rec = 0; rec < n; ++rec) {
    std::vector<std::vector<double>> next(side, std::vector<double>(side, 0.0));
    std::size_t limit = static_cast<std::size_t>(rec) + 1;
    for (std::size_t cx = 0; cx < limit; ++cx)
      for (std::size_t cc = 0; cc < limit; ++cc) {
        double mass = dist.p[cx][cc];
        if (mass == 0.0) continue;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            next[cx + static_cast<std::size_t>(a)][cc + static_cast<std::size_t>(b)] +=
                mass * q[a][b];
      }
    dist.p = std::move(next);
  }
  return dist;
}

double quantum_event_probability(const la::vec& psi, const std::vector<la::vec>& projectors) {
  for (const la::vec& b : projectors)
    if (b.size() != psi.size())
      raise(Errc::DimensionMismatch, "projector dimension does not match the state");
  double p = 1.0;
  const la::vec* current = &psi;
  for (const la::vec& b : projectors) {
    double w = std::norm(la::inner(b, *current));
    p *= w;
    if (p <= 0.0) return 0.0;
    current = &b;  // renormalized collapse of a rank-1 projection
  }
  return p;
}

std::vector<JudgementRecord> quantum_judgement(const Scenario& scenario, const SimOptions& opts) {
  scenario.validate();
  if (scenario.kind != ScenarioKind::QuantumSequential)
    raise(Errc::InvalidScenario, "quantum judgements need a sequential scenario");
  double p_x = std::norm(la::inner(scenario.basis_x, scenario.psi));
  double p_y = std::norm(la::inner(scenario.basis_y, scenario.psi));
  bool x_first = scenario.order == MeasurementOrder::XThenY;
  std::vector<la::vec> sequence = x_first
                                      ? std::vector<la::vec>{scenario.basis_x, scenario.basis_y}
                                      : std::vector<la::vec>{scenario.basis_y, scenario.basis_x};
  double p_xy = quantum_event_probability(scenario.psi, sequence);

  std::vector<JudgementRecord> records(static_cast<std::size_t>(scenario.cohort_size));
  if (!opts.quantum_sampled) {
    JudgementRecord rec;
    rec.n = scenario.samples_per_subject;
    rec.analytic = true;
    rec.px = p_x;
    rec.py = p_y;
    rec.pxy = p_xy;
    std::fill(records.begin(), records.end(), rec);
    return records;
  }

  double p_first = x_first ? p_x : p_y;
  double p_then = std::norm(la::inner(sequence[1], sequence[0]));
  parallel_for(records.size(), opts.threads, [&](std::size_t i) {
    SplitMix64 sx = substream(scenario.seed, kQuantX, i);
    SplitMix64 sy = substream(scenario.seed, kQuantY, i);
    SplitMix64 sc = substream(scenario.seed, kQuantSeq, i);
    JudgementRecord rec;
    rec.n = scenario.samples_per_subject;
    for (std::int64_t k = 0; k < scenario.samples_per_subject; ++k) {
      rec.count_x += sx.bernoulli(p_x);
      rec.count_y += sy.bernoulli(p_y);
      // Fixed two-draw consumption per sequential trial keeps streams aligned.
      bool first = sc.bernoulli(p_first);
      bool second = sc.bernoulli(p_then);
      rec.count_xy += first && second;
    }
    records[i] = rec;
  });
  return records;
}

std::vector<JudgementRecord> run_regime(const Scenario& scenario, Regime regime,
                                        const SimOptions& opts) {
  scenario.validate();
  if (regime == Regime::Quantum) {
    if (scenario.kind != ScenarioKind::QuantumSequential)
      raise(Errc::RegimeMismatch, "the quantum regime needs a sequential scenario");
    return quantum_judgement(scenario, opts);
  }
  if (scenario.kind != ScenarioKind::ClassicalJoint)
    raise(Errc::RegimeMismatch, "classical regimes need a joint-table scenario");

  std::vector<JudgementRecord> records(static_cast<std::size_t>(scenario.cohort_size));
  if (regime == Regime::Rational) {
    // The rational sampler answers every query from its one pooled sheet.
    parallel_for(records.size(), opts.threads, [&](std::size_t i) {
      records[i] = rational_judgement(draw_sheet(scenario, kTruth, i));
    });
    return records;
  }

  double d = scenario.noise_rate;
  parallel_for(records.size(), opts.threads, [&](std::size_t i) {
    SplitMix64 flips = substream(scenario.seed, kFlip, i);
    if (opts.pooled) {
      records[i] = noisy_judgement(draw_sheet(scenario, kTruth, i), d, flips, opts.noise);
      return;
    }
    // Unpooled contrast mode: each query is answered from its own sheet.
    SplitMix64 flips_y = substream(scenario.seed, kFlipY, i);
    SplitMix64 flips_c = substream(scenario.seed, kFlipC, i);
    JudgementRecord a = noisy_judgement(draw_sheet(scenario, kTruth, i), d, flips, opts.noise);
    JudgementRecord b = noisy_judgement(draw_sheet(scenario, kTruthY, i), d, flips_y, opts.noise);
    JudgementRecord c = noisy_judgement(draw_sheet(scenario, kTruthC, i), d, flips_c, opts.noise);
    JudgementRecord rec;
    rec.n = a.n;
    rec.count_x = a.count_x;
    rec.count_y = b.count_y;
    rec.count_xy = c.count_xy;
    records[i] = rec;
  });
  return records;
}

ConjunctionStats conjunction_stats(const std::vector<JudgementRecord>& records) {
  if (records.empty()) raise(Errc::EmptyCohort, "statistics need at least one record");
  for (const JudgementRecord& r : records)
    if (r.n != records.front().n)
      raise(Errc::InvalidArgument, "all records in a cohort must share the same n");

  ConjunctionStats s;
  s.cohort = records.size();
  s.n = records.front().n;
  double m = static_cast<double>(s.cohort);
  double sum_ex = 0.0, sum_ey = 0.0, sum_ex2 = 0.0, sum_ey2 = 0.0;
  double sum_j[3] = {0, 0, 0}, sum_j2[3] = {0, 0, 0};
  double high[3] = {0, 0, 0};
  for (const JudgementRecord& r : records) {
    double ex = r.j_xy() - r.j_x();
    double ey = r.j_xy() - r.j_y();
    sum_ex += ex;
    sum_ex2 += ex * ex;
    sum_ey += ey;
    sum_ey2 += ey * ey;
    double j[3] = {r.j_x(), r.j_y(), r.j_xy()};
    for (int e = 0; e < 3; ++e) {
      sum_j[e] += j[e];
      sum_j2[e] += j[e] * j[e];
      high[e] += binary_high(r, e) ? 1.0 : 0.0;
    }
    s.pct_conjunction += r.conjunction_error() ? 1.0 : 0.0;
    s.pct_double += r.double_error() ? 1.0 : 0.0;
    std::array<int, 3> ranks = competition_ranks(r);
    bool top = ranks[2] == 1 && ranks[0] != 1 && ranks[1] != 1;  // unique top rank
    s.pct_ranking += top ? 1.0 : 0.0;
  }
  s.mean_error_x = sum_ex / m;
  s.mean_error_y = sum_ey / m;
  if (s.cohort > 1) {
    s.sd_error_x = std::sqrt(std::max(0.0, (sum_ex2 - m * s.mean_error_x * s.mean_error_x) /
                                               (m - 1.0)));
    s.sd_error_y = std::sqrt(std::max(0.0, (sum_ey2 - m * s.mean_error_y * s.mean_error_y) /
                                               (m - 1.0)));
  }
  s.pct_conjunction /= m;
  s.pct_ranking /= m;
  s.pct_double /= m;
  EventStats* ev[3] = {&s.x, &s.y, &s.xy};
  for (int e = 0; e < 3; ++e) {
    ev[e]->mean = sum_j[e] / m;
    ev[e]->variance = std::max(0.0, sum_j2[e] / m - ev[e]->mean * ev[e]->mean);
    ev[e]->p_high = high[e] / m;
    ev[e]->p_low = 1.0 - ev[e]->p_high;
  }
  return s;
}

BinnedJudgement bin_judgement(const JudgementRecord& record, ResponseFormat format) {
  BinnedJudgement out;
  out.format = format;
  switch (format) {
    case ResponseFormat::Deciles:
      for (int e = 0; e < 3; ++e) out.bins[static_cast<std::size_t>(e)] = decile_bin(record, e);
      return out;
    case ResponseFormat::BinaryHighLow:
      for (int e = 0; e < 3; ++e)
        out.labels[static_cast<std::size_t>(e)] = binary_high(record, e) ? 'H' : 'L';
      return out;
    case ResponseFormat::Ranking:
      out.bins = competition_ranks(record);
      return out;
  }
  raise(Errc::UnknownFormat, "unrecognized response format");
}

}  // namespace ctcog::sim
