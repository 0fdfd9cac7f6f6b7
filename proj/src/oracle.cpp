#include "ctcog/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>

#include "ctcog/error.hpp"

namespace ctcog {

namespace {

std::string describe_state_map(const Substrate& in, const Substrate& out,
                               const std::vector<std::size_t>& map,
                               const std::vector<bool>& constrained) {
  std::ostringstream os;
  os << "state map: ";
  std::size_t shown = 0;
  for (std::size_t s = 0; s < map.size() && shown < 16; ++s) {
    if (!constrained[s]) continue;
    if (shown) os << ", ";
    os << in.labels()[s] << "->" << out.labels()[map[s]];
    ++shown;
  }
  if (shown == 0) os << "(empty)";
  std::size_t total = static_cast<std::size_t>(
      std::count(constrained.begin(), constrained.end(), true));
  if (total > shown) os << ", ... (" << total << " states)";
  return os.str();
}

// Classical decision: a constructor is a function on states; it exists iff
// every state covered by inputs has at least one admissible image in the
// intersection of the outputs it must satisfy.
PossibilityVerdict classical_possible(std::span<const std::pair<Attribute, Attribute>> pairs) {
  const Substrate& in = pairs.front().first.substrate();
  const Substrate& out = pairs.front().second.substrate();
  std::size_t n = in.size();
  std::vector<bool> constrained(n, false);
  // admissible[s] = sorted intersection of output member sets required for s
  std::vector<std::vector<std::size_t>> admissible(n);
  for (const auto& [x, y] : pairs) {
    for (std::size_t s : x.members()) {
      if (!constrained[s]) {
        constrained[s] = true;
        admissible[s] = y.members();
      } else {
        std::vector<std::size_t> common;
        std::set_intersection(admissible[s].begin(), admissible[s].end(), y.members().begin(),
                              y.members().end(), std::back_inserter(common));
        admissible[s] = std::move(common);
      }
    }
  }
  PossibilityVerdict v;
  for (std::size_t s = 0; s < n; ++s) {
    if (constrained[s] && admissible[s].empty()) {
      v.possible = false;
      v.reason = "output-conflict";
      v.witness = "state '" + in.labels()[s] + "' has no admissible image";
      return v;
    }
  }
  bool same_substrate = in == out;
  std::vector<std::size_t> map(n, 0);
  for (std::size_t s = 0; s < n; ++s)
    map[s] = constrained[s] ? admissible[s].front() : (same_substrate ? s : 0);
  v.possible = true;
  v.reason = "state-map";
  v.witness = describe_state_map(in, out, map, constrained);
  v.state_map = std::move(map);
  return v;
}

bool all_rank_one(std::span<const std::pair<Attribute, Attribute>> pairs) {
  for (const auto& [x, y] : pairs)
    if (x.dim() != 1 || y.dim() != 1) return false;
  return true;
}

// Exact existence of an isometry V with V u_i ~ v_i (each output fixed up to
// phase): the Gram matrices must agree after conjugation by a diagonal phase
// matrix. Magnitudes must match entrywise and the entry phases must be
// consistent along every connected component of the nonzero-overlap graph.
PossibilityVerdict gram_isometry(std::span<const std::pair<Attribute, Attribute>> pairs,
                                 double tol) {
  std::size_t n = pairs.size();
  std::vector<std::vector<la::cplx>> gin(n, std::vector<la::cplx>(n));
  std::vector<std::vector<la::cplx>> gout(n, std::vector<la::cplx>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      gin[i][j] = la::inner(pairs[i].first.generators()[0], pairs[j].first.generators()[0]);
      gout[i][j] = la::inner(pairs[i].second.generators()[0], pairs[j].second.generators()[0]);
    }
  PossibilityVerdict v;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double min_ = std::abs(gin[i][j]);
      double mout = std::abs(gout[i][j]);
      if (std::abs(min_ - mout) > 2.0 * tol) {
        std::ostringstream os;
        os << "overlap mismatch on pair (" << i << "," << j << "): |<in_i,in_j>| = " << min_
           << " but |<out_i,out_j>| = " << mout;
        v.possible = false;
        v.reason = "gram-mismatch";
        v.witness = os.str();
        v.overlaps.push_back({i, j, min_ * min_});
        return v;
      }
    }
  // Propagate output phases over the nonzero-entry graph and verify closure.
  std::vector<double> theta(n, 0.0);
  std::vector<int> comp(n, -1);
  for (std::size_t root = 0; root < n; ++root) {
    if (comp[root] >= 0) continue;
    comp[root] = static_cast<int>(root);
    theta[root] = 0.0;
    std::vector<std::size_t> queue{root};
    while (!queue.empty()) {
      std::size_t i = queue.back();
      queue.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || std::abs(gin[i][j]) <= tol) continue;
        double delta = std::arg(gin[i][j]) - std::arg(gout[i][j]);
        if (comp[j] < 0) {
          comp[j] = comp[root];
          theta[j] = theta[i] + delta;
          queue.push_back(j);
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      la::cplx phase = std::polar(1.0, theta[j] - theta[i]);
      if (std::abs(gin[i][j] - phase * gout[i][j]) > 4.0 * tol) {
        v.possible = false;
        v.reason = "phase-obstruction";
        v.witness = "gram matrices agree in magnitude but not up to diagonal phases";
        return v;
      }
    }
  v.possible = true;
  v.reason = "gram-match";
  v.witness = "isometry on attribute generators: gram matrices agree up to output phases";
  return v;
}

PossibilityVerdict quantum_general(std::span<const std::pair<Attribute, Attribute>> pairs,
                                   double tol) {
  if (all_rank_one(pairs)) return gram_isometry(pairs, tol);
  // Blockwise criterion: orthogonal inputs can be mapped isometrically into
  // orthogonal outputs whenever each block fits.
  bool in_orth = true, out_orth = true;
  for (std::size_t i = 0; i < pairs.size() && (in_orth || out_orth); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      if (!orthogonal(pairs[i].first, pairs[j].first)) in_orth = false;
      if (!pairs[i].second.is_empty() && !pairs[j].second.is_empty() &&
          !orthogonal(pairs[i].second, pairs[j].second))
        out_orth = false;
    }
  if (!in_orth || !out_orth)
    raise(Errc::UnsupportedTaskShape,
          "general quantum task with non-orthogonal attributes of rank > 1 is outside the "
          "decidable criteria");
  PossibilityVerdict v;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first.dim() > pairs[i].second.dim()) {
      v.possible = false;
      v.reason = "dimension-obstruction";
      v.witness = "pair " + std::to_string(i) + ": input subspace of dimension " +
                  std::to_string(pairs[i].first.dim()) + " cannot embed into dimension " +
                  std::to_string(pairs[i].second.dim());
      return v;
    }
  }
  v.possible = true;
  v.reason = "blockwise-isometry";
  v.witness = "orthogonal blocks map isometrically into their targets";
  return v;
}

PossibilityVerdict orthogonality_report(const Variable& v, const std::string& possible_reason,
                                        const std::string& possible_witness) {
  PossibilityVerdict verdict;
  double tol = v.substrate().tolerance();
  bool ok = true;
  double worst = 0.0;
  std::size_t wi = 0, wj = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      double ov = max_overlap(v.at(i), v.at(j));
      verdict.overlaps.push_back({i, j, ov});
      if (std::sqrt(ov) > tol) {
        ok = false;
        if (ov > worst) {
          worst = ov;
          wi = i;
          wj = j;
        }
      }
    }
  verdict.possible = ok;
  if (ok) {
    verdict.reason = possible_reason;
    verdict.witness = possible_witness;
  } else {
    std::ostringstream os;
    os << "attributes '" << v.at(wi).name() << "' and '" << v.at(wj).name()
       << "' overlap: squared overlap " << worst;
    verdict.reason = "nonorthogonal-pair";
    verdict.witness = os.str();
  }
  return verdict;
}

}  // namespace

PossibilityVerdict is_possible_pairs(std::span<const std::pair<Attribute, Attribute>> pairs) {
  if (pairs.empty()) raise(Errc::EmptyTask, "no pairs to decide");
  const Substrate& in = pairs.front().first.substrate();
  for (const auto& [x, y] : pairs) {
    if (!(x.substrate() == in))
      raise(Errc::SubstrateMismatch, "pairs mix input substrates");
    if (!(y.substrate() == pairs.front().second.substrate()))
      raise(Errc::SubstrateMismatch, "pairs mix output substrates");
  }
  if (in.kind() == BackendKind::Classical) return classical_possible(pairs);
  return quantum_general(pairs, in.tolerance());
}

PossibilityVerdict is_possible(const Task& task) {
  if (task.input_substrate().kind() == BackendKind::Classical)
    return classical_possible(task.pairs());
  switch (task.family()) {
    case TaskFamily::Cloning:
      return orthogonality_report(*task.source(), "orthogonal",
                                  "pairwise orthogonal attributes admit a copying isometry");
    case TaskFamily::Distinguishing:
    case TaskFamily::Measuring:
      return orthogonality_report(*task.source(), "orthogonal",
                                  "pairwise orthogonal attributes admit a perfect discriminator");
    case TaskFamily::Preparation: {
      // Orthogonal labels steer a controlled preparation regardless of the
      // prepared attributes' mutual overlaps.
      PossibilityVerdict v;
      v.possible = true;
      v.reason = "controlled-preparation";
      v.witness = "orthogonal labels select the prepared attribute";
      return v;
    }
    default:
      return quantum_general(task.pairs(), task.input_substrate().tolerance());
  }
}

PossibilityVerdict is_distinguishable(const Variable& v) {
  if (v.substrate().kind() == BackendKind::Classical) {
    PossibilityVerdict verdict;
    verdict.possible = true;  // disjoint subsets map to distinct labels
    verdict.reason = "disjoint-subsets";
    std::ostringstream os;
    os << "label map: ";
    for (std::size_t i = 0; i < v.size(); ++i)
      os << (i ? ", " : "") << v.at(i).name() << "->" << i;
    verdict.witness = os.str();
    return verdict;
  }
  return orthogonality_report(v, "orthogonal", "pairwise orthogonal within tolerance");
}

PossibilityVerdict is_clonable(const Variable& v) {
  if (v.substrate().kind() == BackendKind::Classical) {
    PossibilityVerdict verdict;
    verdict.possible = true;
    verdict.reason = "classical-copy";
    verdict.witness = "state function (x, blank) -> (x, x)";
    return verdict;
  }
  // Clonable exactly when distinguishable; the orthogonality report is the
  // certificate either way.
  return orthogonality_report(v, "orthogonal",
                              "pairwise orthogonal attributes admit a copying isometry");
}

bool is_information_variable(const Variable& v) {
  return is_clonable(v).possible && is_distinguishable(v).possible;
}

bool is_information_medium(const Substrate& s, std::span<const Variable> declared) {
  for (const Variable& v : declared) {
    if (!(v.substrate() == s)) continue;
    if (is_information_variable(v)) return true;
  }
  return false;
}

bool is_observable(const Variable& v) {
  if (!is_information_variable(v))
    raise(Errc::NotInformationVariable,
          "variable '" + v.name() + "' is not an information variable");
  for (const Attribute& a : v.attributes())
    if (!(bar(bar(a)) == a)) return false;
  return true;
}

namespace {

bool mutually_disjoint(const Variable& x, const Variable& y) {
  for (const Attribute& a : x.attributes())
    for (const Attribute& b : y.attributes())
      if (!disjoint(a, b)) return false;
  return true;
}

}  // namespace

MediumClassification classify_medium(const Substrate& s, std::span<const Variable> declared) {
  MediumClassification out;
  std::vector<const Variable*> on_medium;
  for (const Variable& v : declared) {
    if (!(v.substrate() == s))
      raise(Errc::SubstrateMismatch,
            "variable '" + v.name() + "' is not declared on substrate '" + s.name() + "'");
    on_medium.push_back(&v);
    if (!is_information_variable(v)) continue;
    out.information_variables.push_back(v.name());
    if (is_observable(v)) out.observables.push_back(v.name());
  }
  out.is_information_medium = !out.information_variables.empty();
  auto observable = [&](const Variable& v) {
    return std::find(out.observables.begin(), out.observables.end(), v.name()) !=
           out.observables.end();
  };
  for (std::size_t i = 0; i < on_medium.size() && !out.superinformation_witness; ++i) {
    for (std::size_t j = i + 1; j < on_medium.size(); ++j) {
      const Variable& x = *on_medium[i];
      const Variable& y = *on_medium[j];
      if (!observable(x) || !observable(y)) continue;
      if (!mutually_disjoint(x, y)) continue;
      std::vector<Attribute> attrs = x.attributes();
      attrs.insert(attrs.end(), y.attributes().begin(), y.attributes().end());
      Variable joint = make_variable(s, std::move(attrs), x.name() + "|" + y.name());
      if (!is_information_variable(joint)) {
        out.superinformation_witness = std::make_pair(x.name(), y.name());
        break;
      }
    }
  }
  return out;
}

std::vector<double> indistinguishability_signature(const State& state, const Variable& v) {
  if (!(state.substrate() == v.substrate()))
    raise(Errc::SubstrateMismatch, "state and variable live on different substrates");
  if (v.substrate().kind() == BackendKind::Quantum && !v.orthogonal())
    raise(Errc::NotInformationVariable,
          "signatures require pairwise orthogonal attributes");
  std::vector<double> sig;
  sig.reserve(v.size());
  for (const Attribute& a : v.attributes()) {
    if (v.substrate().kind() == BackendKind::Classical)
      sig.push_back(a.contains(state) ? 1.0 : 0.0);
    else
      sig.push_back(la::projection_weight(a.generators(), state.amplitudes()));
  }
  return sig;
}

std::vector<double> indistinguishability_signature(const Attribute& attribute,
                                                   const Variable& v) {
  if (!(attribute.substrate() == v.substrate()))
    raise(Errc::SubstrateMismatch, "attribute and variable live on different substrates");
  if (v.substrate().kind() == BackendKind::Quantum && !v.orthogonal())
    raise(Errc::NotInformationVariable,
          "signatures require pairwise orthogonal attributes");
  std::vector<double> sig;
  sig.reserve(v.size());
  for (const Attribute& a : v.attributes()) {
    if (v.substrate().kind() == BackendKind::Classical) {
      sig.push_back(a.contains(attribute) ? 1.0 : 0.0);
    } else {
      // mean squared projection weight over the attribute's generators
      double w = 0.0;
      for (const la::vec& g : attribute.generators())
        w += la::projection_weight(a.generators(), g);
      sig.push_back(w / static_cast<double>(attribute.dim()));
    }
  }
  return sig;
}

}  // namespace ctcog
