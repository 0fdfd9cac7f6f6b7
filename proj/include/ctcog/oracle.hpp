#pragma once

// Decides which tasks are possible on which substrates, and classifies media.
//
// Classical tasks are possible exactly when a total state function realises
// every pair (an ancilla with a fixed initial state adds nothing to that
// criterion, so plain function existence is checked). Quantum verdicts come
// from the named-family criteria (pairwise orthogonality) or, for general
// tasks, from exact linear-isometry existence on the attribute generators.
// Shapes outside those criteria raise UnsupportedTaskShape instead of
// guessing.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctcog/substrate.hpp"
#include "ctcog/task.hpp"

namespace ctcog {

struct OverlapEntry {
  std::size_t i = 0, j = 0;  // attribute indices within the variable
  double overlap = 0.0;      // largest squared generator overlap
};

struct PossibilityVerdict {
  bool possible = false;
  std::string reason;                  // short stable code, e.g. "orthogonal"
  std::optional<std::string> witness;  // construction when possible, counterexample otherwise
  std::vector<OverlapEntry> overlaps;  // pairwise report for quantum variables
  // Classical witnesses: an explicit state map over the input substrate.
  // States outside every legitimate input are left on themselves when the
  // substrates agree (their images are unconstrained).
  std::vector<std::size_t> state_map;
};

struct MediumClassification {
  bool is_information_medium = false;
  std::vector<std::string> information_variables;
  std::vector<std::string> observables;
  // First declared pair (X, Y) of information observables with mutually
  // disjoint attributes whose union is not an information variable.
  std::optional<std::pair<std::string, std::string>> superinformation_witness;
};

PossibilityVerdict is_possible(const Task& task);
// Raw-pair variant; unlike Task construction it tolerates overlapping inputs
// and decides whether a single constructor can still satisfy every pair.
PossibilityVerdict is_possible_pairs(std::span<const std::pair<Attribute, Attribute>> pairs);

PossibilityVerdict is_distinguishable(const Variable& v);
// Clonable iff distinguishable; the verdict carries the orthogonality report.
PossibilityVerdict is_clonable(const Variable& v);

bool is_information_variable(const Variable& v);
bool is_information_medium(const Substrate& s, std::span<const Variable> declared);

// Requires an information variable; true when bar is involutive on every
// attribute.
bool is_observable(const Variable& v);

MediumClassification classify_medium(const Substrate& s, std::span<const Variable> declared);

// Squared projection weights (quantum) or containment indicators (classical)
// of a state against each attribute of an observable-shaped variable.
std::vector<double> indistinguishability_signature(const State& state, const Variable& v);
std::vector<double> indistinguishability_signature(const Attribute& attribute, const Variable& v);

}  // namespace ctcog
