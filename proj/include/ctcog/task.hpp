#pragma once

// Tasks: finite sets of (input attribute -> output attribute) pairs, plus the
// named constructions (cloning, distinguishing, measuring, preparing,
// reversible computation) and serial/parallel composition of task networks.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctcog/substrate.hpp"

namespace ctcog {

// Construction provenance, used by the possibility oracle to pick the right
// decision criterion for the named families.
enum class TaskFamily {
  General,
  Identity,
  ReversibleComputation,
  Cloning,
  Distinguishing,
  Measuring,
  Preparation,
};

class Task {
 public:
  const std::vector<std::pair<Attribute, Attribute>>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  const std::string& label() const noexcept { return label_; }
  const Substrate& input_substrate() const noexcept { return *input_; }
  const Substrate& output_substrate() const noexcept { return *output_; }
  TaskFamily family() const noexcept { return family_; }
  // For the named families: the variable the task was built over.
  const std::optional<Variable>& source() const noexcept { return source_; }

  friend Task make_task(std::vector<std::pair<Attribute, Attribute>> pairs, std::string label,
                        TaskFamily family, std::optional<Variable> source);

 private:
  Task() = default;

  std::vector<std::pair<Attribute, Attribute>> pairs_;
  std::string label_;
  std::shared_ptr<const Substrate> input_;
  std::shared_ptr<const Substrate> output_;
  TaskFamily family_ = TaskFamily::General;
  std::optional<Variable> source_;
};

// Validates: at least one pair, nonempty inputs on one substrate, outputs on
// one substrate, inputs pairwise disjoint (a constructor must act
// unambiguously on any legitimate input).
Task make_task(std::vector<std::pair<Attribute, Attribute>> pairs, std::string label,
               TaskFamily family = TaskFamily::General,
               std::optional<Variable> source = std::nullopt);

Task identity_task(const Variable& v);

// x -> Pi(x) for a permutation Pi of the variable's attributes.
Task reversible_computation(const Variable& v, std::span<const std::size_t> permutation);

// (x, x0) -> (x, x) on the doubled substrate; x0 is the receptive attribute
// of the blank copy.
Task cloning_task(const Variable& v, const Attribute& receptive);

// x -> label_x onto a disjoint output label variable.
Task distinguishing_task(const Variable& v, const Variable& output_labels);

// (x, x0) -> (x, 'x') on compose(source, label substrate): the source keeps
// its attribute while the pointer medium moves off its receptive attribute.
Task measuring_task(const Variable& v, const Attribute& receptive, const Variable& output_labels);

// ('x', x0) -> ('x', x): the mirror image of measuring; labels stay intact
// while the target substrate is driven into the named attribute.
Task preparation_task(const Variable& v, const Attribute& receptive, const Variable& input_labels);

// Reverses every pair; throws AmbiguousInputs if the outputs collide.
Task transpose(const Task& t);

// Same pair set up to attribute equality, ignoring order and labels.
bool relation_equal(const Task& a, const Task& b);

// Acyclic serial/parallel wiring; intensional (the tree is kept) and only
// flattened to a plain task on demand.
class TaskNetwork {
 public:
  explicit TaskNetwork(Task task);

  const Substrate& input_substrate() const noexcept;
  const Substrate& output_substrate() const noexcept;

  // Serial composition matches an upstream output attribute to the unique
  // downstream input attribute containing it; unmatched pairs are dropped,
  // and an entirely unmatched composition is an EmptyTask error.
  Task flatten() const;

  friend TaskNetwork serial(const TaskNetwork& first, const TaskNetwork& then);
  friend TaskNetwork parallel(const TaskNetwork& left, const TaskNetwork& right);

  struct Node;  // exposed for the flattening helpers; opaque to callers

 private:
  TaskNetwork() = default;

  std::shared_ptr<const Node> root_;
};

TaskNetwork serial(const TaskNetwork& first, const TaskNetwork& then);
TaskNetwork parallel(const TaskNetwork& left, const TaskNetwork& right);

inline TaskNetwork serial(const Task& first, const Task& then) {
  return serial(TaskNetwork(first), TaskNetwork(then));
}
inline TaskNetwork parallel(const Task& left, const Task& right) {
  return parallel(TaskNetwork(left), TaskNetwork(right));
}

}  // namespace ctcog
