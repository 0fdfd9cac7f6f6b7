#include "ctcog/task.hpp"

#include <algorithm>

#include "ctcog/error.hpp"

namespace ctcog {

Task make_task(std::vector<std::pair<Attribute, Attribute>> pairs, std::string label,
               TaskFamily family, std::optional<Variable> source) {
  if (pairs.empty()) raise(Errc::EmptyTask, "task '" + label + "' has no pairs");
  const Substrate& in = pairs.front().first.substrate();
  const Substrate& out = pairs.front().second.substrate();
  for (const auto& [x, y] : pairs) {
    if (x.is_empty())
      raise(Errc::EmptyAttribute, "task '" + label + "' has an empty input attribute");
    if (!(x.substrate() == in))
      raise(Errc::SubstrateMismatch, "task '" + label + "' mixes input substrates");
    if (!(y.substrate() == out))
      raise(Errc::SubstrateMismatch, "task '" + label + "' mixes output substrates");
  }
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      if (!disjoint(pairs[i].first, pairs[j].first))
        raise(Errc::AmbiguousInputs, "task '" + label + "': input attributes '" +
                                         pairs[i].first.name() + "' and '" +
                                         pairs[j].first.name() + "' overlap");
  Task t;
  t.pairs_ = std::move(pairs);
  t.label_ = std::move(label);
  t.input_ = std::make_shared<const Substrate>(in);
  t.output_ = std::make_shared<const Substrate>(out);
  t.family_ = family;
  t.source_ = std::move(source);
  return t;
}

Task identity_task(const Variable& v) {
  std::vector<std::pair<Attribute, Attribute>> pairs;
  pairs.reserve(v.size());
  for (const Attribute& a : v.attributes()) pairs.emplace_back(a, a);
  return make_task(std::move(pairs), "id(" + v.name() + ")", TaskFamily::Identity, v);
}

Task reversible_computation(const Variable& v, std::span<const std::size_t> permutation) {
  if (v.size() < 2)
    raise(Errc::TooFewAttributes, "reversible computation needs at least two attributes");
  if (permutation.size() != v.size())
    raise(Errc::NotAPermutation, "permutation length does not match variable size");
  std::vector<bool> hit(v.size(), false);
  for (std::size_t i : permutation) {
    if (i >= v.size() || hit[i])
      raise(Errc::NotAPermutation, "index list is not a permutation of the variable");
    hit[i] = true;
  }
  std::vector<std::pair<Attribute, Attribute>> pairs;
  pairs.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) pairs.emplace_back(v.at(i), v.at(permutation[i]));
  return make_task(std::move(pairs), "perm(" + v.name() + ")", TaskFamily::ReversibleComputation,
                   v);
}

Task cloning_task(const Variable& v, const Attribute& receptive) {
  if (!(receptive.substrate() == v.substrate()))
    raise(Errc::SubstrateMismatch, "receptive attribute must live on the cloned substrate");
  if (receptive.is_empty()) raise(Errc::EmptyAttribute, "receptive attribute is empty");
  std::vector<std::pair<Attribute, Attribute>> pairs;
  pairs.reserve(v.size());
  for (const Attribute& x : v.attributes())
    pairs.emplace_back(product_attribute(x, receptive), product_attribute(x, x));
  return make_task(std::move(pairs), "clone(" + v.name() + ")", TaskFamily::Cloning, v);
}

namespace {

void require_label_variable(const Variable& labels, const Variable& v, const char* what) {
  if (labels.size() != v.size())
    raise(Errc::LabelCountMismatch,
          std::string(what) + ": " + std::to_string(labels.size()) + " labels for " +
              std::to_string(v.size()) + " attributes");
  if (!labels.orthogonal())
    raise(Errc::InvariantViolation,
          std::string(what) + ": label attributes must be pairwise orthogonal");
}

}  // namespace

Task distinguishing_task(const Variable& v, const Variable& output_labels) {
  require_label_variable(output_labels, v, "distinguishing task");
  std::vector<std::pair<Attribute, Attribute>> pairs;
  pairs.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) pairs.emplace_back(v.at(i), output_labels.at(i));
  return make_task(std::move(pairs), "distinguish(" + v.name() + ")", TaskFamily::Distinguishing,
                   v);
}

Task measuring_task(const Variable& v, const Attribute& receptive,
                    const Variable& output_labels) {
  require_label_variable(output_labels, v, "measuring task");
  if (!(receptive.substrate() == output_labels.substrate()))
    raise(Errc::SubstrateMismatch, "receptive attribute must live on the label substrate");
  std::vector<std::pair<Attribute, Attribute>> pairs;
  pairs.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    pairs.emplace_back(product_attribute(v.at(i), receptive),
                       product_attribute(v.at(i), output_labels.at(i)));
  return make_task(std::move(pairs), "measure(" + v.name() + ")", TaskFamily::Measuring, v);
}

Task preparation_task(const Variable& v, const Attribute& receptive,
                      const Variable& input_labels) {
  require_label_variable(input_labels, v, "preparation task");
  if (!(receptive.substrate() == v.substrate()))
    raise(Errc::SubstrateMismatch, "receptive attribute must live on the prepared substrate");
  std::vector<std::pair<Attribute, Attribute>> pairs;
  pairs.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    pairs.emplace_back(product_attribute(input_labels.at(i), receptive),
                       product_attribute(input_labels.at(i), v.at(i)));
  return make_task(std::move(pairs), "prepare(" + v.name() + ")", TaskFamily::Preparation, v);
}

Task transpose(const Task& t) {
  std::vector<std::pair<Attribute, Attribute>> pairs;
  pairs.reserve(t.size());
  for (const auto& [x, y] : t.pairs()) pairs.emplace_back(y, x);
  return make_task(std::move(pairs), t.label() + "~", TaskFamily::General, std::nullopt);
}

bool relation_equal(const Task& a, const Task& b) {
  if (a.size() != b.size()) return false;
  if (!(a.input_substrate() == b.input_substrate())) return false;
  if (!(a.output_substrate() == b.output_substrate())) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& [x, y] : a.pairs()) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      if (b.pairs()[j].first == x && b.pairs()[j].second == y) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Task networks

struct TaskNetwork::Node {
  enum Kind { Leaf, Serial, Parallel } kind = Leaf;
  std::optional<Task> task;
  std::shared_ptr<const Node> left, right;
  std::shared_ptr<const Substrate> in, out;
};

TaskNetwork::TaskNetwork(Task task) {
  auto node = std::make_shared<Node>();
  node->kind = Node::Leaf;
  node->in = std::make_shared<const Substrate>(task.input_substrate());
  node->out = std::make_shared<const Substrate>(task.output_substrate());
  node->task = std::move(task);
  root_ = std::move(node);
}

const Substrate& TaskNetwork::input_substrate() const noexcept { return *root_->in; }
const Substrate& TaskNetwork::output_substrate() const noexcept { return *root_->out; }

namespace {

Task flatten_node(const TaskNetwork::Node& node);

Task flatten_serial(const Task& first, const Task& then) {
  std::vector<std::pair<Attribute, Attribute>> pairs;
  for (const auto& [x, y] : first.pairs()) {
    for (const auto& [u, v] : then.pairs()) {
      if (u.contains(y)) {  // y is a legitimate input of the downstream task
        pairs.emplace_back(x, v);
        break;
      }
    }
  }
  if (pairs.empty())
    raise(Errc::EmptyTask, "serial composition of '" + first.label() + "' and '" + then.label() +
                               "' matches no pairs");
  return make_task(std::move(pairs), "(" + first.label() + ";" + then.label() + ")");
}

Task flatten_parallel(const Task& left, const Task& right) {
  std::vector<std::pair<Attribute, Attribute>> pairs;
  pairs.reserve(left.size() * right.size());
  for (const auto& [x, y] : left.pairs())
    for (const auto& [u, v] : right.pairs())
      pairs.emplace_back(product_attribute(x, u), product_attribute(y, v));
  return make_task(std::move(pairs), "(" + left.label() + "||" + right.label() + ")");
}

Task flatten_node(const TaskNetwork::Node& node) {
  switch (node.kind) {
    case TaskNetwork::Node::Leaf:
      return *node.task;
    case TaskNetwork::Node::Serial:
      return flatten_serial(flatten_node(*node.left), flatten_node(*node.right));
    case TaskNetwork::Node::Parallel:
      return flatten_parallel(flatten_node(*node.left), flatten_node(*node.right));
  }
  raise(Errc::InvalidArgument, "corrupt task network");
}

}  // namespace

Task TaskNetwork::flatten() const { return flatten_node(*root_); }

TaskNetwork serial(const TaskNetwork& first, const TaskNetwork& then) {
  if (!(*first.root_->out == *then.root_->in))
    raise(Errc::SubstrateMismatch,
          "serial composition: upstream output substrate differs from downstream input");
  auto node = std::make_shared<TaskNetwork::Node>();
  node->kind = TaskNetwork::Node::Serial;
  node->left = first.root_;
  node->right = then.root_;
  node->in = first.root_->in;
  node->out = then.root_->out;
  TaskNetwork net;
  net.root_ = std::move(node);
  return net;
}

TaskNetwork parallel(const TaskNetwork& left, const TaskNetwork& right) {
  auto node = std::make_shared<TaskNetwork::Node>();
  node->kind = TaskNetwork::Node::Parallel;
  node->left = left.root_;
  node->right = right.root_;
  node->in = std::make_shared<const Substrate>(compose(*left.root_->in, *right.root_->in));
  node->out = std::make_shared<const Substrate>(compose(*left.root_->out, *right.root_->out));
  TaskNetwork net;
  net.root_ = std::move(node);
  return net;
}

}  // namespace ctcog
