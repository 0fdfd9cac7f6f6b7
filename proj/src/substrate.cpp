#include "ctcog/substrate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ctcog/error.hpp"

namespace ctcog {

namespace {

std::shared_ptr<const Substrate> share(const Substrate& s) {
  return std::make_shared<const Substrate>(s);
}

void require_same_substrate(const Substrate& a, const Substrate& b, const char* what) {
  if (!(a == b)) raise(Errc::SubstrateMismatch, std::string(what) + " live on different substrates");
}

}  // namespace

// ---------------------------------------------------------------------------
// Substrate

Substrate Substrate::classical(std::string name, std::vector<std::string> labels) {
  if (labels.empty()) raise(Errc::InvalidArgument, "classical substrate needs at least one state");
  std::set<std::string_view> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second)
      raise(Errc::InvariantViolation, "duplicate state label '" + l + "'");
  Substrate s;
  s.kind_ = BackendKind::Classical;
  s.name_ = std::move(name);
  s.size_ = labels.size();
  s.labels_ = std::move(labels);
  return s;
}

Substrate Substrate::quantum(std::string name, std::size_t dimension, double tolerance) {
  if (dimension == 0) raise(Errc::InvalidArgument, "quantum substrate needs dimension >= 1");
  if (tolerance <= 0.0) raise(Errc::InvalidArgument, "tolerance must be positive");
  Substrate s;
  s.kind_ = BackendKind::Quantum;
  s.name_ = std::move(name);
  s.size_ = dimension;
  s.tol_ = tolerance;
  return s;
}

const std::vector<std::string>& Substrate::labels() const {
  if (kind_ != BackendKind::Classical)
    raise(Errc::InvalidArgument, "quantum substrates have no state labels");
  return labels_;
}

std::vector<std::size_t> Substrate::factor_sizes() const {
  std::vector<std::size_t> out;
  out.reserve(factors_.size());
  for (const Substrate& f : factors_) out.push_back(f.size());
  return out;
}

std::size_t Substrate::label_index(std::string_view label) const {
  const auto& ls = labels();
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (ls[i] == label) return i;
  raise(Errc::UnresolvedName, "no state labelled '" + std::string(label) + "' on substrate '" +
                                  name_ + "'");
}

bool Substrate::operator==(const Substrate& other) const {
  if (kind_ != other.kind_ || size_ != other.size_) return false;
  if (kind_ == BackendKind::Classical && labels_ != other.labels_) return false;
  if (factors_.size() != other.factors_.size()) return false;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (!(factors_[i] == other.factors_[i])) return false;
  return true;
}

Substrate compose(const Substrate& a, const Substrate& b) {
  if (a.kind() != b.kind())
    raise(Errc::MixedBackends, "cannot compose a classical and a quantum substrate");
  Substrate s;
  s.kind_ = a.kind();
  s.name_ = a.name() + "*" + b.name();
  s.size_ = a.size() * b.size();
  s.tol_ = std::min(a.tolerance(), b.tolerance());
  s.factors_ = {a, b};
  if (a.kind() == BackendKind::Classical) {
    s.labels_.reserve(s.size_);
    for (const auto& la_ : a.labels())
      for (const auto& lb : b.labels()) s.labels_.push_back("(" + la_ + "," + lb + ")");
  }
  return s;
}

std::vector<std::size_t> decompose_index(std::size_t index, std::span<const std::size_t> sizes) {
  std::vector<std::size_t> digits(sizes.size(), 0);
  for (std::size_t k = sizes.size(); k-- > 0;) {
    digits[k] = index % sizes[k];
    index /= sizes[k];
  }
  if (index != 0) raise(Errc::IndexOutOfRange, "composite state index out of range");
  return digits;
}

std::size_t compose_index(std::span<const std::size_t> digits, std::span<const std::size_t> sizes) {
  if (digits.size() != sizes.size())
    raise(Errc::InvalidArgument, "digit count does not match factor count");
  std::size_t index = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (digits[k] >= sizes[k]) raise(Errc::IndexOutOfRange, "factor state index out of range");
    index = index * sizes[k] + digits[k];
  }
  return index;
}

// ---------------------------------------------------------------------------
// Attribute

Attribute Attribute::classical(const Substrate& s, const std::vector<std::string>& member_labels,
                               std::string name) {
  std::vector<std::size_t> members;
  members.reserve(member_labels.size());
  for (const auto& l : member_labels) members.push_back(s.label_index(l));
  return from_indices(s, std::move(members), std::move(name));
}

Attribute Attribute::from_indices(const Substrate& s, std::vector<std::size_t> members,
                                  std::string name) {
  if (s.kind() != BackendKind::Classical)
    raise(Errc::InvalidArgument, "index attributes require a classical substrate");
  if (members.empty()) raise(Errc::EmptyAttribute, "attribute '" + name + "' has no states");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.back() >= s.size())
    raise(Errc::IndexOutOfRange, "attribute state index exceeds substrate size");
  Attribute a;
  a.substrate_ = share(s);
  a.name_ = std::move(name);
  a.members_ = std::move(members);
  return a;
}

Attribute Attribute::quantum(const Substrate& s, std::vector<la::vec> generators,
                             std::string name) {
  if (s.kind() != BackendKind::Quantum)
    raise(Errc::InvalidArgument, "subspace attributes require a quantum substrate");
  if (generators.empty()) raise(Errc::EmptyAttribute, "attribute '" + name + "' has no generators");
  double tol = s.tolerance();
  for (auto& g : generators) {
    if (g.size() != s.size())
      raise(Errc::DimensionMismatch, "generator dimension does not match substrate");
    double n = la::norm(g);
    if (std::abs(n - 1.0) > std::max(tol, 1e-6))
      raise(Errc::InvariantViolation, "generator of '" + name + "' is not unit norm");
    for (auto& x : g) x /= n;
  }
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      if (std::abs(la::inner(generators[i], generators[j])) > tol)
        raise(Errc::InvariantViolation,
              "generators of '" + name + "' are not mutually orthogonal");
  Attribute a;
  a.substrate_ = share(s);
  a.name_ = std::move(name);
  a.generators_ = std::move(generators);
  return a;
}

Attribute Attribute::span(const Substrate& s, const std::vector<la::vec>& generators,
                          std::string name) {
  if (s.kind() != BackendKind::Quantum)
    raise(Errc::InvalidArgument, "subspace attributes require a quantum substrate");
  for (const auto& g : generators)
    if (g.size() != s.size())
      raise(Errc::DimensionMismatch, "generator dimension does not match substrate");
  auto onb = la::orthonormalize(generators, s.tolerance());
  if (onb.empty()) raise(Errc::EmptyAttribute, "attribute '" + name + "' spans nothing");
  Attribute a;
  a.substrate_ = share(s);
  a.name_ = std::move(name);
  a.generators_ = std::move(onb);
  return a;
}

Attribute Attribute::full(const Substrate& s, std::string name) {
  if (s.kind() == BackendKind::Classical) {
    std::vector<std::size_t> all(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) all[i] = i;
    return from_indices(s, std::move(all), std::move(name));
  }
  std::vector<la::vec> gens;
  gens.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) gens.push_back(la::basis_vector(s.size(), i));
  return quantum(s, std::move(gens), std::move(name));
}

Attribute Attribute::empty(const Substrate& s, std::string name) {
  Attribute a;
  a.substrate_ = share(s);
  a.name_ = std::move(name);
  return a;
}

Attribute Attribute::renamed(std::string name) const {
  Attribute a = *this;
  a.name_ = std::move(name);
  return a;
}

std::size_t Attribute::dim() const noexcept {
  return kind() == BackendKind::Classical ? members_.size() : generators_.size();
}

std::vector<std::string> Attribute::member_labels() const {
  std::vector<std::string> out;
  out.reserve(members_.size());
  for (std::size_t i : members_) out.push_back(substrate_->labels()[i]);
  return out;
}

bool Attribute::contains(const State& state) const {
  require_same_substrate(substrate(), state.substrate(), "attribute and state");
  if (kind() == BackendKind::Classical)
    return std::binary_search(members_.begin(), members_.end(), state.index());
  if (is_empty()) return false;
  return la::in_span(generators_, state.amplitudes(), substrate_->tolerance());
}

bool Attribute::contains(const Attribute& other) const {
  require_same_substrate(substrate(), other.substrate(), "attributes");
  if (kind() == BackendKind::Classical)
    return std::includes(members_.begin(), members_.end(), other.members_.begin(),
                         other.members_.end());
  for (const la::vec& g : other.generators_)
    if (!la::in_span(generators_, g, substrate_->tolerance())) return false;
  return true;
}

bool Attribute::operator==(const Attribute& other) const {
  if (!(substrate() == other.substrate())) return false;
  if (kind() == BackendKind::Classical) return members_ == other.members_;
  return dim() == other.dim() && contains(other) && other.contains(*this);
}

bool disjoint(const Attribute& a, const Attribute& b) {
  require_same_substrate(a.substrate(), b.substrate(), "attributes");
  if (a.kind() == BackendKind::Classical) {
    std::vector<std::size_t> common;
    std::set_intersection(a.members().begin(), a.members().end(), b.members().begin(),
                          b.members().end(), std::back_inserter(common));
    return common.empty();
  }
  if (a.is_empty() || b.is_empty()) return true;
  return la::intersection_dim(a.generators(), b.generators(), a.substrate().tolerance()) == 0;
}

bool orthogonal(const Attribute& a, const Attribute& b) {
  require_same_substrate(a.substrate(), b.substrate(), "attributes");
  if (a.kind() == BackendKind::Classical) return disjoint(a, b);
  return la::spans_orthogonal(a.generators(), b.generators(), a.substrate().tolerance());
}

double max_overlap(const Attribute& a, const Attribute& b) {
  require_same_substrate(a.substrate(), b.substrate(), "attributes");
  if (a.kind() == BackendKind::Classical) return disjoint(a, b) ? 0.0 : 1.0;
  double best = 0.0;
  for (const la::vec& x : a.generators())
    for (const la::vec& y : b.generators()) best = std::max(best, std::norm(la::inner(x, y)));
  return best;
}

Attribute bar(const Attribute& x) {
  const Substrate& s = x.substrate();
  std::string name = x.name().empty() ? std::string("~") : "~" + x.name();
  if (s.kind() == BackendKind::Classical) {
    std::vector<std::size_t> rest;
    auto it = x.members().begin();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (it != x.members().end() && *it == i) {
        ++it;
        continue;
      }
      rest.push_back(i);
    }
    if (rest.empty()) return Attribute::empty(s, std::move(name));
    return Attribute::from_indices(s, std::move(rest), std::move(name));
  }
  auto comp = la::orthocomplement(x.generators(), s.size(), s.tolerance());
  if (comp.empty()) return Attribute::empty(s, std::move(name));
  return Attribute::quantum(s, std::move(comp), std::move(name));
}

Attribute attribute_union(const Attribute& a, const Attribute& b) {
  require_same_substrate(a.substrate(), b.substrate(), "attributes");
  std::string name = a.name() + "|" + b.name();
  if (a.is_empty()) return b.renamed(std::move(name));
  if (b.is_empty()) return a.renamed(std::move(name));
  if (a.kind() == BackendKind::Classical) {
    std::vector<std::size_t> members;
    std::set_union(a.members().begin(), a.members().end(), b.members().begin(),
                   b.members().end(), std::back_inserter(members));
    return Attribute::from_indices(a.substrate(), std::move(members), std::move(name));
  }
  std::vector<la::vec> gens = a.generators();
  gens.insert(gens.end(), b.generators().begin(), b.generators().end());
  return Attribute::span(a.substrate(), gens, std::move(name));
}

Attribute product_attribute(const Attribute& a, const Attribute& b) {
  Substrate joined = compose(a.substrate(), b.substrate());
  std::string name = "(" + a.name() + "," + b.name() + ")";
  if (a.is_empty() || b.is_empty()) return Attribute::empty(joined, std::move(name));
  if (a.kind() == BackendKind::Classical) {
    std::vector<std::size_t> members;
    members.reserve(a.dim() * b.dim());
    for (std::size_t i : a.members())
      for (std::size_t j : b.members()) members.push_back(i * b.substrate().size() + j);
    return Attribute::from_indices(joined, std::move(members), std::move(name));
  }
  std::vector<la::vec> gens;
  gens.reserve(a.dim() * b.dim());
  for (const la::vec& x : a.generators())
    for (const la::vec& y : b.generators()) gens.push_back(la::kron(x, y));
  return Attribute::quantum(joined, std::move(gens), std::move(name));
}

// ---------------------------------------------------------------------------
// State

State State::classical(const Substrate& s, std::string_view label) {
  return from_index(s, s.label_index(label));
}

State State::from_index(const Substrate& s, std::size_t index) {
  if (s.kind() != BackendKind::Classical)
    raise(Errc::InvalidArgument, "index states require a classical substrate");
  if (index >= s.size()) raise(Errc::IndexOutOfRange, "state index exceeds substrate size");
  State st;
  st.substrate_ = share(s);
  st.index_ = index;
  return st;
}

State State::quantum(const Substrate& s, la::vec amplitudes) {
  if (s.kind() != BackendKind::Quantum)
    raise(Errc::InvalidArgument, "amplitude states require a quantum substrate");
  if (amplitudes.size() != s.size())
    raise(Errc::DimensionMismatch, "state dimension does not match substrate");
  double n = la::norm(amplitudes);
  if (std::abs(n - 1.0) > std::max(s.tolerance(), 1e-6))
    raise(Errc::InvariantViolation, "quantum state is not unit norm");
  for (auto& x : amplitudes) x /= n;
  State st;
  st.substrate_ = share(s);
  st.amplitudes_ = std::move(amplitudes);
  return st;
}

std::size_t State::index() const {
  if (kind() != BackendKind::Classical)
    raise(Errc::InvalidArgument, "quantum states have no label index");
  return index_;
}

const la::vec& State::amplitudes() const {
  if (kind() != BackendKind::Quantum)
    raise(Errc::InvalidArgument, "classical states have no amplitudes");
  return amplitudes_;
}

std::string State::label() const { return substrate_->labels()[index()]; }

State product_state(const State& a, const State& b) {
  Substrate joined = compose(a.substrate(), b.substrate());
  if (a.kind() == BackendKind::Classical)
    return State::from_index(joined, a.index() * b.substrate().size() + b.index());
  return State::quantum(joined, la::kron(a.amplitudes(), b.amplitudes()));
}

// ---------------------------------------------------------------------------
// Variable

const Attribute& Variable::at(std::size_t i) const {
  if (i >= attributes_.size()) raise(Errc::IndexOutOfRange, "attribute index out of range");
  return attributes_[i];
}

Variable make_variable(const Substrate& s, std::vector<Attribute> attributes, std::string name) {
  if (attributes.empty())
    raise(Errc::InvalidArgument, "variable '" + name + "' needs at least one attribute");
  for (const Attribute& a : attributes) {
    if (!(a.substrate() == s))
      raise(Errc::SubstrateMismatch,
            "attribute '" + a.name() + "' does not live on substrate '" + s.name() + "'");
    if (a.is_empty())
      raise(Errc::EmptyAttribute, "variable '" + name + "' contains an empty attribute");
  }
  bool orth = true;
  for (std::size_t i = 0; i < attributes.size(); ++i)
    for (std::size_t j = i + 1; j < attributes.size(); ++j) {
      if (!disjoint(attributes[i], attributes[j]))
        raise(Errc::OverlappingAttributes, "attributes '" + attributes[i].name() + "' and '" +
                                               attributes[j].name() + "' overlap");
      if (!orthogonal(attributes[i], attributes[j])) orth = false;
    }
  Variable v;
  v.substrate_ = std::make_shared<const Substrate>(s);
  v.name_ = std::move(name);
  v.attributes_ = std::move(attributes);
  v.orthogonal_ = orth;
  return v;
}

std::optional<Attribute> is_sharp(const State& state, const Variable& variable) {
  require_same_substrate(state.substrate(), variable.substrate(), "state and variable");
  for (const Attribute& a : variable.attributes())
    if (a.contains(state)) return a;
  return std::nullopt;
}

Attribute variable_union(const Variable& v) {
  Attribute u = v.attributes().front();
  for (std::size_t i = 1; i < v.size(); ++i) u = attribute_union(u, v.at(i));
  return u.renamed(v.name());
}

bool is_boolean(const Variable& v) {
  if (v.size() != 2) return false;
  return v.at(1) == bar(v.at(0));
}

bool is_maximal(const Variable& v) { return bar(variable_union(v)).is_empty(); }

Variable coarsen(const Variable& v, const std::vector<std::vector<std::size_t>>& partition,
                 std::string name) {
  if (partition.empty()) raise(Errc::InvalidPartition, "partition has no blocks");
  std::vector<bool> used(v.size(), false);
  std::size_t covered = 0;
  std::vector<Attribute> merged;
  merged.reserve(partition.size());
  for (const auto& block : partition) {
    if (block.empty()) raise(Errc::InvalidPartition, "partition contains an empty block");
    std::optional<Attribute> acc;
    for (std::size_t idx : block) {
      if (idx >= v.size()) raise(Errc::InvalidPartition, "partition index out of range");
      if (used[idx]) raise(Errc::InvalidPartition, "partition repeats an attribute");
      used[idx] = true;
      ++covered;
      acc = acc ? attribute_union(*acc, v.at(idx)) : v.at(idx);
    }
    merged.push_back(std::move(*acc));
  }
  if (covered != v.size()) raise(Errc::InvalidPartition, "partition does not cover the variable");
  if (name.empty()) name = v.name() + "/coarse";
  return make_variable(v.substrate(), std::move(merged), std::move(name));
}

Variable lift(const Variable& x, const Variable& y) {
  Substrate joined = compose(x.substrate(), y.substrate());
  std::vector<Attribute> attrs;
  attrs.reserve(x.size() * y.size());
  for (const Attribute& a : x.attributes())
    for (const Attribute& b : y.attributes()) attrs.push_back(product_attribute(a, b));
  return make_variable(joined, std::move(attrs), x.name() + "x" + y.name());
}

// ---------------------------------------------------------------------------
// Marginals

namespace {

void require_composite(const Substrate& s, std::size_t factor_index) {
  if (!s.is_composite())
    raise(Errc::IndexOutOfRange, "marginal requires a composite substrate");
  if (factor_index >= s.factors().size())
    raise(Errc::IndexOutOfRange, "factor index out of range");
}

}  // namespace

Marginal marginal(const State& composite_state, std::size_t factor_index) {
  const Substrate& s = composite_state.substrate();
  require_composite(s, factor_index);
  auto sizes = s.factor_sizes();
  Marginal m;
  m.kind = s.kind();
  if (s.kind() == BackendKind::Classical) {
    m.support = {decompose_index(composite_state.index(), sizes)[factor_index]};
    return m;
  }
  m.density = la::reduced_density(composite_state.amplitudes(), sizes, factor_index);
  return m;
}

Marginal marginal(const Attribute& composite_attribute, std::size_t factor_index) {
  const Substrate& s = composite_attribute.substrate();
  require_composite(s, factor_index);
  if (s.kind() != BackendKind::Classical)
    raise(Errc::InvalidArgument, "quantum marginals are defined for states, not attributes");
  auto sizes = s.factor_sizes();
  std::set<std::size_t> support;
  for (std::size_t idx : composite_attribute.members())
    support.insert(decompose_index(idx, sizes)[factor_index]);
  Marginal m;
  m.kind = BackendKind::Classical;
  m.support.assign(support.begin(), support.end());
  return m;
}

}  // namespace ctcog
