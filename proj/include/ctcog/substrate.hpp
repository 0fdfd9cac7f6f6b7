#pragma once

// Finite substrates and the attribute/variable layer on top of them.
//
// A substrate is either classical (a finite ordered set of state labels) or
// quantum (a finite-dimensional Hilbert space). An attribute is a set of
// states in which some property is certain: classically a subset of labels,
// quantum-mechanically a subspace held as an orthonormal generating list.
// A variable is an ordered list of pairwise disjoint attributes.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctcog/linalg.hpp"

namespace ctcog {

enum class BackendKind { Classical, Quantum };

class Substrate {
 public:
  static Substrate classical(std::string name, std::vector<std::string> labels);
  static Substrate quantum(std::string name, std::size_t dimension,
                           double tolerance = la::kDefaultTol);

  BackendKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  // Number of classical states, or the Hilbert-space dimension.
  std::size_t size() const noexcept { return size_; }
  double tolerance() const noexcept { return tol_; }
  const std::vector<std::string>& labels() const;  // classical only

  bool is_composite() const noexcept { return !factors_.empty(); }
  const std::vector<Substrate>& factors() const noexcept { return factors_; }
  std::vector<std::size_t> factor_sizes() const;

  std::size_t label_index(std::string_view label) const;  // throws UnresolvedName

  // Structural equality; display names are ignored so that two constructions
  // of "the same" substrate (e.g. both halves of a doubled substrate) agree.
  bool operator==(const Substrate& other) const;

  friend Substrate compose(const Substrate& a, const Substrate& b);

 private:
  Substrate() = default;

  BackendKind kind_ = BackendKind::Classical;
  std::string name_;
  std::vector<std::string> labels_;  // classical; composites get generated labels
  std::size_t size_ = 0;
  double tol_ = la::kDefaultTol;
  std::vector<Substrate> factors_;
};

// Cartesian product (classical) or tensor product (quantum) of two
// substrates of the same backend; throws MixedBackends otherwise.
Substrate compose(const Substrate& a, const Substrate& b);

// Row-major index arithmetic for composite state spaces.
std::vector<std::size_t> decompose_index(std::size_t index, std::span<const std::size_t> sizes);
std::size_t compose_index(std::span<const std::size_t> digits, std::span<const std::size_t> sizes);

class State;

class Attribute {
 public:
  static Attribute classical(const Substrate& s, const std::vector<std::string>& member_labels,
                             std::string name = {});
  static Attribute from_indices(const Substrate& s, std::vector<std::size_t> members,
                                std::string name = {});
  // Validates that the generators are unit norm and mutually orthogonal
  // within the substrate tolerance.
  static Attribute quantum(const Substrate& s, std::vector<la::vec> generators,
                           std::string name = {});
  // Convenience: orthonormalises an arbitrary generating list.
  static Attribute span(const Substrate& s, const std::vector<la::vec>& generators,
                        std::string name = {});
  static Attribute full(const Substrate& s, std::string name = {});
  // The empty attribute is representable only so that `bar` can flag
  // maximality; variable construction rejects it.
  static Attribute empty(const Substrate& s, std::string name = {});

  const Substrate& substrate() const noexcept { return *substrate_; }
  BackendKind kind() const noexcept { return substrate_->kind(); }
  const std::string& name() const noexcept { return name_; }
  Attribute renamed(std::string name) const;

  // Member count (classical) or subspace dimension (quantum).
  std::size_t dim() const noexcept;
  bool is_empty() const noexcept { return dim() == 0; }
  bool is_full() const noexcept { return dim() == substrate_->size(); }

  const std::vector<std::size_t>& members() const noexcept { return members_; }
  std::vector<std::string> member_labels() const;
  const std::vector<la::vec>& generators() const noexcept { return generators_; }

  bool contains(const State& state) const;
  bool contains(const Attribute& other) const;  // subset / subspace containment

  // Set equality (classical) or mutual span containment within tolerance
  // (quantum). Names are ignored.
  bool operator==(const Attribute& other) const;

 private:
  Attribute() = default;

  std::shared_ptr<const Substrate> substrate_;
  std::string name_;
  std::vector<std::size_t> members_;  // classical, sorted and unique
  std::vector<la::vec> generators_;   // quantum, orthonormal
};

// Disjoint = no shared state (classical) / trivial subspace intersection
// (quantum). Orthogonal additionally demands vanishing inner products; for
// classical attributes the two notions coincide.
bool disjoint(const Attribute& a, const Attribute& b);
bool orthogonal(const Attribute& a, const Attribute& b);
// Largest squared generator overlap; 0/1 indicator of intersection for
// classical attributes.
double max_overlap(const Attribute& a, const Attribute& b);

// Union of all attributes distinguishable from x: the set complement
// (classical) or the orthogonal complement (quantum). May be empty.
Attribute bar(const Attribute& x);

Attribute attribute_union(const Attribute& a, const Attribute& b);
// Product attribute on compose(a.substrate(), b.substrate()).
Attribute product_attribute(const Attribute& a, const Attribute& b);

class State {
 public:
  static State classical(const Substrate& s, std::string_view label);
  static State from_index(const Substrate& s, std::size_t index);
  static State quantum(const Substrate& s, la::vec amplitudes);  // must be unit norm

  const Substrate& substrate() const noexcept { return *substrate_; }
  BackendKind kind() const noexcept { return substrate_->kind(); }
  std::size_t index() const;                 // classical
  const la::vec& amplitudes() const;         // quantum
  std::string label() const;                 // classical display label

 private:
  State() = default;

  std::shared_ptr<const Substrate> substrate_;
  std::size_t index_ = 0;
  la::vec amplitudes_;
};

State product_state(const State& a, const State& b);

class Variable {
 public:
  const Substrate& substrate() const noexcept { return *substrate_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
  std::size_t size() const noexcept { return attributes_.size(); }
  const Attribute& at(std::size_t i) const;
  // Pairwise orthogonality of the attributes; classical variables are
  // always orthogonal, quantum ones may be merely disjoint.
  bool orthogonal() const noexcept { return orthogonal_; }

  friend Variable make_variable(const Substrate& s, std::vector<Attribute> attributes,
                                std::string name);

 private:
  Variable() = default;

  std::shared_ptr<const Substrate> substrate_;
  std::string name_;
  std::vector<Attribute> attributes_;
  bool orthogonal_ = true;
};

// Validates that all attributes live on `s`, are nonempty and pairwise
// disjoint; records whether they are also pairwise orthogonal.
Variable make_variable(const Substrate& s, std::vector<Attribute> attributes, std::string name);

// The attribute of the variable the state certainly has, if any.
std::optional<Attribute> is_sharp(const State& state, const Variable& variable);

// Union of all the variable's attributes.
Attribute variable_union(const Variable& v);

// {x, bar(x)} up to attribute equality.
bool is_boolean(const Variable& v);
// bar of the union is empty: no state lies outside every attribute.
bool is_maximal(const Variable& v);

// Merges attribute blocks into a smaller variable. The partition must cover
// 0..size-1 exactly once.
Variable coarsen(const Variable& v, const std::vector<std::vector<std::size_t>>& partition,
                 std::string name = {});

// Product variable X x Y on compose(X.substrate(), Y.substrate()).
Variable lift(const Variable& x, const Variable& y);

struct Marginal {
  BackendKind kind = BackendKind::Classical;
  std::vector<std::size_t> support;  // classical: factor state indices
  la::mat density;                   // quantum: reduced density matrix
};

Marginal marginal(const State& composite_state, std::size_t factor_index);
// Classical only: projection of the state set onto one factor.
Marginal marginal(const Attribute& composite_attribute, std::size_t factor_index);

}  // namespace ctcog
