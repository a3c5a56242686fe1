#pragma once
// Discrete factor algebra: dense row-major tables over ordered variable
// scopes, plus exact sum-product elimination.

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bfdst {

using VarId = std::string;

class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// State space of a discrete variable. Numbered and interval spaces carry
// numeric meaning; interval spaces store stateCount + 1 boundaries.
class StateSpace {
 public:
  enum class Kind { labeled, numbered, interval };

  StateSpace() = default;
  static StateSpace labeled(std::vector<std::string> labels);
  static StateSpace numbered(std::vector<double> values);
  static StateSpace interval(std::vector<double> boundaries);

  Kind kind() const { return kind_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const;

  // Numbered values, or interval boundaries. Empty for labeled spaces.
  const std::vector<double>& values() const { return values_; }

  // Numbered: the value. Interval: the midpoint. Labeled: throws.
  double value(std::size_t i) const;
  double midpoint(std::size_t i) const { return value(i); }
  std::pair<double, double> bounds(std::size_t i) const;

  std::optional<std::size_t> find(std::string_view label) const;

  // Interval: the state whose [lo, hi) holds v; a zero-width [a, a] holds
  // exactly a; values outside the range clamp to the terminal states.
  // Numbered: the nearest value, ties to the smaller.
  std::size_t bin(double v) const;

  bool operator==(const StateSpace&) const = default;

 private:
  Kind kind_ = Kind::labeled;
  std::vector<std::string> labels_;
  std::vector<double> values_;
};

std::string format_number(double v);

enum class VarKind { chance, decision };

std::string_view to_string(VarKind kind);

struct Variable {
  VarId id;
  std::string name;
  VarKind kind = VarKind::chance;
  StateSpace states;
  std::string units;
};

// Nonnegative table over an ordered scope. The last scope variable varies
// fastest. An empty scope holds a single scalar.
class Factor {
 public:
  Factor() : data_{1.0} {}
  Factor(std::vector<VarId> scope, std::vector<std::size_t> cards,
         std::vector<double> data);

  static Factor scalar(double v) { return Factor({}, {}, {v}); }

  const std::vector<VarId>& scope() const { return scope_; }
  const std::vector<std::size_t>& cards() const { return cards_; }
  const std::vector<double>& data() const { return data_; }
  std::size_t size() const { return data_.size(); }

  // Position of v in the scope, if present.
  std::optional<std::size_t> position(const VarId& v) const;
  bool contains(const VarId& v) const { return position(v).has_value(); }
  std::size_t card(const VarId& v) const;

  // Cell at the given per-scope-variable state indices.
  double at(std::span<const std::size_t> states) const;
  double scalar_value() const;
  double sum() const;

 private:
  std::vector<VarId> scope_;
  std::vector<std::size_t> cards_;
  std::vector<double> data_;
};

Factor factor_product(const Factor& a, const Factor& b);
Factor factor_marginalize(const Factor& f, const VarId& v);
Factor factor_reduce(const Factor& f, const VarId& v, std::size_t state);

// Same table with the scope permuted to `order` (a permutation of scope()).
Factor factor_reorder(const Factor& f, const std::vector<VarId>& order);

// Divides every cell by the total mass. A zero-mass factor is returned as is.
Factor factor_normalize(const Factor& f);

// Min-fill order for summing out every variable not in `keep`; ties broken
// by lexicographic variable id.
std::vector<VarId> elimination_order(std::span<const Factor> factors,
                                     const std::vector<VarId>& keep);

// Unnormalized joint over `keep` (scope in `keep` order).
Factor eliminate(std::span<const Factor> factors,
                 const std::vector<VarId>& keep);

inline constexpr std::size_t kDefaultJointCap = 10'000'000;

// Reference oracle: full joint by direct enumeration of every cell.
Factor brute_force_joint(std::span<const Factor> factors,
                         std::size_t cap = kDefaultJointCap);

// Largest per-cell relative error |a - b| / |b| after aligning scopes.
// Cells where b is exactly zero contribute |a|.
double max_relative_error(const Factor& a, const Factor& b);

}  // namespace bfdst
