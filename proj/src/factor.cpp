#include "bfdst/factor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

namespace bfdst {

namespace {

std::vector<std::size_t> strides_for(const std::vector<std::size_t>& cards) {
  std::vector<std::size_t> strides(cards.size(), 1);
  for (std::size_t i = cards.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * cards[i];
  }
  return strides;
}

std::size_t checked_product(const std::vector<std::size_t>& cards) {
  std::size_t total = 1;
  for (std::size_t c : cards) {
    if (c != 0 && total > std::numeric_limits<std::size_t>::max() / c) {
      throw CapacityError("factor table size overflows");
    }
    total *= c;
  }
  return total;
}

// Walks every cell of a table with the given cards, keeping one running
// offset per source table. strides[k][d] is the stride of output dimension d
// in source k (0 when the source does not mention it).
template <typename Fn>
void odometer(const std::vector<std::size_t>& cards,
              std::vector<std::vector<std::size_t>>& strides, Fn&& fn) {
  const std::size_t n = cards.size();
  const std::size_t total = checked_product(cards);
  const std::size_t sources = strides.size();
  std::vector<std::size_t> counter(n, 0);
  std::vector<std::size_t> offset(sources, 0);
  for (std::size_t i = 0; i < total; ++i) {
    fn(i, offset);
    for (std::size_t d = n; d-- > 0;) {
      ++counter[d];
      for (std::size_t k = 0; k < sources; ++k) offset[k] += strides[k][d];
      if (counter[d] < cards[d]) break;
      for (std::size_t k = 0; k < sources; ++k) {
        offset[k] -= strides[k][d] * cards[d];
      }
      counter[d] = 0;
    }
  }
}

std::vector<std::size_t> source_strides(const Factor& src,
                                        const std::vector<VarId>& scope) {
  const auto own = strides_for(src.cards());
  std::vector<std::size_t> out(scope.size(), 0);
  for (std::size_t d = 0; d < scope.size(); ++d) {
    if (auto p = src.position(scope[d])) out[d] = own[*p];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- StateSpace

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

StateSpace StateSpace::labeled(std::vector<std::string> labels) {
  if (labels.empty()) throw StructuralError("state space needs at least 1 state");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw StructuralError("duplicate state label '" + l + "'");
    }
  }
  StateSpace s;
  s.kind_ = Kind::labeled;
  s.labels_ = std::move(labels);
  return s;
}

StateSpace StateSpace::numbered(std::vector<double> values) {
  if (values.empty()) throw StructuralError("state space needs at least 1 state");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      throw StructuralError("numbered state values must be strictly increasing");
    }
  }
  StateSpace s;
  s.kind_ = Kind::numbered;
  for (double v : values) s.labels_.push_back(format_number(v));
  s.values_ = std::move(values);
  return s;
}

StateSpace StateSpace::interval(std::vector<double> boundaries) {
  if (boundaries.size() < 2) {
    throw StructuralError("interval state space needs at least 2 boundaries");
  }
  int zero_width = 0;
  for (std::size_t i = 1; i < boundaries.size(); ++i) {
    if (boundaries[i] < boundaries[i - 1]) {
      throw StructuralError("interval boundaries must be nondecreasing");
    }
    if (boundaries[i] == boundaries[i - 1]) ++zero_width;
  }
  if (zero_width > 1) {
    throw StructuralError("at most one zero-width interval is allowed");
  }
  StateSpace s;
  s.kind_ = Kind::interval;
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
    s.labels_.push_back(format_number(boundaries[i]) + "-" +
                        format_number(boundaries[i + 1]));
  }
  s.values_ = std::move(boundaries);
  return s;
}

const std::string& StateSpace::label(std::size_t i) const {
  if (i >= labels_.size()) throw RangeError("state index out of range");
  return labels_[i];
}

double StateSpace::value(std::size_t i) const {
  if (i >= size()) throw RangeError("state index out of range");
  switch (kind_) {
    case Kind::numbered:
      return values_[i];
    case Kind::interval:
      return 0.5 * (values_[i] + values_[i + 1]);
    case Kind::labeled:
      break;
  }
  throw StructuralError("labeled states have no numeric value");
}

std::pair<double, double> StateSpace::bounds(std::size_t i) const {
  if (i >= size()) throw RangeError("state index out of range");
  if (kind_ == Kind::interval) return {values_[i], values_[i + 1]};
  if (kind_ == Kind::numbered) return {values_[i], values_[i]};
  throw StructuralError("labeled states have no bounds");
}

std::optional<std::size_t> StateSpace::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::size_t StateSpace::bin(double v) const {
  if (kind_ == Kind::labeled) throw StructuralError("labeled states cannot bin");
  if (kind_ == Kind::numbered) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values_.size(); ++i) {
      if (std::abs(values_[i] - v) < std::abs(values_[best] - v)) best = i;
    }
    return best;
  }
  const std::size_t n = size();
  if (v < values_.front()) return 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = values_[i];
    const double hi = values_[i + 1];
    if (lo == hi) {
      if (v == lo) return i;
    } else if (v >= lo && v < hi) {
      return i;
    }
  }
  return n - 1;
}

std::string_view to_string(VarKind kind) {
  return kind == VarKind::chance ? "chance" : "decision";
}

// -------------------------------------------------------------------- Factor

Factor::Factor(std::vector<VarId> scope, std::vector<std::size_t> cards,
               std::vector<double> data)
    : scope_(std::move(scope)), cards_(std::move(cards)), data_(std::move(data)) {
  if (scope_.size() != cards_.size()) {
    throw StructuralError("factor scope and cardinalities differ in length");
  }
  std::set<VarId> seen;
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (!seen.insert(scope_[i]).second) {
      throw StructuralError("variable '" + scope_[i] + "' repeated in scope");
    }
    if (cards_[i] == 0) {
      throw StructuralError("variable '" + scope_[i] + "' has no states");
    }
  }
  if (data_.size() != checked_product(cards_)) {
    throw StructuralError("factor data length does not match its scope");
  }
  for (double x : data_) {
    if (!std::isfinite(x) || x < 0.0) {
      throw StructuralError("factor entries must be finite and nonnegative");
    }
  }
}

std::optional<std::size_t> Factor::position(const VarId& v) const {
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (scope_[i] == v) return i;
  }
  return std::nullopt;
}

std::size_t Factor::card(const VarId& v) const {
  auto p = position(v);
  if (!p) throw StructuralError("variable '" + v + "' not in factor scope");
  return cards_[*p];
}

double Factor::at(std::span<const std::size_t> states) const {
  if (states.size() != scope_.size()) {
    throw StructuralError("assignment does not cover the factor scope");
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] >= cards_[i]) throw RangeError("state index out of range");
    idx = idx * cards_[i] + states[i];
  }
  return data_[idx];
}

double Factor::scalar_value() const {
  if (!scope_.empty()) throw StructuralError("factor is not a scalar");
  return data_[0];
}

double Factor::sum() const {
  return std::accumulate(data_.begin(), data_.end(), 0.0);
}

// ---------------------------------------------------------------- operations

Factor factor_product(const Factor& a, const Factor& b) {
  std::vector<VarId> scope = a.scope();
  std::vector<std::size_t> cards = a.cards();
  for (std::size_t i = 0; i < b.scope().size(); ++i) {
    const auto& v = b.scope()[i];
    if (auto p = a.position(v)) {
      if (a.cards()[*p] != b.cards()[i]) {
        throw StructuralError("state-count mismatch on shared variable '" + v +
                              "'");
      }
    } else {
      scope.push_back(v);
      cards.push_back(b.cards()[i]);
    }
  }
  std::vector<std::vector<std::size_t>> strides{source_strides(a, scope),
                                                source_strides(b, scope)};
  std::vector<double> out(checked_product(cards));
  const auto& da = a.data();
  const auto& db = b.data();
  odometer(cards, strides, [&](std::size_t i, const std::vector<std::size_t>& off) {
    out[i] = da[off[0]] * db[off[1]];
  });
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

Factor factor_marginalize(const Factor& f, const VarId& v) {
  auto p = f.position(v);
  if (!p) throw StructuralError("cannot marginalize '" + v + "': not in scope");
  std::vector<VarId> scope;
  std::vector<std::size_t> cards;
  for (std::size_t i = 0; i < f.scope().size(); ++i) {
    if (i == *p) continue;
    scope.push_back(f.scope()[i]);
    cards.push_back(f.cards()[i]);
  }
  // Walk the input table; map each cell to its output cell.
  const auto out_strides = strides_for(cards);
  std::vector<std::size_t> in_to_out(f.scope().size(), 0);
  for (std::size_t i = 0, j = 0; i < f.scope().size(); ++i) {
    if (i == *p) continue;
    in_to_out[i] = out_strides[j++];
  }
  std::vector<std::vector<std::size_t>> strides{in_to_out};
  std::vector<double> out(checked_product(cards), 0.0);
  const auto& d = f.data();
  odometer(f.cards(), strides, [&](std::size_t i, const std::vector<std::size_t>& off) {
    out[off[0]] += d[i];
  });
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

Factor factor_reduce(const Factor& f, const VarId& v, std::size_t state) {
  auto p = f.position(v);
  if (!p) throw StructuralError("cannot reduce '" + v + "': not in scope");
  if (state >= f.cards()[*p]) {
    throw RangeError("state " + std::to_string(state) + " out of range for '" +
                     v + "'");
  }
  std::vector<VarId> scope;
  std::vector<std::size_t> cards;
  const auto in_strides = strides_for(f.cards());
  std::vector<std::size_t> sel;
  for (std::size_t i = 0; i < f.scope().size(); ++i) {
    if (i == *p) continue;
    scope.push_back(f.scope()[i]);
    cards.push_back(f.cards()[i]);
    sel.push_back(in_strides[i]);
  }
  const std::size_t base = state * in_strides[*p];
  std::vector<std::vector<std::size_t>> strides{sel};
  std::vector<double> out(checked_product(cards));
  const auto& d = f.data();
  odometer(cards, strides, [&](std::size_t i, const std::vector<std::size_t>& off) {
    out[i] = d[base + off[0]];
  });
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

Factor factor_reorder(const Factor& f, const std::vector<VarId>& order) {
  if (order == f.scope()) return f;
  if (order.size() != f.scope().size()) {
    throw StructuralError("reorder target is not a permutation of the scope");
  }
  std::vector<std::size_t> cards;
  for (const auto& v : order) cards.push_back(f.card(v));
  std::vector<std::vector<std::size_t>> strides{source_strides(f, order)};
  std::vector<double> out(f.size());
  const auto& d = f.data();
  odometer(cards, strides, [&](std::size_t i, const std::vector<std::size_t>& off) {
    out[i] = d[off[0]];
  });
  return Factor(order, std::move(cards), std::move(out));
}

Factor factor_normalize(const Factor& f) {
  const double total = f.sum();
  if (total == 0.0) return f;
  std::vector<double> d = f.data();
  for (double& x : d) x /= total;
  return Factor(f.scope(), f.cards(), std::move(d));
}

namespace {

std::map<VarId, std::size_t> collect_cards(std::span<const Factor> factors) {
  std::map<VarId, std::size_t> cards;
  for (const auto& f : factors) {
    for (std::size_t i = 0; i < f.scope().size(); ++i) {
      auto [it, inserted] = cards.emplace(f.scope()[i], f.cards()[i]);
      if (!inserted && it->second != f.cards()[i]) {
        throw StructuralError("inconsistent state counts for '" + f.scope()[i] +
                              "'");
      }
    }
  }
  return cards;
}

// Number of edges min-fill would add when eliminating v.
std::size_t fill_in(const VarId& v,
                    const std::map<VarId, std::set<VarId>>& adjacency) {
  const auto& nb = adjacency.at(v);
  std::size_t fill = 0;
  for (auto i = nb.begin(); i != nb.end(); ++i) {
    for (auto j = std::next(i); j != nb.end(); ++j) {
      if (!adjacency.at(*i).contains(*j)) ++fill;
    }
  }
  return fill;
}

}  // namespace

std::vector<VarId> elimination_order(std::span<const Factor> factors,
                                     const std::vector<VarId>& keep) {
  const auto cards = collect_cards(factors);
  const std::set<VarId> kept(keep.begin(), keep.end());
  std::map<VarId, std::set<VarId>> adjacency;
  for (const auto& [v, _] : cards) adjacency[v];
  for (const auto& f : factors) {
    for (const auto& a : f.scope()) {
      for (const auto& b : f.scope()) {
        if (a != b) adjacency[a].insert(b);
      }
    }
  }
  std::set<VarId> remaining;
  for (const auto& [v, _] : cards) {
    if (!kept.contains(v)) remaining.insert(v);
  }
  std::vector<VarId> order;
  while (!remaining.empty()) {
    // std::set iterates in lexicographic order, so the first minimum wins ties.
    const VarId* best = nullptr;
    std::size_t best_fill = std::numeric_limits<std::size_t>::max();
    for (const auto& v : remaining) {
      const std::size_t fill = fill_in(v, adjacency);
      if (fill < best_fill) {
        best_fill = fill;
        best = &v;
      }
    }
    const VarId chosen = *best;
    const auto nb = adjacency[chosen];
    for (const auto& a : nb) {
      for (const auto& b : nb) {
        if (a != b) adjacency[a].insert(b);
      }
      adjacency[a].erase(chosen);
    }
    adjacency.erase(chosen);
    remaining.erase(chosen);
    order.push_back(chosen);
  }
  return order;
}

Factor eliminate(std::span<const Factor> factors, const std::vector<VarId>& keep) {
  const auto cards = collect_cards(factors);
  for (const auto& v : keep) {
    if (!cards.contains(v)) {
      throw StructuralError("kept variable '" + v + "' is not in any factor");
    }
  }
  std::vector<Factor> pool(factors.begin(), factors.end());
  for (const auto& v : elimination_order(factors, keep)) {
    Factor combined;
    std::vector<Factor> rest;
    bool any = false;
    for (auto& f : pool) {
      if (f.contains(v)) {
        combined = any ? factor_product(combined, f) : std::move(f);
        any = true;
      } else {
        rest.push_back(std::move(f));
      }
    }
    rest.push_back(factor_marginalize(combined, v));
    pool = std::move(rest);
  }
  Factor result;
  for (const auto& f : pool) result = factor_product(result, f);
  return factor_reorder(result, keep);
}

Factor brute_force_joint(std::span<const Factor> factors, std::size_t cap) {
  std::vector<VarId> scope;
  std::vector<std::size_t> cards;
  const auto known = collect_cards(factors);
  for (const auto& f : factors) {
    for (const auto& v : f.scope()) {
      if (std::find(scope.begin(), scope.end(), v) == scope.end()) {
        scope.push_back(v);
        cards.push_back(known.at(v));
      }
    }
  }
  double cells = 1.0;
  for (auto c : cards) cells *= static_cast<double>(c);
  if (cells > static_cast<double>(cap)) {
    throw CapacityError("joint state space of " + format_number(cells) +
                        " cells exceeds cap " + std::to_string(cap));
  }
  const std::size_t total = checked_product(cards);
  std::vector<double> out(total);
  std::vector<std::size_t> assignment(scope.size(), 0);
  std::vector<std::vector<std::size_t>> positions;
  for (const auto& f : factors) {
    std::vector<std::size_t> pos;
    for (const auto& v : f.scope()) {
      pos.push_back(static_cast<std::size_t>(
          std::find(scope.begin(), scope.end(), v) - scope.begin()));
    }
    positions.push_back(std::move(pos));
  }
  std::vector<std::size_t> local;
  for (std::size_t cell = 0; cell < total; ++cell) {
    std::size_t rem = cell;
    for (std::size_t d = scope.size(); d-- > 0;) {
      assignment[d] = rem % cards[d];
      rem /= cards[d];
    }
    double value = 1.0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
      local.clear();
      for (auto p : positions[k]) local.push_back(assignment[p]);
      value *= factors[k].at(local);
    }
    out[cell] = value;
  }
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

double max_relative_error(const Factor& a, const Factor& b) {
  const Factor aligned = factor_reorder(a, b.scope());
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double ref = b.data()[i];
    const double diff = std::abs(aligned.data()[i] - ref);
    worst = std::max(worst, ref == 0.0 ? diff : diff / std::abs(ref));
  }
  return worst;
}

}  // namespace bfdst
