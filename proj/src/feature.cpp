#include "pbmt/feature.hpp"

#include <stdexcept>

namespace pbmt {

std::optional<FeatureVector> unify(const FeatureVector& a, const FeatureVector& b,
                                   int* clash_slot) {
  if (a.size() != b.size()) throw std::invalid_argument("unify: vector lengths differ");
  FeatureVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == FeatureValue::Unbound) {
      out[i] = b[i];
    } else if (b[i] == FeatureValue::Unbound || a[i] == b[i]) {
      out[i] = a[i];
    } else {
      if (clash_slot) *clash_slot = static_cast<int>(i);
      return std::nullopt;
    }
  }
  return out;
}

bool satisfies(const FeatureVector& v, const FeatureVector& req) {
  if (v.size() != req.size()) throw std::invalid_argument("satisfies: vector lengths differ");
  for (std::size_t i = 0; i < req.size(); ++i) {
    if (req[i] != FeatureValue::Unbound && v[i] != req[i]) return false;
  }
  return true;
}

int FeatureRegistry::add_feature(const std::string& name, FeatureClass cls) {
  if (index_of(name) >= 0) throw std::invalid_argument("duplicate feature: " + name);
  names_.push_back(name);
  classes_.push_back(cls);
  return static_cast<int>(names_.size()) - 1;
}

void FeatureRegistry::add_aggregate(AggregateTable table) {
  for (const auto& row : table.rows) {
    if (static_cast<int>(row.first.size()) != size() ||
        static_cast<int>(row.second.size()) != size())
      throw std::invalid_argument("aggregate row length mismatch in " + table.pair_name());
  }
  aggregates_.push_back(std::move(table));
}

int FeatureRegistry::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

const AggregateTable* FeatureRegistry::table(const std::string& pair_name) const {
  for (const auto& t : aggregates_)
    if (t.pair_name() == pair_name) return &t;
  return nullptr;
}

std::optional<FeatureRegistry::SpecRef> FeatureRegistry::specifier(
    const std::string& column_name) const {
  for (std::size_t i = 0; i < aggregates_.size(); ++i) {
    if (aggregates_[i].first_name == column_name) return SpecRef{static_cast<int>(i), 0};
    if (aggregates_[i].second_name == column_name) return SpecRef{static_cast<int>(i), 1};
  }
  return std::nullopt;
}

std::string FeatureRegistry::render(const FeatureVector& v) const {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == FeatureValue::Unbound) continue;
    out += (v[i] == FeatureValue::Plus) ? '+' : '-';
    out += names_[i];
  }
  return out;
}

FeatureVector FeatureRegistry::head_projection(const FeatureVector& v) const {
  FeatureVector out(v.size(), FeatureValue::Unbound);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (classes_[i] == FeatureClass::Head) out[i] = v[i];
  return out;
}

std::optional<std::pair<FeatureVector, FeatureVector>> FeatureRegistry::unify_aggregate(
    const std::string& pair_name, const FeatureVector& va, const FeatureVector& vb,
    int* row_out) const {
  const AggregateTable* t = table(pair_name);
  if (!t) throw std::invalid_argument("unknown aggregate pair: " + pair_name);
  for (std::size_t i = 0; i < t->rows.size(); ++i) {
    const AggregateRow& row = t->rows[i];
    if (satisfies(va, row.first) && satisfies(vb, row.second)) {
      if (row_out) *row_out = static_cast<int>(i);
      auto ua = unify(row.first, va);
      auto ub = unify(row.second, vb);
      return std::make_pair(*ua, *ub);
    }
  }
  return std::nullopt;
}

}  // namespace pbmt
