#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pbmt {

/// Three-valued feature slot. Unbound is the identity of unification.
enum class FeatureValue : unsigned char { Unbound = 0, Plus, Minus };

/// Head features propagate along the co-indexed head chain; local features
/// stay confined to the node that declares them.
enum class FeatureClass : unsigned char { Head, Local };

/// Fixed-length vector over FeatureValue. Every vector in a grammar has
/// length equal to the registry size.
using FeatureVector = std::vector<FeatureValue>;

/// Slotwise unification: (Unbound, x) -> x, (x, x) -> x, (Plus, Minus) -> clash.
/// Returns nullopt on a clash and stores the offending slot in *clash_slot.
std::optional<FeatureVector> unify(const FeatureVector& a, const FeatureVector& b,
                                   int* clash_slot = nullptr);

/// True when every bound slot of `req` is bound to the same value in `v`.
bool satisfies(const FeatureVector& v, const FeatureVector& req);

struct AggregateRow {
  FeatureVector first;
  FeatureVector second;
  bool operator==(const AggregateRow&) const = default;
};

/// Named disjunction of paired feature assignments, e.g. subject/verb
/// agreement. Rows are tried in declaration order; the first match wins.
struct AggregateTable {
  std::string first_name;
  std::string second_name;
  std::vector<AggregateRow> rows;

  std::string pair_name() const { return first_name + "/" + second_name; }
  bool operator==(const AggregateTable&) const = default;
};

class FeatureRegistry {
 public:
  /// Registers a feature; names must be unique. Returns the slot index.
  int add_feature(const std::string& name, FeatureClass cls = FeatureClass::Head);
  void add_aggregate(AggregateTable table);

  int size() const { return static_cast<int>(names_.size()); }
  /// Slot of a feature name, -1 if unknown.
  int index_of(const std::string& name) const;
  const std::string& name(int slot) const { return names_[slot]; }
  FeatureClass cls(int slot) const { return classes_[slot]; }

  const std::vector<AggregateTable>& aggregates() const { return aggregates_; }
  const AggregateTable* table(const std::string& pair_name) const;

  /// Resolves a column specifier (e.g. "AGRS") to its table and column.
  struct SpecRef {
    int table;
    int column;  // 0 = first, 1 = second
  };
  std::optional<SpecRef> specifier(const std::string& column_name) const;

  FeatureVector empty_vector() const { return FeatureVector(names_.size(), FeatureValue::Unbound); }

  /// Renders a vector as +NAME/-NAME runs in registry order ("" if all unbound).
  std::string render(const FeatureVector& v) const;

  /// Keeps head-class slots of `v`, clearing local-class slots to Unbound.
  FeatureVector head_projection(const FeatureVector& v) const;

  /// First match against the named table: row i matches when both inputs
  /// already bind everything row i binds. Returns the pairwise-unified
  /// vectors, or nullopt when no row matches. *row_out gets the row index.
  std::optional<std::pair<FeatureVector, FeatureVector>> unify_aggregate(
      const std::string& pair_name, const FeatureVector& va, const FeatureVector& vb,
      int* row_out = nullptr) const;

  bool operator==(const FeatureRegistry&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<FeatureClass> classes_;
  std::vector<AggregateTable> aggregates_;
};

}  // namespace pbmt
