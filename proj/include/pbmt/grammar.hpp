#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pbmt/feature.hpp"

namespace pbmt {

enum class SymbolKind : unsigned char { Terminal, Nonterminal };
enum class Side : unsigned char { Source, Target };

/// Reference to one column of an aggregate table, as used by an element.
struct AggregateUse {
  std::string pair;  // table pair name, e.g. "AGRS/AGRV"
  int column = 0;    // 0 = first column, 1 = second
  bool operator==(const AggregateUse&) const = default;
};

/// One position of a CFG skeleton: a terminal or nonterminal, optionally
/// carrying a head word, a link index, a feature vector, and an aggregate
/// column. On terminals inside lexicon rules, `head` is the lemma of the
/// surface form rather than a constraint.
struct PatternElement {
  std::string symbol;
  SymbolKind kind = SymbolKind::Nonterminal;
  std::optional<std::string> head;
  std::optional<int> link;
  FeatureVector features;
  std::optional<AggregateUse> aggregate;

  bool terminal() const { return kind == SymbolKind::Terminal; }
  bool operator==(const PatternElement&) const = default;
};

struct CfgSkeleton {
  PatternElement lhs;
  std::vector<PatternElement> rhs;
  bool operator==(const CfgSkeleton&) const = default;
};

enum class Provenance : unsigned char { Builtin, User, Integrated };

/// A synchronized pair of CFG rules plus constraints and a weight: the unit
/// of translation knowledge.
struct Pattern {
  std::string id;
  CfgSkeleton source;
  CfgSkeleton target;
  double base_weight = 0.0;
  Provenance provenance = Provenance::Builtin;

  /// A lexicon rule: the source right-hand side consists of terminals only.
  bool preterminal() const;

  /// Declared head of a preterminal side: the explicit LHS head if present,
  /// else the lemma of the single annotated token, else the surface form of
  /// a one-token RHS. nullopt for headless multiword entries.
  std::optional<std::string> lexical_head(Side side) const;

  const CfgSkeleton& skeleton(Side side) const { return side == Side::Source ? source : target; }

  bool operator==(const Pattern&) const = default;
};

/// (head constraint count, terminal count) over the source skeleton; the
/// numeric backbone of the specificity preferences.
struct StaticPriority {
  int head_constraints = 0;
  int source_terminals = 0;
  bool operator==(const StaticPriority&) const = default;
};
StaticPriority static_priority(const Pattern& p);

enum class Specificity { StrictlyMore, StrictlyLess, Equal, Incomparable };

/// Head-constraint specificity over two patterns with the same bare source
/// skeleton. Patterns with different skeletons are Incomparable.
Specificity more_specific(const Pattern& p, const Pattern& q);

struct Diagnostic {
  std::string pattern_id;  // empty for grammar-level findings
  std::string check;
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

struct Grammar {
  FeatureRegistry registry;
  std::vector<Pattern> patterns;
  std::string start_symbol = "S";

  const Pattern* find(const std::string& id) const;
  /// Declaration index of a pattern id, -1 if absent.
  int index_of(const std::string& id) const;

  std::set<std::string> terminal_vocabulary() const;
  std::set<std::string> nonterminals() const;
  /// Source-side lexicon lemmas that are not also surface terminals.
  std::set<std::string> extra_head_words() const;

  /// Copy with every feature vector cleared and aggregate uses dropped.
  Grammar feature_erased() const;

  bool operator==(const Grammar&) const = default;
};

/// Whole-grammar validation. Empty result means the grammar is usable.
/// Checks: per-pattern link bijection, LHS link present in RHS, feature
/// vector lengths, aggregate column pairing, freedom from synchronized
/// unary cycles, nonempty RHS, id uniqueness, symbol-kind consistency.
std::vector<Diagnostic> validate(const Grammar& g);

}  // namespace pbmt
