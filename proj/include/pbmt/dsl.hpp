#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pbmt/grammar.hpp"

namespace pbmt {

struct ParseError {
  int line = 0;    // 1-based
  int column = 0;  // 1-based
  std::string message;
};

struct ParseResult {
  std::optional<Grammar> grammar;
  std::vector<ParseError> errors;
  /// Pattern id -> (line, column) of its declaration.
  std::map<std::string, std::pair<int, int>> positions;

  bool ok() const { return errors.empty() && grammar.has_value(); }
};

/// Parses the textual grammar format. All defects are reported; the grammar
/// is only produced when there are none.
///
/// Line forms:
///   # comment                      (also allowed after content)
///   start S
///   feature NAME [local]
///   aggregate A/B:                 followed by rows  <vecA> | <vecB>
///   pattern <id> [w=<num>] [user|integrated]: <rhs> -> <lhs> || <lhs> <- <rhs>
///   lex <id> [w=<num>] [user|integrated]: <tokens> -> <el> || <el> <- <tokens>
///
/// Elements are colon-separated [head:]SYMBOL[:index][:+F-G|*COL]...; ALL-CAPS
/// identifiers are nonterminals, anything else is a terminal or head word.
/// Lexicon tokens may be written lemma:surface.
ParseResult parse_grammar(std::string_view text);

/// Canonical text form: start line, registry, then patterns in declaration
/// order with weights always printed. parse(serialize(g)) == g structurally.
std::string serialize_grammar(const Grammar& g);

}  // namespace pbmt
