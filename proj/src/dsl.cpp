#include "pbmt/dsl.hpp"

#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>

namespace pbmt {

namespace {

bool is_all_caps(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isupper(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isupper(static_cast<unsigned char>(c)) && !std::isdigit(static_cast<unsigned char>(c)) &&
        c != '_')
      return false;
  return true;
}

bool is_number(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

bool is_feature_char(char c) {
  return std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '_';
}

struct Tok {
  std::string text;
  int column;  // 1-based offset in the line
};

std::vector<Tok> split_ws(const std::string& s) {
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back({s.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParseResult run() {
    std::istringstream in{std::string(text_)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_no_;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      std::size_t hash = raw.find('#');
      std::string line = (hash == std::string::npos) ? raw : raw.substr(0, hash);
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      handle_line(line);
    }
    finish_aggregate();
    ParseResult out;
    out.errors = std::move(errors_);
    out.positions = std::move(positions_);
    if (out.errors.empty()) {
      if (!saw_start_ && !g_.patterns.empty()) g_.start_symbol = g_.patterns.front().source.lhs.symbol;
      out.grammar = std::move(g_);
    }
    return out;
  }

 private:
  void error(int column, const std::string& msg) { errors_.push_back({line_no_, column, msg}); }

  void handle_line(const std::string& line) {
    std::vector<Tok> toks = split_ws(line);
    const std::string& kw = toks.front().text;
    if (kw == "start") {
      finish_aggregate();
      parse_start(toks);
    } else if (kw == "feature") {
      finish_aggregate();
      parse_feature(toks);
    } else if (kw == "aggregate") {
      finish_aggregate();
      parse_aggregate_header(line, toks);
    } else if (kw == "pattern" || kw == "lex") {
      finish_aggregate();
      parse_rule(line, toks, kw == "lex");
    } else if (in_aggregate_ && line.find('|') != std::string::npos) {
      parse_aggregate_row(line);
    } else {
      error(toks.front().column, "unrecognized line (expected start/feature/aggregate/pattern/lex)");
    }
  }

  void parse_start(const std::vector<Tok>& toks) {
    if (toks.size() != 2 || !is_all_caps(toks[1].text)) {
      error(toks[0].column, "expected: start <NONTERMINAL>");
      return;
    }
    g_.start_symbol = toks[1].text;
    saw_start_ = true;
  }

  void parse_feature(const std::vector<Tok>& toks) {
    if (toks.size() < 2 || toks.size() > 3) {
      error(toks[0].column, "expected: feature <NAME> [local]");
      return;
    }
    FeatureClass cls = FeatureClass::Head;
    if (toks.size() == 3) {
      if (toks[2].text != "local") {
        error(toks[2].column, "expected 'local' after feature name");
        return;
      }
      cls = FeatureClass::Local;
    }
    const std::string& name = toks[1].text;
    for (char c : name)
      if (!is_feature_char(c)) {
        error(toks[1].column, "feature names use A-Z, 0-9 and _");
        return;
      }
    if (g_.registry.index_of(name) >= 0) {
      error(toks[1].column, "duplicate feature " + name);
      return;
    }
    g_.registry.add_feature(name, cls);
  }

  void parse_aggregate_header(const std::string& line, const std::vector<Tok>& toks) {
    std::size_t colon = line.rfind(':');
    if (toks.size() != 2 || colon == std::string::npos) {
      error(toks[0].column, "expected: aggregate <A>/<B>:");
      return;
    }
    std::string names = toks[1].text;
    if (!names.empty() && names.back() == ':') names.pop_back();
    std::size_t slash = names.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == names.size()) {
      error(toks[1].column, "aggregate pair must be written A/B");
      return;
    }
    agg_ = AggregateTable{names.substr(0, slash), names.substr(slash + 1), {}};
    agg_line_ = line_no_;
    if (agg_->first_name == agg_->second_name) {
      error(toks[1].column, "aggregate column names must differ");
      agg_.reset();
      return;
    }
    for (const auto& t : g_.registry.aggregates()) {
      for (const auto& n : {agg_->first_name, agg_->second_name}) {
        if (t.first_name == n || t.second_name == n) {
          error(toks[1].column, "aggregate column " + n + " already declared");
          agg_.reset();
          return;
        }
      }
    }
    in_aggregate_ = true;
  }

  void parse_aggregate_row(const std::string& line) {
    std::size_t bar = line.find('|');
    auto left = parse_vector(line.substr(0, bar), 1);
    auto right = parse_vector(line.substr(bar + 1), static_cast<int>(bar) + 2);
    if (left && right && agg_) agg_->rows.push_back({*left, *right});
  }

  void finish_aggregate() {
    if (!in_aggregate_) return;
    in_aggregate_ = false;
    if (!agg_) return;
    if (agg_->rows.empty())
      errors_.push_back({agg_line_, 1, "aggregate " + agg_->pair_name() + " has no rows"});
    else
      g_.registry.add_aggregate(std::move(*agg_));
    agg_.reset();
  }

  // Parses a +NAME/-NAME run into a registry-length vector.
  std::optional<FeatureVector> parse_vector(const std::string& s, int col0) {
    FeatureVector v = g_.registry.empty_vector();
    std::size_t i = 0;
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (c != '+' && c != '-') {
        error(col0 + static_cast<int>(i), "expected + or - in feature run");
        return std::nullopt;
      }
      std::size_t start = ++i;
      while (i < s.size() && is_feature_char(s[i])) ++i;
      if (i == start) {
        error(col0 + static_cast<int>(start), "missing feature name after sign");
        return std::nullopt;
      }
      std::string name = s.substr(start, i - start);
      int slot = g_.registry.index_of(name);
      if (slot < 0) {
        error(col0 + static_cast<int>(start), "unknown feature " + name);
        return std::nullopt;
      }
      FeatureValue val = (c == '+') ? FeatureValue::Plus : FeatureValue::Minus;
      if (v[slot] != FeatureValue::Unbound && v[slot] != val) {
        error(col0 + static_cast<int>(start), "conflicting values for feature " + name);
        return std::nullopt;
      }
      v[slot] = val;
    }
    return v;
  }

  // [head:]SYMBOL[:index][:+F-G|*COL]...  ALL-CAPS => nonterminal.
  std::optional<PatternElement> parse_element(const Tok& tok) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      std::size_t c = tok.text.find(':', pos);
      if (c == std::string::npos) {
        parts.push_back(tok.text.substr(pos));
        break;
      }
      parts.push_back(tok.text.substr(pos, c - pos));
      pos = c + 1;
    }
    PatternElement el;
    el.features = g_.registry.empty_vector();
    if (parts.size() == 1 && !is_all_caps(parts[0])) {
      if (parts[0].empty()) {
        error(tok.column, "empty element");
        return std::nullopt;
      }
      el.symbol = parts[0];
      el.kind = SymbolKind::Terminal;
      return el;
    }
    bool saw_symbol = false;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const std::string& part = parts[i];
      if (part.empty()) {
        error(tok.column, "empty component in element " + tok.text);
        return std::nullopt;
      }
      if (!saw_symbol && is_all_caps(part)) {
        el.symbol = part;
        el.kind = SymbolKind::Nonterminal;
        saw_symbol = true;
      } else if (!saw_symbol) {
        if (el.head || i != 0) {
          error(tok.column, "misplaced head word in element " + tok.text);
          return std::nullopt;
        }
        el.head = part;
      } else if (is_number(part)) {
        if (el.link) {
          error(tok.column, "duplicate link index in element " + tok.text);
          return std::nullopt;
        }
        int idx = std::atoi(part.c_str());
        if (idx < 1) {
          error(tok.column, "link index must be positive");
          return std::nullopt;
        }
        el.link = idx;
      } else if (part[0] == '*') {
        auto spec = g_.registry.specifier(part.substr(1));
        if (!spec) {
          error(tok.column, "unknown aggregate specifier " + part);
          return std::nullopt;
        }
        if (el.aggregate) {
          error(tok.column, "element uses more than one aggregate specifier");
          return std::nullopt;
        }
        el.aggregate = AggregateUse{g_.registry.aggregates()[spec->table].pair_name(), spec->column};
      } else if (part[0] == '+' || part[0] == '-') {
        auto v = parse_vector(part, tok.column);
        if (!v) return std::nullopt;
        auto merged = unify(el.features, *v);
        if (!merged) {
          error(tok.column, "conflicting feature values in element " + tok.text);
          return std::nullopt;
        }
        el.features = std::move(*merged);
      } else {
        error(tok.column, "unexpected component '" + part + "' in element " + tok.text);
        return std::nullopt;
      }
    }
    if (!saw_symbol) {
      error(tok.column, "element " + tok.text + " lacks a nonterminal symbol");
      return std::nullopt;
    }
    return el;
  }

  // lemma:surface or plain surface.
  std::optional<PatternElement> parse_token(const Tok& tok) {
    std::size_t c = tok.text.find(':');
    PatternElement el;
    el.kind = SymbolKind::Terminal;
    el.features = g_.registry.empty_vector();
    if (c == std::string::npos) {
      el.symbol = tok.text;
    } else {
      std::string lemma = tok.text.substr(0, c);
      std::string surface = tok.text.substr(c + 1);
      if (lemma.empty() || surface.empty() || surface.find(':') != std::string::npos) {
        error(tok.column, "token must be surface or lemma:surface");
        return std::nullopt;
      }
      el.head = lemma;
      el.symbol = surface;
    }
    if (is_all_caps(el.symbol)) {
      error(tok.column, "expected a terminal token, got nonterminal " + el.symbol);
      return std::nullopt;
    }
    return el;
  }

  void parse_rule(const std::string& line, const std::vector<Tok>& toks, bool lexical) {
    // Header: keyword id [w=N] [user|integrated] ':'
    std::size_t t = 1;
    if (toks.size() < 2) {
      error(toks[0].column, "missing pattern id");
      return;
    }
    std::string id = toks[t].text;
    bool header_colon = false;
    if (!id.empty() && id.back() == ':') {
      id.pop_back();
      header_colon = true;
    }
    if (id.empty() || id.find(':') != std::string::npos) {
      error(toks[t].column, "pattern id must be a plain word");
      return;
    }
    int id_col = toks[t].column;
    ++t;
    Pattern p;
    p.id = id;
    while (!header_colon && t < toks.size()) {
      std::string tok = toks[t].text;
      bool trailing = !tok.empty() && tok.back() == ':';
      if (trailing) tok.pop_back();
      if (tok.rfind("w=", 0) == 0) {
        char* end = nullptr;
        p.base_weight = std::strtod(tok.c_str() + 2, &end);
        if (end == tok.c_str() + 2 || *end != '\0') {
          error(toks[t].column, "bad weight " + tok);
          return;
        }
      } else if (tok == "user") {
        p.provenance = Provenance::User;
      } else if (tok == "integrated") {
        p.provenance = Provenance::Integrated;
      } else if (tok.empty() && trailing) {
        // bare ':' token
      } else {
        error(toks[t].column, "unexpected token '" + toks[t].text + "' before ':'");
        return;
      }
      ++t;
      if (trailing) {
        header_colon = true;
        break;
      }
    }
    if (!header_colon) {
      error(toks.back().column, "missing ':' after pattern header");
      return;
    }
    // Body: <srcRHS> -> <srcLHS> || <tgtLHS> <- <tgtRHS>
    std::vector<Tok> body(toks.begin() + static_cast<long>(t), toks.end());
    auto find_tok = [&](const std::string& what) {
      for (std::size_t i = 0; i < body.size(); ++i)
        if (body[i].text == what) return static_cast<long>(i);
      return -1L;
    };
    long arrow = find_tok("->");
    long bars = find_tok("||");
    long back = find_tok("<-");
    if (arrow < 0 || bars < 0 || back < 0 || !(arrow < bars && bars < back)) {
      error(body.empty() ? toks.back().column : body.front().column,
            "rule body must be: <src> -> <LHS> || <LHS> <- <tgt>");
      return;
    }
    auto src_rhs = std::vector<Tok>(body.begin(), body.begin() + arrow);
    auto src_lhs = std::vector<Tok>(body.begin() + arrow + 1, body.begin() + bars);
    auto tgt_lhs = std::vector<Tok>(body.begin() + bars + 1, body.begin() + back);
    auto tgt_rhs = std::vector<Tok>(body.begin() + back + 1, body.end());
    if (src_rhs.empty() || tgt_rhs.empty()) {
      error(id_col, "empty right-hand side");
      return;
    }
    if (src_lhs.size() != 1 || tgt_lhs.size() != 1) {
      error(id_col, "each side needs exactly one LHS element");
      return;
    }
    bool bad = false;
    auto take = [&](const Tok& tok, bool token_form) -> PatternElement {
      auto el = token_form ? parse_token(tok) : parse_element(tok);
      if (!el) {
        bad = true;
        return PatternElement{};
      }
      return *el;
    };
    for (const auto& tok : src_rhs) p.source.rhs.push_back(take(tok, lexical));
    p.source.lhs = take(src_lhs[0], false);
    p.target.lhs = take(tgt_lhs[0], false);
    for (const auto& tok : tgt_rhs) p.target.rhs.push_back(take(tok, lexical));
    if (bad) return;
    if (p.source.lhs.terminal() || p.target.lhs.terminal()) {
      error(id_col, "LHS must be a nonterminal");
      return;
    }
    // Duplicate link indices are caught here so the defect is reported with
    // a position; validate() re-checks for programmatic grammars.
    for (const auto* skel : {&p.source, &p.target}) {
      std::set<int> seen;
      for (const auto& e : skel->rhs)
        if (e.link && !seen.insert(*e.link).second) {
          error(id_col, "duplicate link index " + std::to_string(*e.link) + " on one side");
          return;
        }
    }
    if (positions_.count(p.id))
      error(id_col, "duplicate pattern id " + p.id);
    positions_[p.id] = {line_no_, id_col};
    g_.patterns.push_back(std::move(p));
  }

  std::string_view text_;
  Grammar g_;
  std::vector<ParseError> errors_;
  std::map<std::string, std::pair<int, int>> positions_;
  int line_no_ = 0;
  bool saw_start_ = false;
  bool in_aggregate_ = false;
  std::optional<AggregateTable> agg_;
  int agg_line_ = 0;
};

std::string render_weight(double w) {
  if (w == static_cast<long long>(w)) return std::to_string(static_cast<long long>(w));
  std::ostringstream os;
  os.precision(17);
  os << w;
  return os.str();
}

}  // namespace

ParseResult parse_grammar(std::string_view text) { return Parser(text).run(); }

namespace {

std::string render_element(const Grammar& g, const PatternElement& e, bool token_form) {
  std::string out;
  if (token_form) {
    if (e.head && *e.head != e.symbol) out += *e.head + ":";
    out += e.symbol;
    return out;
  }
  if (e.head) out += *e.head + ":";
  out += e.symbol;
  if (e.link) out += ":" + std::to_string(*e.link);
  std::string feats = g.registry.render(e.features);
  if (!feats.empty()) out += ":" + feats;
  if (e.aggregate) {
    const AggregateTable* t = g.registry.table(e.aggregate->pair);
    out += ":*" + (e.aggregate->column == 0 ? t->first_name : t->second_name);
  }
  return out;
}

}  // namespace

std::string serialize_grammar(const Grammar& g) {
  std::ostringstream os;
  os << "start " << g.start_symbol << "\n";
  for (int i = 0; i < g.registry.size(); ++i) {
    os << "feature " << g.registry.name(i);
    if (g.registry.cls(i) == FeatureClass::Local) os << " local";
    os << "\n";
  }
  for (const auto& t : g.registry.aggregates()) {
    os << "aggregate " << t.pair_name() << ":\n";
    for (const auto& row : t.rows)
      os << "  " << g.registry.render(row.first) << " | " << g.registry.render(row.second) << "\n";
  }
  for (const auto& p : g.patterns) {
    bool lexical = p.preterminal();
    os << (lexical ? "lex " : "pattern ") << p.id << " w=" << render_weight(p.base_weight);
    if (p.provenance == Provenance::User) os << " user";
    if (p.provenance == Provenance::Integrated) os << " integrated";
    os << ":";
    for (const auto& e : p.source.rhs) os << " " << render_element(g, e, lexical);
    os << " -> " << render_element(g, p.source.lhs, false);
    os << " || " << render_element(g, p.target.lhs, false) << " <-";
    for (const auto& e : p.target.rhs) os << " " << render_element(g, e, lexical);
    os << "\n";
  }
  return os.str();
}

}  // namespace pbmt
