#include "pbmt/grammar.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace pbmt {

bool Pattern::preterminal() const {
  if (source.rhs.empty()) return false;
  return std::all_of(source.rhs.begin(), source.rhs.end(),
                     [](const PatternElement& e) { return e.terminal(); });
}

std::optional<std::string> Pattern::lexical_head(Side side) const {
  const CfgSkeleton& skel = skeleton(side);
  if (skel.lhs.head) return skel.lhs.head;
  const PatternElement* annotated = nullptr;
  for (const auto& e : skel.rhs) {
    if (e.terminal() && e.head) {
      if (annotated) return std::nullopt;  // ambiguous: no implicit head
      annotated = &e;
    }
  }
  if (annotated) return annotated->head;
  if (skel.rhs.size() == 1 && skel.rhs.front().terminal()) return skel.rhs.front().symbol;
  return std::nullopt;
}

StaticPriority static_priority(const Pattern& p) {
  StaticPriority out;
  for (const auto& e : p.source.rhs) {
    if (e.terminal())
      ++out.source_terminals;
    else if (e.head)
      ++out.head_constraints;
  }
  return out;
}

namespace {

// Bare CFG rule of the source side: symbols only, constraints stripped.
std::vector<std::string> bare_skeleton(const Pattern& p) {
  std::vector<std::string> out;
  out.push_back(p.source.lhs.symbol);
  for (const auto& e : p.source.rhs) out.push_back(e.symbol);
  return out;
}

// True when p's head constraints cover q's: wherever q constrains a source
// RHS position, p constrains it to the same word.
bool covers(const Pattern& p, const Pattern& q) {
  for (std::size_t i = 0; i < q.source.rhs.size(); ++i) {
    const auto& qe = q.source.rhs[i];
    if (qe.terminal() || !qe.head) continue;
    const auto& pe = p.source.rhs[i];
    if (!pe.head || *pe.head != *qe.head) return false;
  }
  return true;
}

}  // namespace

Specificity more_specific(const Pattern& p, const Pattern& q) {
  if (bare_skeleton(p) != bare_skeleton(q)) return Specificity::Incomparable;
  bool pq = covers(p, q);
  bool qp = covers(q, p);
  if (pq && qp) return Specificity::Equal;
  if (pq) return Specificity::StrictlyMore;
  if (qp) return Specificity::StrictlyLess;
  return Specificity::Incomparable;
}

const Pattern* Grammar::find(const std::string& id) const {
  for (const auto& p : patterns)
    if (p.id == id) return &p;
  return nullptr;
}

int Grammar::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < patterns.size(); ++i)
    if (patterns[i].id == id) return static_cast<int>(i);
  return -1;
}

std::set<std::string> Grammar::terminal_vocabulary() const {
  std::set<std::string> out;
  for (const auto& p : patterns)
    for (const auto& e : p.source.rhs)
      if (e.terminal()) out.insert(e.symbol);
  return out;
}

std::set<std::string> Grammar::nonterminals() const {
  std::set<std::string> out;
  out.insert(start_symbol);
  for (const auto& p : patterns) {
    for (const auto* skel : {&p.source, &p.target}) {
      if (!skel->lhs.terminal()) out.insert(skel->lhs.symbol);
      for (const auto& e : skel->rhs)
        if (!e.terminal()) out.insert(e.symbol);
    }
  }
  return out;
}

std::set<std::string> Grammar::extra_head_words() const {
  std::set<std::string> terminals = terminal_vocabulary();
  std::set<std::string> out;
  for (const auto& p : patterns) {
    if (!p.preterminal()) continue;
    auto h = p.lexical_head(Side::Source);
    if (h && !terminals.count(*h)) out.insert(*h);
  }
  return out;
}

Grammar Grammar::feature_erased() const {
  Grammar out = *this;
  for (auto& p : out.patterns) {
    for (auto* skel : {&p.source, &p.target}) {
      skel->lhs.features.assign(skel->lhs.features.size(), FeatureValue::Unbound);
      skel->lhs.aggregate.reset();
      for (auto& e : skel->rhs) {
        e.features.assign(e.features.size(), FeatureValue::Unbound);
        e.aggregate.reset();
      }
    }
  }
  return out;
}

namespace {

void check_pattern_links(const Pattern& p, std::vector<Diagnostic>& out) {
  auto side_links = [&](const CfgSkeleton& skel, const char* side) {
    std::set<int> links;
    for (const auto& e : skel.rhs) {
      if (e.terminal()) {
        if (e.link)
          out.push_back({p.id, "link-bijection",
                         std::string("link index on a ") + side + " terminal element"});
        continue;
      }
      if (!e.link) {
        out.push_back({p.id, "link-bijection",
                       std::string("unlinked ") + side + " nonterminal " + e.symbol});
        continue;
      }
      if (!links.insert(*e.link).second)
        out.push_back({p.id, "link-bijection",
                       std::string("duplicate link index on ") + side + " side"});
    }
    return links;
  };
  std::set<int> src = side_links(p.source, "source");
  std::set<int> tgt = side_links(p.target, "target");
  if (src != tgt)
    out.push_back({p.id, "link-bijection",
                   "source and target link index sets differ"});
  for (const auto* skel : {&p.source, &p.target}) {
    if (!skel->lhs.link) continue;
    bool found = false;
    for (const auto& e : skel->rhs)
      if (!e.terminal() && e.link && *e.link == *skel->lhs.link) found = true;
    if (!found)
      out.push_back({p.id, "lhs-link",
                     "LHS link index " + std::to_string(*skel->lhs.link) +
                         " does not occur on a RHS nonterminal"});
  }
}

void check_pattern_features(const Grammar& g, const Pattern& p, std::vector<Diagnostic>& out) {
  const int n = g.registry.size();
  auto check_el = [&](const PatternElement& e, bool lhs, const char* side) {
    if (static_cast<int>(e.features.size()) != n)
      out.push_back({p.id, "feature-length",
                     std::string(side) + " element " + e.symbol + " has vector length " +
                         std::to_string(e.features.size()) + ", registry has " +
                         std::to_string(n)});
    if (e.aggregate) {
      if (e.terminal() || lhs)
        out.push_back({p.id, "aggregate-use", "aggregate specifier allowed only on RHS nonterminals"});
      else if (!g.registry.table(e.aggregate->pair))
        out.push_back({p.id, "aggregate-use", "unknown aggregate pair " + e.aggregate->pair});
    }
    if (e.terminal() && e.head && !p.preterminal())
      out.push_back({p.id, "head-constraint",
                     "terminal element " + e.symbol + " carries a head outside a lexicon rule"});
  };
  for (const auto* skel : {&p.source, &p.target}) {
    const char* side = (skel == &p.source) ? "source" : "target";
    check_el(skel->lhs, true, side);
    for (const auto& e : skel->rhs) check_el(e, false, side);
    // Each aggregate pair used on one side must pair its two columns.
    std::map<std::string, std::pair<int, int>> uses;  // pair -> (col0 count, col1 count)
    for (const auto& e : skel->rhs) {
      if (!e.aggregate || e.terminal()) continue;
      auto& u = uses[e.aggregate->pair];
      (e.aggregate->column == 0 ? u.first : u.second)++;
    }
    for (const auto& [pair, counts] : uses) {
      if (counts.first != 1 || counts.second != 1)
        out.push_back({p.id, "aggregate-pairing",
                       "aggregate " + pair + " must use each column exactly once on the " +
                           side + " side"});
    }
  }
}

// Synchronized unary cycle check. Nodes are (source LHS, target LHS) symbol
// pairs; every pattern whose source RHS is a single nonterminal contributes
// an edge to the co-indexed child pair, regardless of target terminals.
void check_cycles(const Grammar& g, std::vector<Diagnostic>& out) {
  using Node = std::pair<std::string, std::string>;
  std::map<Node, std::vector<std::pair<Node, const Pattern*>>> edges;
  for (const auto& p : g.patterns) {
    if (p.source.rhs.size() != 1 || p.source.rhs.front().terminal()) continue;
    const PatternElement& child = p.source.rhs.front();
    if (!child.link) continue;  // reported by the link checks
    const PatternElement* tgt_child = nullptr;
    for (const auto& e : p.target.rhs)
      if (!e.terminal() && e.link && *e.link == *child.link) tgt_child = &e;
    if (!tgt_child) continue;
    Node from{p.source.lhs.symbol, p.target.lhs.symbol};
    Node to{child.symbol, tgt_child->symbol};
    edges[from].push_back({to, &p});
  }
  std::map<Node, int> state;  // 0 unseen, 1 on stack, 2 done
  std::vector<const Pattern*> path;
  std::function<bool(const Node&)> dfs = [&](const Node& n) -> bool {
    state[n] = 1;
    for (const auto& [next, pat] : edges[n]) {
      int s = state.count(next) ? state[next] : 0;
      path.push_back(pat);
      if (s == 1) return true;
      if (s == 0 && dfs(next)) return true;
      path.pop_back();
    }
    state[n] = 2;
    return false;
  };
  for (const auto& [node, _] : edges) {
    if (state.count(node)) continue;
    path.clear();
    if (dfs(node)) {
      std::ostringstream msg;
      msg << "synchronized unary derivation cycle through patterns:";
      for (const auto* pat : path) msg << " " << pat->id;
      out.push_back({path.back()->id, "synchronized-cycle", msg.str()});
      return;
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate(const Grammar& g) {
  std::vector<Diagnostic> out;
  std::set<std::string> ids;
  std::map<std::string, SymbolKind> kinds;
  auto note_kind = [&](const std::string& pid, const PatternElement& e) {
    auto it = kinds.find(e.symbol);
    if (it == kinds.end())
      kinds.emplace(e.symbol, e.kind);
    else if (it->second != e.kind)
      out.push_back({pid, "symbol-kind",
                     "symbol " + e.symbol + " used as both terminal and nonterminal"});
  };
  for (const auto& p : g.patterns) {
    if (!ids.insert(p.id).second)
      out.push_back({p.id, "duplicate-id", "pattern id declared more than once"});
    for (const auto* skel : {&p.source, &p.target}) {
      if (skel->rhs.empty()) {
        out.push_back({p.id, "empty-rhs", "empty right-hand side"});
        continue;
      }
      if (skel->lhs.terminal())
        out.push_back({p.id, "lhs-kind", "left-hand side must be a nonterminal"});
      note_kind(p.id, skel->lhs);
      for (const auto& e : skel->rhs) note_kind(p.id, e);
    }
    check_pattern_links(p, out);
    check_pattern_features(g, p, out);
  }
  if (kinds.count(g.start_symbol) && kinds[g.start_symbol] != SymbolKind::Nonterminal)
    out.push_back({"", "start-symbol", "start symbol is a terminal"});
  check_cycles(g, out);
  return out;
}

}  // namespace pbmt
