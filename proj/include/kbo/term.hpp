// First-order terms, rewrite rules and rewrite systems, together with the
// syntactic measures (occurrence counts, embedding, common-token
// cancellation) that the constraint encodings consume.

#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kbo {

/// A function symbol with a fixed arity. A well-formed signature never
/// contains two symbols with the same name and different arities.
struct Symbol {
  std::string name;
  int arity = 0;

  auto operator<=>(const Symbol&) const = default;
};

/// A first-order term: either a variable or an application of a function
/// symbol to argument terms. Constants are applications with no arguments.
struct Term {
  enum class Kind { variable, application };

  Kind kind = Kind::variable;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string n) { return Term{Kind::variable, std::move(n), {}}; }
  static Term app(std::string f, std::vector<Term> as = {}) {
    return Term{Kind::application, std::move(f), std::move(as)};
  }

  bool is_var() const { return kind == Kind::variable; }
  bool is_app() const { return kind == Kind::application; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind == b.kind && a.name == b.name && a.args == b.args;
  }
};

inline std::string to_string(const Term& t) {
  std::string out = t.name;
  if (t.is_app() && !t.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i > 0) out += ',';
      out += to_string(t.args[i]);
    }
    out += ')';
  }
  return out;
}

/// A rewrite rule l -> r. No well-formedness is imposed at parse time:
/// a variable left-hand side or fresh right-hand side variables are legal
/// input that the encoders reject as non-orientable.
struct Rule {
  Term lhs, rhs;

  friend bool operator==(const Rule&, const Rule&) = default;
};

inline std::string to_string(const Rule& r) {
  return to_string(r.lhs) + " -> " + to_string(r.rhs);
}

enum class SystemKind { term_system, string_system };

/// A rewrite system plus its derived signature. The signature contains
/// exactly the symbols occurring in the rules, sorted by name.
struct Trs {
  std::vector<Rule> rules;
  std::vector<Symbol> signature;
  SystemKind kind = SystemKind::term_system;

  friend bool operator==(const Trs& a, const Trs& b) {
    return a.rules == b.rules && a.kind == b.kind;
  }
};

namespace detail {

inline void collect_symbols(const Term& t, std::map<std::string, int>& arities) {
  if (t.is_var()) return;
  auto [it, inserted] = arities.emplace(t.name, static_cast<int>(t.args.size()));
  if (!inserted && it->second != static_cast<int>(t.args.size()))
    throw std::invalid_argument("symbol '" + t.name + "' used with arities " +
                                std::to_string(it->second) + " and " +
                                std::to_string(t.args.size()));
  for (const Term& a : t.args) collect_symbols(a, arities);
}

}  // namespace detail

inline Trs make_trs(std::vector<Rule> rules, SystemKind kind = SystemKind::term_system) {
  std::map<std::string, int> arities;
  for (const Rule& r : rules) {
    detail::collect_symbols(r.lhs, arities);
    detail::collect_symbols(r.rhs, arities);
  }
  Trs trs;
  trs.rules = std::move(rules);
  trs.kind = kind;
  for (const auto& [name, arity] : arities) trs.signature.push_back(Symbol{name, arity});
  return trs;
}

inline std::map<std::string, int> signature_map(const Trs& trs) {
  std::map<std::string, int> m;
  for (const Symbol& s : trs.signature) m.emplace(s.name, s.arity);
  return m;
}

/// Number of occurrences of variable x in t.
inline int var_count(const Term& t, const std::string& x) {
  if (t.is_var()) return t.name == x ? 1 : 0;
  int n = 0;
  for (const Term& a : t.args) n += var_count(a, x);
  return n;
}

/// Number of occurrences of function symbol f in t.
inline int symbol_count(const Term& t, const std::string& f) {
  if (t.is_var()) return 0;
  int n = t.name == f ? 1 : 0;
  for (const Term& a : t.args) n += symbol_count(a, f);
  return n;
}

/// |t|: total number of symbol occurrences, variables included.
inline int term_size(const Term& t) {
  int n = 1;
  for (const Term& a : t.args) n += term_size(a);
  return n;
}

/// Occurrence counts of a term, keeping variables and function symbols in
/// separate maps so that a variable and a symbol sharing a name never merge.
struct TokenCounts {
  std::map<std::string, int> vars;
  std::map<std::string, int> syms;

  bool empty() const { return vars.empty() && syms.empty(); }
  int total() const {
    int n = 0;
    for (auto& [k, c] : vars) n += c;
    for (auto& [k, c] : syms) n += c;
    return n;
  }
  friend bool operator==(const TokenCounts&, const TokenCounts&) = default;
};

inline void accumulate_tokens(const Term& t, TokenCounts& out) {
  if (t.is_var()) {
    ++out.vars[t.name];
    return;
  }
  ++out.syms[t.name];
  for (const Term& a : t.args) accumulate_tokens(a, out);
}

inline TokenCounts token_counts(const Term& t) {
  TokenCounts out;
  accumulate_tokens(t, out);
  return out;
}

/// Multiset difference of the occurrence counts of l and r. The residuals
/// are disjoint: for every token at most one side keeps a nonzero count.
inline std::pair<TokenCounts, TokenCounts> cancel_common(const Term& l, const Term& r) {
  TokenCounts cl = token_counts(l);
  TokenCounts cr = token_counts(r);
  auto cancel = [](std::map<std::string, int>& a, std::map<std::string, int>& b) {
    for (auto it = a.begin(); it != a.end();) {
      auto jt = b.find(it->first);
      if (jt != b.end()) {
        int common = std::min(it->second, jt->second);
        it->second -= common;
        jt->second -= common;
        if (jt->second == 0) b.erase(jt);
      }
      it = it->second == 0 ? a.erase(it) : std::next(it);
    }
  };
  cancel(cl.vars, cr.vars);
  cancel(cl.syms, cr.syms);
  return {cl, cr};
}

namespace detail {

// Homeomorphic embedding: t is obtained from s by deleting symbol
// occurrences (possibly none).
inline bool emb_geq(const Term& s, const Term& t) {
  if (s == t) return true;
  if (s.is_var()) return false;
  if (t.is_app() && s.name == t.name && s.args.size() == t.args.size()) {
    bool all = true;
    for (std::size_t i = 0; i < s.args.size(); ++i)
      if (!emb_geq(s.args[i], t.args[i])) {
        all = false;
        break;
      }
    if (all) return true;
  }
  for (const Term& a : s.args)
    if (emb_geq(a, t)) return true;
  return false;
}

}  // namespace detail

/// Strict embedding. When it holds for a rule l -> r no constraint formula
/// is needed: every Knuth-Bendix order orients the rule.
inline bool embeds(const Term& s, const Term& t) {
  return !(s == t) && detail::emb_geq(s, t);
}

}  // namespace kbo
