// Direct implementation of the Knuth-Bendix order for explicit parameters:
// term weights, admissibility, the order itself with per-case justification,
// rule orientation, and an exhaustive parameter search that serves as an
// independent oracle for the constraint encodings.

#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "kbo/term.hpp"

namespace kbo {

enum class PrecedenceMode { strict, quasi };

/// Per-symbol natural weights plus the variable weight w0 > 0.
struct WeightFunction {
  std::map<std::string, unsigned> weights;
  unsigned w0 = 1;

  friend bool operator==(const WeightFunction&, const WeightFunction&) = default;
};

enum class PrecCompare { greater, equal, less, incomparable };

/// A quasi-precedence in canonical form: a rank per symbol, inducing the
/// total quasi-order f > g iff rank(f) > rank(g). An explicit list of strict
/// pairs may be attached purely for rendering.
class Precedence {
 public:
  Precedence() = default;
  explicit Precedence(std::map<std::string, long long> ranks) : ranks_(std::move(ranks)) {}

  static Precedence from_ranks(std::map<std::string, long long> ranks) {
    return Precedence(std::move(ranks));
  }

  PrecCompare compare(const std::string& f, const std::string& g) const {
    if (f == g) return PrecCompare::equal;
    auto fi = ranks_.find(f);
    auto gi = ranks_.find(g);
    if (fi == ranks_.end() || gi == ranks_.end()) return PrecCompare::incomparable;
    if (fi->second > gi->second) return PrecCompare::greater;
    if (fi->second < gi->second) return PrecCompare::less;
    return PrecCompare::equal;
  }

  bool greater_equal(const std::string& f, const std::string& g) const {
    PrecCompare c = compare(f, g);
    return c == PrecCompare::greater || c == PrecCompare::equal;
  }

  bool is_maximal(const std::string& f, const std::vector<Symbol>& sig) const {
    for (const Symbol& s : sig)
      if (!greater_equal(f, s.name)) return false;
    return true;
  }

  const std::map<std::string, long long>& ranks() const { return ranks_; }

  void set_display_pairs(std::vector<std::pair<std::string, std::string>> pairs) {
    display_pairs_ = std::move(pairs);
  }
  const std::optional<std::vector<std::pair<std::string, std::string>>>& display_pairs() const {
    return display_pairs_;
  }

  friend bool operator==(const Precedence& a, const Precedence& b) {
    return a.ranks_ == b.ranks_;
  }

 private:
  std::map<std::string, long long> ranks_;
  std::optional<std::vector<std::pair<std::string, std::string>>> display_pairs_;
};

struct unknown_symbol_error : std::runtime_error {
  explicit unknown_symbol_error(const std::string& sym)
      : std::runtime_error("no weight assigned to symbol '" + sym + "'") {}
};

struct inadmissible_error : std::runtime_error {
  explicit inadmissible_error(const std::string& why)
      : std::runtime_error("inadmissible parameters: " + why) {}
};

struct search_space_error : std::runtime_error {
  explicit search_space_error(const std::string& why)
      : std::runtime_error("search space too large: " + why) {}
};

/// w(t): w0 for variables, w(f) plus the argument weights for applications.
inline unsigned long long term_weight(const WeightFunction& wf, const Term& t) {
  if (t.is_var()) return wf.w0;
  auto it = wf.weights.find(t.name);
  if (it == wf.weights.end()) throw unknown_symbol_error(t.name);
  unsigned long long w = it->second;
  for (const Term& a : t.args) w += term_weight(wf, a);
  return w;
}

/// Admissibility: w0 > 0, constants weigh at least w0, and every unary
/// symbol of weight zero is a maximal element of the precedence.
inline bool is_admissible(const WeightFunction& wf, const Precedence& p,
                          const std::vector<Symbol>& sig) {
  if (wf.w0 == 0) return false;
  for (const Symbol& s : sig) {
    auto it = wf.weights.find(s.name);
    if (it == wf.weights.end()) return false;
    if (s.arity == 0 && it->second < wf.w0) return false;
    if (s.arity == 1 && it->second == 0 && !p.is_maximal(s.name, sig)) return false;
  }
  return true;
}

enum class KboCase { weight_gt, var_tower, lex_arg, prec_gt };

inline const char* to_string(KboCase c) {
  switch (c) {
    case KboCase::weight_gt: return "weight";
    case KboCase::var_tower: return "variable-tower";
    case KboCase::lex_arg: return "lexicographic";
    case KboCase::prec_gt: return "precedence";
  }
  return "?";
}

namespace detail {

inline bool unary_tower_over(const Term& s, const Term& t) {
  const Term* c = &s;
  while (c->is_app() && c->args.size() == 1) c = &c->args[0];
  return *c == t;
}

}  // namespace detail

/// s >kbo t, returning the case that justifies the comparison. Expects
/// admissible parameters; with inadmissible ones the result is still the
/// literal reading of the definition but no order properties are guaranteed.
inline std::optional<KboCase> kbo_gt(const Term& s, const Term& t, const WeightFunction& wf,
                                     const Precedence& prec) {
  TokenCounts ct = token_counts(t);
  for (const auto& [x, c] : ct.vars)
    if (var_count(s, x) < c) return std::nullopt;

  unsigned long long ws = term_weight(wf, s);
  unsigned long long wt = term_weight(wf, t);
  if (ws > wt) return KboCase::weight_gt;
  if (ws < wt) return std::nullopt;
  if (s == t || s.is_var()) return std::nullopt;
  if (t.is_var()) {
    if (detail::unary_tower_over(s, t)) return KboCase::var_tower;
    return std::nullopt;
  }
  PrecCompare c = prec.compare(s.name, t.name);
  if (c == PrecCompare::greater) return KboCase::prec_gt;
  if (c != PrecCompare::equal) return std::nullopt;
  // f ~ g: first strict difference after an equal prefix, within the
  // shorter argument list. No difference means the case is unsatisfiable.
  std::size_t n = std::min(s.args.size(), t.args.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (s.args[i] == t.args[i]) continue;
    if (kbo_gt(s.args[i], t.args[i], wf, prec)) return KboCase::lex_arg;
    return std::nullopt;
  }
  return std::nullopt;
}

struct RuleJustification {
  Rule rule;
  KboCase how = KboCase::weight_gt;
};

/// A verified orientation: parameters plus one justification per rule.
struct KboProof {
  WeightFunction weights;
  Precedence precedence;
  std::vector<RuleJustification> per_rule;
};

struct OrientFailure {
  Rule rule;
};

/// Checks l >kbo r for every rule. Throws on inadmissible parameters;
/// otherwise returns a proof or the first violating rule.
inline std::variant<KboProof, OrientFailure> orients(const Trs& trs, const WeightFunction& wf,
                                                     const Precedence& prec) {
  if (!is_admissible(wf, prec, trs.signature))
    throw inadmissible_error("weight function is not admissible for the precedence");
  KboProof proof{wf, prec, {}};
  for (const Rule& r : trs.rules) {
    std::optional<KboCase> how = kbo_gt(r.lhs, r.rhs, wf, prec);
    if (!how) return OrientFailure{r};
    proof.per_rule.push_back(RuleJustification{r, *how});
  }
  return proof;
}

/// Exhaustive search over weights in {0..max_weight}, w0 in {1..max_weight}
/// and all total quasi-orders (total orders in strict mode) on the
/// signature. Returns the first admissible orienting pair, if any.
inline std::optional<std::pair<WeightFunction, Precedence>> brute_force(
    const Trs& trs, unsigned max_weight, PrecedenceMode mode = PrecedenceMode::quasi) {
  const std::size_t n = trs.signature.size();
  if (n > 6 || max_weight > 7)
    throw search_space_error("limits are 6 symbols and max_weight 7, got " + std::to_string(n) +
                             " symbols and max_weight " + std::to_string(max_weight));

  std::vector<std::string> names;
  for (const Symbol& s : trs.signature) names.push_back(s.name);

  // Rank assignments: every map sig -> {0..n-1} is some total quasi-order;
  // strict mode keeps only the injective ones (permutations).
  std::vector<std::vector<int>> rank_choices;
  if (n == 0) {
    rank_choices.push_back({});
  } else if (mode == PrecedenceMode::strict) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do rank_choices.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    std::vector<int> ranks(n, 0);
    while (true) {
      rank_choices.push_back(ranks);
      std::size_t i = 0;
      while (i < n && ranks[i] == static_cast<int>(n) - 1) ranks[i++] = 0;
      if (i == n) break;
      ++ranks[i];
    }
  }

  std::vector<unsigned> ws(n, 0);
  while (true) {
    for (unsigned w0 = 1; w0 <= max_weight; ++w0) {
      WeightFunction wf;
      wf.w0 = w0;
      for (std::size_t i = 0; i < n; ++i) wf.weights[names[i]] = ws[i];
      for (const std::vector<int>& ranks : rank_choices) {
        std::map<std::string, long long> rm;
        for (std::size_t i = 0; i < n; ++i) rm[names[i]] = ranks[i];
        Precedence prec(std::move(rm));
        if (!is_admissible(wf, prec, trs.signature)) continue;
        if (std::holds_alternative<KboProof>(orients(trs, wf, prec)))
          return std::make_pair(wf, prec);
      }
    }
    std::size_t i = 0;
    while (i < n && ws[i] == max_weight) ws[i++] = 0;
    if (i == n) break;
    ++ws[i];
  }
  return std::nullopt;
}

}  // namespace kbo
