// Propositional formulas as immutable shared trees. The building functions
// fold constants at construction time, so a fully built formula contains
// True/False at most as its root.

#pragma once

#include <cassert>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace kbo {

enum class FormulaKind {
  constant_true,
  constant_false,
  variable,
  negation,
  conjunction,
  disjunction,
  implication,
  equivalence,
  exclusive_or,
};

class Formula {
 public:
  struct Node {
    FormulaKind kind;
    int var = 0;
    std::vector<Formula> kids;
  };

  Formula() : Formula(constant(false)) {}

  FormulaKind kind() const { return node_->kind; }
  int var() const { return node_->var; }
  const std::vector<Formula>& kids() const { return node_->kids; }

  bool is_true() const { return kind() == FormulaKind::constant_true; }
  bool is_false() const { return kind() == FormulaKind::constant_false; }
  bool is_const() const { return is_true() || is_false(); }

  /// Pointer identity; cheap and sufficient for the folds used here.
  bool same(const Formula& o) const { return node_ == o.node_; }
  const Node* id() const { return node_.get(); }

  static Formula constant(bool b) {
    static const Formula t{std::make_shared<Node>(Node{FormulaKind::constant_true, 0, {}})};
    static const Formula f{std::make_shared<Node>(Node{FormulaKind::constant_false, 0, {}})};
    return b ? t : f;
  }

  static Formula make(FormulaKind kind, std::vector<Formula> kids, int var = 0) {
    return Formula{std::make_shared<Node>(Node{kind, var, std::move(kids)})};
  }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

inline Formula mk_true() { return Formula::constant(true); }
inline Formula mk_false() { return Formula::constant(false); }

inline Formula mk_var(int id) {
  assert(id > 0);
  return Formula::make(FormulaKind::variable, {}, id);
}

inline Formula mk_not(const Formula& a) {
  if (a.is_true()) return mk_false();
  if (a.is_false()) return mk_true();
  if (a.kind() == FormulaKind::negation) return a.kids()[0];
  return Formula::make(FormulaKind::negation, {a});
}

namespace formula_detail {

// (node, negated) identity of a literal-shaped formula, used to spot
// complementary children inside one conjunction or disjunction.
inline std::pair<const Formula::Node*, bool> polarity_id(const Formula& f) {
  if (f.kind() == FormulaKind::negation) return {f.kids()[0].id(), true};
  return {f.id(), false};
}

inline Formula nary(FormulaKind kind, std::vector<Formula> kids) {
  const bool conj = kind == FormulaKind::conjunction;
  const Formula absorb = conj ? mk_false() : mk_true();
  const Formula neutral = conj ? mk_true() : mk_false();
  std::vector<Formula> out;
  std::set<std::pair<const Formula::Node*, bool>> seen;
  // Flatten one level of nesting and drop neutral / duplicate children.
  std::vector<Formula> queue(std::move(kids));
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Formula k = queue[i];  // by value: growing the queue may reallocate
    if (k.same(absorb)) return absorb;
    if (k.same(neutral)) continue;
    if (k.kind() == kind) {
      for (const Formula& g : k.kids()) queue.push_back(g);
      continue;
    }
    auto pid = polarity_id(k);
    if (seen.count({pid.first, !pid.second})) return absorb;
    if (!seen.insert(pid).second) continue;
    out.push_back(k);
  }
  if (out.empty()) return neutral;
  if (out.size() == 1) return out[0];
  return Formula::make(kind, std::move(out));
}

}  // namespace formula_detail

inline Formula mk_and(std::vector<Formula> kids) {
  return formula_detail::nary(FormulaKind::conjunction, std::move(kids));
}
inline Formula mk_and(const Formula& a, const Formula& b) { return mk_and(std::vector{a, b}); }
inline Formula mk_and(const Formula& a, const Formula& b, const Formula& c) {
  return mk_and(std::vector{a, b, c});
}

inline Formula mk_or(std::vector<Formula> kids) {
  return formula_detail::nary(FormulaKind::disjunction, std::move(kids));
}
inline Formula mk_or(const Formula& a, const Formula& b) { return mk_or(std::vector{a, b}); }

inline Formula mk_implies(const Formula& a, const Formula& b) {
  if (a.is_false() || b.is_true()) return mk_true();
  if (a.is_true()) return b;
  if (b.is_false()) return mk_not(a);
  if (a.same(b)) return mk_true();
  return Formula::make(FormulaKind::implication, {a, b});
}

inline Formula mk_iff(const Formula& a, const Formula& b) {
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  if (a.is_false()) return mk_not(b);
  if (b.is_false()) return mk_not(a);
  if (a.same(b)) return mk_true();
  auto pa = formula_detail::polarity_id(a);
  auto pb = formula_detail::polarity_id(b);
  if (pa.first == pb.first && pa.second != pb.second) return mk_false();
  return Formula::make(FormulaKind::equivalence, {a, b});
}

inline Formula mk_xor(const Formula& a, const Formula& b) {
  if (a.is_false()) return b;
  if (b.is_false()) return a;
  if (a.is_true()) return mk_not(b);
  if (b.is_true()) return mk_not(a);
  if (a.same(b)) return mk_false();
  auto pa = formula_detail::polarity_id(a);
  auto pb = formula_detail::polarity_id(b);
  if (pa.first == pb.first && pa.second != pb.second) return mk_true();
  return Formula::make(FormulaKind::exclusive_or, {a, b});
}

/// Rebuilds a formula through the folding constructors: constant
/// propagation, double negation removal, unit collapse. The result is
/// logically equivalent to the input.
inline Formula simplify(const Formula& f) {
  std::unordered_map<const Formula::Node*, Formula> memo;
  auto rec = [&](auto&& self, const Formula& g) -> Formula {
    if (auto it = memo.find(g.id()); it != memo.end()) return it->second;
    Formula out = g;
    switch (g.kind()) {
      case FormulaKind::constant_true:
      case FormulaKind::constant_false:
      case FormulaKind::variable:
        break;
      case FormulaKind::negation:
        out = mk_not(self(self, g.kids()[0]));
        break;
      case FormulaKind::conjunction:
      case FormulaKind::disjunction: {
        std::vector<Formula> kids;
        kids.reserve(g.kids().size());
        for (const Formula& k : g.kids()) kids.push_back(self(self, k));
        out = g.kind() == FormulaKind::conjunction ? mk_and(std::move(kids))
                                                   : mk_or(std::move(kids));
        break;
      }
      case FormulaKind::implication:
        out = mk_implies(self(self, g.kids()[0]), self(self, g.kids()[1]));
        break;
      case FormulaKind::equivalence:
        out = mk_iff(self(self, g.kids()[0]), self(self, g.kids()[1]));
        break;
      case FormulaKind::exclusive_or:
        out = mk_xor(self(self, g.kids()[0]), self(self, g.kids()[1]));
        break;
    }
    memo.emplace(g.id(), out);
    return out;
  };
  return rec(rec, f);
}

/// Evaluates under a total assignment indexed by variable id.
inline bool eval(const Formula& f, const std::vector<bool>& assignment) {
  std::unordered_map<const Formula::Node*, bool> memo;
  auto rec = [&](auto&& self, const Formula& g) -> bool {
    if (auto it = memo.find(g.id()); it != memo.end()) return it->second;
    bool out = false;
    switch (g.kind()) {
      case FormulaKind::constant_true: out = true; break;
      case FormulaKind::constant_false: out = false; break;
      case FormulaKind::variable:
        if (g.var() >= static_cast<int>(assignment.size()))
          throw std::out_of_range("assignment does not cover variable " + std::to_string(g.var()));
        out = assignment[g.var()];
        break;
      case FormulaKind::negation: out = !self(self, g.kids()[0]); break;
      case FormulaKind::conjunction:
        out = true;
        for (const Formula& k : g.kids()) out = out && self(self, k);
        break;
      case FormulaKind::disjunction:
        out = false;
        for (const Formula& k : g.kids()) out = out || self(self, k);
        break;
      case FormulaKind::implication:
        out = !self(self, g.kids()[0]) || self(self, g.kids()[1]);
        break;
      case FormulaKind::equivalence:
        out = self(self, g.kids()[0]) == self(self, g.kids()[1]);
        break;
      case FormulaKind::exclusive_or:
        out = self(self, g.kids()[0]) != self(self, g.kids()[1]);
        break;
    }
    memo.emplace(g.id(), out);
    return out;
  };
  return rec(rec, f);
}

/// Number of distinct nodes in the formula DAG.
inline std::size_t node_count(const Formula& f) {
  std::unordered_set<const Formula::Node*> seen;
  auto rec = [&](auto&& self, const Formula& g) -> void {
    if (!seen.insert(g.id()).second) return;
    for (const Formula& k : g.kids()) self(self, k);
  };
  rec(rec, f);
  return seen.size();
}

/// Collects every variable id occurring in the formula.
inline void collect_vars(const Formula& f, std::set<int>& out) {
  std::unordered_set<const Formula::Node*> seen;
  auto rec = [&](auto&& self, const Formula& g) -> void {
    if (!seen.insert(g.id()).second) return;
    if (g.kind() == FormulaKind::variable) out.insert(g.var());
    for (const Formula& k : g.kids()) self(self, k);
  };
  rec(rec, f);
}

/// Issues fresh, never reused variable ids and remembers a diagnostic name
/// for each.
class VarPool {
 public:
  VarPool() : names_(1) {}

  int fresh(std::string name = {}) {
    names_.push_back(std::move(name));
    return static_cast<int>(names_.size()) - 1;
  }

  int count() const { return static_cast<int>(names_.size()) - 1; }

  const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }

 private:
  std::vector<std::string> names_;
};

}  // namespace kbo
