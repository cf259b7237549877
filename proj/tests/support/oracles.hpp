// Test-only oracles and input generators. Everything here is deliberately
// independent of the implementation paths it checks: embedding by
// exhaustive deletion, satisfiability by truth table, CNF models by
// canonical extension of the original variables.

#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kbo/cnf.hpp"
#include "kbo/formula.hpp"
#include "kbo/term.hpp"

#ifndef KBO_DATA_DIR
#define KBO_DATA_DIR "data"
#endif

namespace oracle {

inline std::string data_path(const std::string& rel) {
  return std::string(KBO_DATA_DIR) + "/" + rel;
}

// --- embedding -------------------------------------------------------------

// All terms reachable from t by repeatedly replacing a subterm with one of
// its arguments ("delete a symbol occurrence, keep one branch").
inline void deletion_closure(const kbo::Term& t, std::set<std::string>& seen,
                             std::vector<kbo::Term>& out) {
  if (!seen.insert(kbo::to_string(t)).second) return;
  out.push_back(t);
  // one-step deletions at the root
  for (const kbo::Term& arg : t.args) deletion_closure(arg, seen, out);
  // one-step deletions below the root
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    std::set<std::string> sub_seen;
    std::vector<kbo::Term> subs;
    deletion_closure(t.args[i], sub_seen, subs);
    for (const kbo::Term& replacement : subs) {
      if (replacement == t.args[i]) continue;
      kbo::Term copy = t;
      copy.args[i] = replacement;
      deletion_closure(copy, seen, out);
    }
  }
}

// Strict embedding by brute force: t is in the deletion closure of s and
// differs from s.
inline bool embeds_by_deletion(const kbo::Term& s, const kbo::Term& t) {
  if (s == t) return false;
  std::set<std::string> seen;
  std::vector<kbo::Term> closure;
  deletion_closure(s, seen, closure);
  for (const kbo::Term& u : closure)
    if (u == t) return true;
  return false;
}

// All terms of at most max_size symbols over the given signature and one
// variable x.
inline std::vector<kbo::Term> enumerate_terms(const std::vector<kbo::Symbol>& sig, int max_size) {
  std::vector<std::vector<kbo::Term>> by_size(static_cast<std::size_t>(max_size) + 1);
  by_size[1].push_back(kbo::Term::var("x"));
  for (const kbo::Symbol& s : sig)
    if (s.arity == 0) by_size[1].push_back(kbo::Term::app(s.name));
  for (int size = 2; size <= max_size; ++size) {
    for (const kbo::Symbol& s : sig) {
      if (s.arity == 1) {
        for (const kbo::Term& a : by_size[static_cast<std::size_t>(size - 1)])
          by_size[static_cast<std::size_t>(size)].push_back(kbo::Term::app(s.name, {a}));
      } else if (s.arity == 2) {
        for (int left = 1; left <= size - 2; ++left)
          for (const kbo::Term& a : by_size[static_cast<std::size_t>(left)])
            for (const kbo::Term& b : by_size[static_cast<std::size_t>(size - 1 - left)])
              by_size[static_cast<std::size_t>(size)].push_back(kbo::Term::app(s.name, {a, b}));
      }
    }
  }
  std::vector<kbo::Term> all;
  for (auto& bucket : by_size)
    for (kbo::Term& t : bucket) all.push_back(std::move(t));
  return all;
}

// --- propositional ----------------------------------------------------------

// Truth-table satisfiability over the variables named in the formula.
inline bool satisfiable_by_truth_table(const kbo::Formula& f, int num_vars) {
  std::vector<bool> assignment(static_cast<std::size_t>(num_vars) + 1, false);
  for (unsigned long long mask = 0; mask < (1ULL << num_vars); ++mask) {
    for (int v = 1; v <= num_vars; ++v) assignment[static_cast<std::size_t>(v)] = (mask >> (v - 1)) & 1;
    if (kbo::eval(f, assignment)) return true;
  }
  return false;
}

// CNF satisfiability without a SAT solver, for CNFs produced by the Tseitin
// transformation: definition variables are functions of earlier variables,
// so trying every assignment of the first num_original vars and completing
// greedily clause-by-clause decides satisfiability. Falls back to full
// enumeration when the variable count is small.
inline bool cnf_satisfiable_by_enumeration(const kbo::Cnf& cnf, int enumerate_vars) {
  std::vector<bool> assignment(static_cast<std::size_t>(cnf.num_vars) + 1, false);
  auto clauses_ok = [&](bool partial_up_to_enumerated) {
    for (const auto& clause : cnf.clauses) {
      bool sat = false;
      bool relevant = true;
      for (int lit : clause) {
        int v = std::abs(lit);
        if (partial_up_to_enumerated && v > enumerate_vars) {
          relevant = false;
          break;
        }
        if ((lit > 0) == assignment[static_cast<std::size_t>(v)]) sat = true;
      }
      if (relevant && !sat) return false;
    }
    return true;
  };
  // unit-propagate the definition variables, then check all clauses
  auto complete_and_check = [&]() {
    std::vector<int> fixed(static_cast<std::size_t>(cnf.num_vars) + 1, 0);
    for (int v = 1; v <= enumerate_vars; ++v)
      fixed[static_cast<std::size_t>(v)] = assignment[static_cast<std::size_t>(v)] ? 1 : -1;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& clause : cnf.clauses) {
        int unassigned = 0;
        int last = 0;
        bool sat = false;
        for (int lit : clause) {
          int v = std::abs(lit);
          int val = fixed[static_cast<std::size_t>(v)];
          if (val == 0) {
            ++unassigned;
            last = lit;
          } else if ((lit > 0) == (val == 1)) {
            sat = true;
          }
        }
        if (sat) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          fixed[static_cast<std::size_t>(std::abs(last))] = last > 0 ? 1 : -1;
          changed = true;
        }
      }
    }
    // every Tseitin variable is forced once the originals are set
    for (const auto& clause : cnf.clauses) {
      bool sat = false;
      bool open = false;
      for (int lit : clause) {
        int val = fixed[static_cast<std::size_t>(std::abs(lit))];
        if (val == 0) open = true;
        else if ((lit > 0) == (val == 1)) sat = true;
      }
      if (!sat && !open) return false;
      if (!sat && open) return false;  // should not happen for Tseitin CNFs
    }
    return true;
  };
  for (unsigned long long mask = 0; mask < (1ULL << enumerate_vars); ++mask) {
    for (int v = 1; v <= enumerate_vars; ++v)
      assignment[static_cast<std::size_t>(v)] = (mask >> (v - 1)) & 1;
    if (!clauses_ok(true)) continue;
    if (complete_and_check()) return true;
  }
  return false;
}

// --- random generators -------------------------------------------------------

struct RandomFormula {
  kbo::Formula formula;
  int num_vars = 0;
};

inline kbo::Formula random_formula_node(std::mt19937& rng, int num_vars, int depth) {
  std::uniform_int_distribution<int> pick_var(1, num_vars);
  if (depth == 0 || std::uniform_int_distribution<int>(0, 5)(rng) == 0) {
    int which = std::uniform_int_distribution<int>(0, 9)(rng);
    if (which == 0) return kbo::mk_true();
    if (which == 1) return kbo::mk_false();
    return kbo::mk_var(pick_var(rng));
  }
  int kind = std::uniform_int_distribution<int>(0, 5)(rng);
  auto sub = [&] { return random_formula_node(rng, num_vars, depth - 1); };
  switch (kind) {
    case 0: return kbo::Formula::make(kbo::FormulaKind::negation, {sub()});
    case 1: {
      std::vector<kbo::Formula> kids;
      int n = std::uniform_int_distribution<int>(2, 3)(rng);
      for (int i = 0; i < n; ++i) kids.push_back(sub());
      return kbo::Formula::make(kbo::FormulaKind::conjunction, std::move(kids));
    }
    case 2: {
      std::vector<kbo::Formula> kids;
      int n = std::uniform_int_distribution<int>(2, 3)(rng);
      for (int i = 0; i < n; ++i) kids.push_back(sub());
      return kbo::Formula::make(kbo::FormulaKind::disjunction, std::move(kids));
    }
    case 3: return kbo::Formula::make(kbo::FormulaKind::implication, {sub(), sub()});
    case 4: return kbo::Formula::make(kbo::FormulaKind::equivalence, {sub(), sub()});
    default: return kbo::Formula::make(kbo::FormulaKind::exclusive_or, {sub(), sub()});
  }
}

inline RandomFormula random_formula(std::mt19937& rng, int max_vars, int depth) {
  int num_vars = std::uniform_int_distribution<int>(1, max_vars)(rng);
  return RandomFormula{random_formula_node(rng, num_vars, depth), num_vars};
}

// Random small TRSs: up to 3 symbols of arity up to 2, terms of depth up to
// 3, up to 3 rules. Right-hand sides mostly reuse left-hand variables; a
// fresh variable sneaks in occasionally to exercise the rejection paths.
class RandomTrsGenerator {
 public:
  explicit RandomTrsGenerator(unsigned seed) : rng_(seed) {}

  kbo::Trs next() {
    int num_syms = std::uniform_int_distribution<int>(1, 3)(rng_);
    symbols_.clear();
    const char* names[] = {"f", "g", "h"};
    for (int i = 0; i < num_syms; ++i)
      symbols_.push_back(kbo::Symbol{names[i], std::uniform_int_distribution<int>(0, 2)(rng_)});
    std::vector<kbo::Rule> rules;
    int num_rules = std::uniform_int_distribution<int>(1, 3)(rng_);
    for (int i = 0; i < num_rules; ++i) {
      kbo::Term lhs = random_term(3, false);
      kbo::Term rhs = random_term(3, true);
      rules.push_back(kbo::Rule{std::move(lhs), std::move(rhs)});
    }
    return kbo::make_trs(std::move(rules));
  }

 private:
  kbo::Term random_term(int depth, bool rhs) {
    bool leaf = depth == 0 || std::uniform_int_distribution<int>(0, 2)(rng_) == 0;
    bool has_applicable = false;
    for (const kbo::Symbol& s : symbols_)
      if (depth > 0 || s.arity == 0) has_applicable = true;
    if (leaf || !has_applicable) {
      // variables x, y; rarely z on the right to produce fresh-variable rules
      int pick = std::uniform_int_distribution<int>(0, rhs ? 20 : 1)(rng_);
      if (pick == 20) return kbo::Term::var("z");
      return kbo::Term::var(pick % 2 == 0 ? "x" : "y");
    }
    while (true) {
      const kbo::Symbol& s =
          symbols_[static_cast<std::size_t>(std::uniform_int_distribution<int>(
              0, static_cast<int>(symbols_.size()) - 1)(rng_))];
      if (depth == 0 && s.arity > 0) continue;
      std::vector<kbo::Term> args;
      for (int i = 0; i < s.arity; ++i) args.push_back(random_term(depth - 1, rhs));
      return kbo::Term::app(s.name, std::move(args));
    }
  }

  std::mt19937 rng_;
  std::vector<kbo::Symbol> symbols_;
};

}  // namespace oracle
