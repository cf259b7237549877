// Clause-level representation, the Tseitin transformation and DIMACS text.
// Tseitin introduces one definition variable per non-literal subnode with
// full biconditional clauses; the output is equisatisfiable with the input
// and linear in its size.

#pragma once

#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "kbo/formula.hpp"

namespace kbo {

struct Cnf {
  std::vector<std::vector<int>> clauses;  // signed DIMACS literals
  int num_vars = 0;

  friend bool operator==(const Cnf&, const Cnf&) = default;
};

namespace cnf_detail {

class Tseitin {
 public:
  Tseitin(Cnf& out, VarPool& pool) : out_(out), pool_(pool) {}

  int literal(const Formula& f) {
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
    int lit = translate(f);
    memo_.emplace(f.id(), lit);
    return lit;
  }

 private:
  int translate(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::constant_true:
      case FormulaKind::constant_false:
        throw std::logic_error("tseitin: constant below the root of a simplified formula");
      case FormulaKind::variable:
        return f.var();
      case FormulaKind::negation:
        return -literal(f.kids()[0]);
      case FormulaKind::conjunction: {
        int d = pool_.fresh("and");
        std::vector<int> big{d};
        for (const Formula& k : f.kids()) {
          int l = literal(k);
          out_.clauses.push_back({-d, l});
          big.push_back(-l);
        }
        out_.clauses.push_back(std::move(big));
        return d;
      }
      case FormulaKind::disjunction: {
        int d = pool_.fresh("or");
        std::vector<int> big{-d};
        for (const Formula& k : f.kids()) {
          int l = literal(k);
          out_.clauses.push_back({d, -l});
          big.push_back(l);
        }
        out_.clauses.push_back(std::move(big));
        return d;
      }
      case FormulaKind::implication: {
        int a = literal(f.kids()[0]);
        int b = literal(f.kids()[1]);
        int d = pool_.fresh("imp");
        out_.clauses.push_back({-d, -a, b});
        out_.clauses.push_back({d, a});
        out_.clauses.push_back({d, -b});
        return d;
      }
      case FormulaKind::equivalence: {
        int a = literal(f.kids()[0]);
        int b = literal(f.kids()[1]);
        int d = pool_.fresh("iff");
        out_.clauses.push_back({-d, -a, b});
        out_.clauses.push_back({-d, a, -b});
        out_.clauses.push_back({d, a, b});
        out_.clauses.push_back({d, -a, -b});
        return d;
      }
      case FormulaKind::exclusive_or: {
        int a = literal(f.kids()[0]);
        int b = literal(f.kids()[1]);
        int d = pool_.fresh("xor");
        out_.clauses.push_back({-d, a, b});
        out_.clauses.push_back({-d, -a, -b});
        out_.clauses.push_back({d, -a, b});
        out_.clauses.push_back({d, a, -b});
        return d;
      }
    }
    throw std::logic_error("tseitin: unreachable");
  }

  Cnf& out_;
  VarPool& pool_;
  std::unordered_map<const Formula::Node*, int> memo_;
};

}  // namespace cnf_detail

/// Transforms a simplified formula into an equisatisfiable CNF, drawing
/// definition variables from the shared pool.
inline Cnf tseitin(const Formula& f, VarPool& pool) {
  Cnf out;
  if (f.is_true()) {
    out.num_vars = pool.count();
    return out;
  }
  if (f.is_false()) {
    out.clauses.push_back({});
    out.num_vars = pool.count();
    return out;
  }
  cnf_detail::Tseitin t(out, pool);
  int root = t.literal(f);
  out.clauses.push_back({root});
  out.num_vars = pool.count();
  return out;
}

inline std::string to_dimacs(const Cnf& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const std::vector<int>& clause : cnf.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

inline Cnf parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  Cnf cnf;
  std::string tok;
  bool have_header = false;
  std::size_t expected_clauses = 0;
  std::vector<int> clause;
  while (in >> tok) {
    if (tok == "c") {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      in >> fmt;
      if (fmt != "cnf") throw std::invalid_argument("dimacs: expected 'p cnf' header");
      in >> cnf.num_vars >> expected_clauses;
      have_header = true;
      continue;
    }
    int lit = std::stoi(tok);
    if (lit == 0) {
      cnf.clauses.push_back(clause);
      clause.clear();
    } else {
      clause.push_back(lit);
    }
  }
  if (!have_header) throw std::invalid_argument("dimacs: missing header");
  if (!clause.empty()) throw std::invalid_argument("dimacs: unterminated clause");
  if (cnf.clauses.size() != expected_clauses)
    throw std::invalid_argument("dimacs: clause count mismatch");
  return cnf;
}

}  // namespace kbo
