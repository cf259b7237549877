// Solves pseudo-boolean problems by translation to CNF: constraints are
// normalized to positive coefficients over literals, the weighted literal
// contributions are summed through the binary adder circuits and the total
// is compared against the bound. Minimization descends on the objective,
// re-solving with objective <= v - 1 until unsatisfiability certifies the
// last model optimal.

#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kbo/bitvector.hpp"
#include "kbo/cnf.hpp"
#include "kbo/pb.hpp"
#include "kbo/sat_solver.hpp"

namespace kbo {

inline long long pb_value(const std::vector<PbTerm>& terms, const Model& m) {
  long long v = 0;
  for (const PbTerm& t : terms) {
    if (t.var <= 0 || static_cast<std::size_t>(t.var) >= m.size())
      throw std::out_of_range("model does not cover pb variable " + std::to_string(t.var));
    if (m[static_cast<std::size_t>(t.var)]) v += t.coeff;
  }
  return v;
}

inline bool pb_satisfied(const PbConstraint& c, const Model& m) {
  long long v = pb_value(c.terms, m);
  switch (c.rel) {
    case PbRel::geq: return v >= c.bound;
    case PbRel::eq: return v == c.bound;
    case PbRel::leq: return v <= c.bound;
  }
  return false;
}

namespace pb_detail {

struct NormalizedPb {
  std::vector<std::pair<long long, int>> terms;  // coeff > 0, signed literal
  bool is_eq = false;
  long long bound = 0;
};

/// Rewrites negative coefficients over complemented literals and flips a
/// 'leq' into 'geq', leaving only >= and = forms with positive
/// coefficients. Models are preserved exactly.
inline NormalizedPb normalize(const PbConstraint& c) {
  NormalizedPb out;
  out.is_eq = c.rel == PbRel::eq;
  long long flip = c.rel == PbRel::leq ? -1 : 1;
  out.bound = flip * c.bound;
  for (const PbTerm& t : c.terms) {
    long long a = flip * t.coeff;
    if (a == 0) continue;
    if (a > 0) {
      out.terms.emplace_back(a, t.var);
    } else {
      out.terms.emplace_back(-a, -t.var);
      out.bound += -a;
    }
  }
  return out;
}

inline int bits_for(long long value) {
  int w = 1;
  while ((1LL << w) <= value) ++w;
  return w;
}

inline Formula translate(const NormalizedPb& c, VarPool& pool) {
  long long sum = 0;
  for (const auto& [a, lit] : c.terms) sum += a;
  if (c.terms.empty()) return Formula::constant(c.is_eq ? c.bound == 0 : c.bound <= 0);
  if (!c.is_eq && c.bound <= 0) return mk_true();
  if (c.bound > sum || (c.is_eq && c.bound < 0)) return mk_false();

  const int width = bits_for(sum);
  WeightedBits acc;
  bool first = true;
  for (const auto& [a, lit] : c.terms) {
    Formula l = lit > 0 ? mk_var(lit) : mk_not(mk_var(-lit));
    BitVector bv;
    bv.bits.reserve(static_cast<std::size_t>(width));
    for (int i = width - 1; i >= 0; --i)
      bv.bits.push_back((a >> i) & 1 ? l : mk_false());
    if (first) {
      acc = WeightedBits{std::move(bv), mk_true()};
      first = false;
    } else {
      acc = bv_add(acc, WeightedBits{std::move(bv), mk_true()}, pool);
    }
  }
  BitVector bound = BitVector::constant(static_cast<unsigned long long>(c.bound), width);
  Formula cmp = c.is_eq ? bv_eq(acc.bits, bound) : bv_geq(acc.bits, bound);
  return mk_and(cmp, acc.side);
}

}  // namespace pb_detail

struct PbSolveOutcome {
  SolveStatus status = SolveStatus::unknown;
  Model model;  // covers the problem variables when sat
  SolverStats stats;
};

/// Decides one PB problem (the objective, if any, is ignored here).
/// Returned models are re-checked against the original integer constraints.
inline PbSolveOutcome solve_pb(const PbProblem& p, const SolverLimits& limits = {}) {
  VarPool pool;
  for (int v = 1; v <= p.num_vars; ++v) pool.fresh("x" + std::to_string(v));
  std::vector<Formula> parts;
  parts.reserve(p.constraints.size());
  for (const PbConstraint& c : p.constraints)
    parts.push_back(pb_detail::translate(pb_detail::normalize(c), pool));
  Formula formula = mk_and(std::move(parts));
  Cnf cnf = tseitin(formula, pool);
  SolveOutcome s = solve(cnf, limits);

  PbSolveOutcome out;
  out.status = s.status;
  out.stats = s.stats;
  if (s.status == SolveStatus::sat) {
    out.model = std::move(s.model);
    if (out.model.size() < static_cast<std::size_t>(p.num_vars) + 1)
      out.model.resize(static_cast<std::size_t>(p.num_vars) + 1, false);
    for (const PbConstraint& c : p.constraints)
      if (!pb_satisfied(c, out.model))
        throw std::logic_error("pb translation produced a non-model");
  }
  return out;
}

struct MinimizeOutcome {
  SolveStatus status = SolveStatus::unknown;  // sat = a feasible model was found
  Model best_model;
  long long best_value = 0;
  std::vector<long long> trace;  // objective value per accepted iteration
  bool optimal = false;          // certified by the final unsat step
  SolverStats stats;
};

/// Descending linear search on the objective. Each accepted model tightens
/// the bound to value - 1; the search is optimal when the tightened problem
/// becomes unsatisfiable within the limits.
inline MinimizeOutcome minimize(const PbProblem& p, const SolverLimits& limits = {}) {
  if (!p.objective) throw std::invalid_argument("minimize requires an objective");
  MinimizeOutcome out;
  PbProblem current = p;
  while (true) {
    PbSolveOutcome step = solve_pb(current, limits);
    out.stats.conflicts += step.stats.conflicts;
    out.stats.decisions += step.stats.decisions;
    out.stats.propagations += step.stats.propagations;
    out.stats.restarts += step.stats.restarts;
    if (step.status == SolveStatus::unknown) {
      if (out.status != SolveStatus::sat) out.status = SolveStatus::unknown;
      return out;
    }
    if (step.status == SolveStatus::unsat) {
      if (out.status == SolveStatus::sat) out.optimal = true;
      else out.status = SolveStatus::unsat;
      return out;
    }
    long long v = pb_value(p.objective->terms, step.model);
    out.status = SolveStatus::sat;
    out.best_model = std::move(step.model);
    out.best_value = v;
    out.trace.push_back(v);
    std::vector<PbTerm> obj = p.objective->terms;
    current = p;
    current.constraints.push_back(PbConstraint::make(std::move(obj), PbRel::leq, v - 1));
  }
}

}  // namespace kbo
