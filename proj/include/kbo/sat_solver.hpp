// Conflict-driven clause learning SAT solver: two-watched-literal
// propagation, first-UIP conflict analysis, activity-based branching with
// phase saving, and Luby restarts. Branching ties break towards the lowest
// variable id and no randomness is used, so verdicts and models are
// deterministic. A conflict budget or deadline makes the solver answer
// "unknown", never "unsat".

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kbo/cnf.hpp"

namespace kbo {

enum class SolveStatus { sat, unsat, unknown };

/// Total assignment indexed by variable id; index 0 is unused.
using Model = std::vector<bool>;

struct SolverStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
};

struct SolverLimits {
  std::uint64_t max_conflicts = 0;  // 0 = unlimited
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::unknown;
  Model model;
  SolverStats stats;
};

namespace sat_detail {

class VarHeap {
 public:
  VarHeap(const std::vector<double>& act, int nvars) : act_(act), pos_(nvars + 1, -1) {
    for (int v = 1; v <= nvars; ++v) insert(v);
  }

  bool empty() const { return heap_.empty(); }
  bool contains(int v) const { return pos_[static_cast<std::size_t>(v)] >= 0; }

  void insert(int v) {
    if (contains(v)) return;
    pos_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(static_cast<int>(heap_.size()) - 1);
  }

  int pop() {
    int v = heap_[0];
    heap_[0] = heap_.back();
    pos_[static_cast<std::size_t>(heap_[0])] = 0;
    heap_.pop_back();
    pos_[static_cast<std::size_t>(v)] = -1;
    if (!heap_.empty()) down(0);
    return v;
  }

  void increased(int v) {
    if (contains(v)) up(pos_[static_cast<std::size_t>(v)]);
  }

 private:
  bool before(int a, int b) const {
    double aa = act_[static_cast<std::size_t>(a)];
    double ab = act_[static_cast<std::size_t>(b)];
    return aa > ab || (aa == ab && a < b);
  }

  void up(int i) {
    int v = heap_[static_cast<std::size_t>(i)];
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (!before(v, heap_[static_cast<std::size_t>(parent)])) break;
      heap_[static_cast<std::size_t>(i)] = heap_[static_cast<std::size_t>(parent)];
      pos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(i)])] = i;
      i = parent;
    }
    heap_[static_cast<std::size_t>(i)] = v;
    pos_[static_cast<std::size_t>(v)] = i;
  }

  void down(int i) {
    int v = heap_[static_cast<std::size_t>(i)];
    const int n = static_cast<int>(heap_.size());
    while (true) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n &&
          before(heap_[static_cast<std::size_t>(child + 1)], heap_[static_cast<std::size_t>(child)]))
        ++child;
      if (!before(heap_[static_cast<std::size_t>(child)], v)) break;
      heap_[static_cast<std::size_t>(i)] = heap_[static_cast<std::size_t>(child)];
      pos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(i)])] = i;
      i = child;
    }
    heap_[static_cast<std::size_t>(i)] = v;
    pos_[static_cast<std::size_t>(v)] = i;
  }

  const std::vector<double>& act_;
  std::vector<int> pos_;
  std::vector<int> heap_;
};

inline std::uint64_t luby(std::uint64_t i) {
  // 1, 1, 2, 1, 1, 2, 4, ... (1-indexed)
  std::uint64_t size = 1;
  std::uint64_t seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) / 2;
    --seq;
    i %= size;
  }
  return std::uint64_t{1} << seq;
}

}  // namespace sat_detail

class CdclSolver {
 public:
  explicit CdclSolver(const Cnf& cnf)
      : nvars_(cnf.num_vars),
        value_(static_cast<std::size_t>(cnf.num_vars) + 1, 0),
        level_(static_cast<std::size_t>(cnf.num_vars) + 1, 0),
        reason_(static_cast<std::size_t>(cnf.num_vars) + 1, -1),
        phase_(static_cast<std::size_t>(cnf.num_vars) + 1, false),
        seen_(static_cast<std::size_t>(cnf.num_vars) + 1, 0),
        activity_(static_cast<std::size_t>(cnf.num_vars) + 1, 0.0),
        watches_(2 * static_cast<std::size_t>(cnf.num_vars)) {
    for (const std::vector<int>& clause : cnf.clauses) add_input_clause(clause);
    input_ = &cnf;
  }

  SolveOutcome solve(const SolverLimits& limits = {}) {
    SolveOutcome out;
    if (!ok_) {
      out.status = SolveStatus::unsat;
      return out;
    }
    if (deadline_passed(limits)) {
      out.status = SolveStatus::unknown;
      return out;
    }
    sat_detail::VarHeap heap(activity_, nvars_);
    heap_ = &heap;

    std::uint64_t conflicts_since_restart = 0;
    std::uint64_t restart_threshold = restart_unit_ * sat_detail::luby(1);

    while (true) {
      int confl = propagate();
      if (confl >= 0) {
        ++stats_.conflicts;
        ++conflicts_since_restart;
        if (current_level() == 0) {
          out.status = SolveStatus::unsat;
          out.stats = stats_;
          return out;
        }
        std::vector<int> learnt;
        int bt = 0;
        analyze(confl, learnt, bt);
        backtrack(bt);
        attach_learnt(learnt);
        decay_activities();
        if (limits.max_conflicts && stats_.conflicts >= limits.max_conflicts) {
          out.status = SolveStatus::unknown;
          out.stats = stats_;
          return out;
        }
        if (stats_.conflicts % 256 == 0 && deadline_passed(limits)) {
          out.status = SolveStatus::unknown;
          out.stats = stats_;
          return out;
        }
        continue;
      }
      if (conflicts_since_restart >= restart_threshold) {
        ++stats_.restarts;
        conflicts_since_restart = 0;
        restart_threshold = restart_unit_ * sat_detail::luby(stats_.restarts + 1);
        backtrack(0);
        continue;
      }
      int next = pick_branch_var();
      if (next == 0) {
        out.status = SolveStatus::sat;
        out.model = extract_model();
        out.stats = stats_;
        return out;
      }
      ++stats_.decisions;
      if (stats_.decisions % 1024 == 0 && deadline_passed(limits)) {
        out.status = SolveStatus::unknown;
        out.stats = stats_;
        return out;
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(phase_[static_cast<std::size_t>(next)] ? next : -next, -1);
    }
  }

 private:
  static std::size_t enc(int lit) {
    return 2 * static_cast<std::size_t>(std::abs(lit) - 1) + (lit < 0 ? 1 : 0);
  }

  int value_of(int lit) const {
    int v = value_[static_cast<std::size_t>(std::abs(lit))];
    return lit > 0 ? v : -v;
  }

  int current_level() const { return static_cast<int>(trail_lim_.size()); }

  bool deadline_passed(const SolverLimits& limits) const {
    return limits.deadline && std::chrono::steady_clock::now() >= *limits.deadline;
  }

  void add_input_clause(const std::vector<int>& in) {
    if (!ok_) return;
    std::vector<int> clause;
    for (int lit : in) {
      if (lit == 0 || std::abs(lit) > nvars_)
        throw std::invalid_argument("clause literal out of range");
      bool dup = false;
      for (int other : clause) {
        if (other == lit) dup = true;
        if (other == -lit) return;  // tautology
      }
      if (!dup) clause.push_back(lit);
    }
    if (clause.empty()) {
      ok_ = false;
      return;
    }
    if (clause.size() == 1) {
      int v = value_of(clause[0]);
      if (v == -1) ok_ = false;
      if (v == 0) enqueue(clause[0], -1);
      return;
    }
    attach(std::move(clause));
  }

  int attach(std::vector<int> clause) {
    int ci = static_cast<int>(clauses_.size());
    watches_[enc(clause[0])].push_back(ci);
    watches_[enc(clause[1])].push_back(ci);
    clauses_.push_back(std::move(clause));
    return ci;
  }

  void enqueue(int lit, int reason) {
    std::size_t v = static_cast<std::size_t>(std::abs(lit));
    value_[v] = lit > 0 ? 1 : -1;
    level_[v] = current_level();
    reason_[v] = reason;
    trail_.push_back(lit);
  }

  int propagate() {
    while (qhead_ < trail_.size()) {
      int p = trail_[qhead_++];
      ++stats_.propagations;
      int false_lit = -p;
      std::vector<int>& wl = watches_[enc(false_lit)];
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < wl.size()) {
        int ci = wl[i++];
        std::vector<int>& c = clauses_[static_cast<std::size_t>(ci)];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (value_of(c[0]) == 1) {
          wl[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t m = 2; m < c.size(); ++m) {
          if (value_of(c[m]) != -1) {
            std::swap(c[1], c[m]);
            watches_[enc(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        wl[j++] = ci;
        if (value_of(c[0]) == -1) {
          while (i < wl.size()) wl[j++] = wl[i++];
          wl.resize(j);
          qhead_ = trail_.size();
          return ci;
        }
        enqueue(c[0], ci);
      }
      wl.resize(j);
    }
    return -1;
  }

  void analyze(int confl, std::vector<int>& learnt, int& bt_level) {
    learnt.assign(1, 0);
    int counter = 0;
    int p = 0;
    std::size_t index = trail_.size();
    std::vector<int> to_clear;

    do {
      const std::vector<int>& c = clauses_[static_cast<std::size_t>(confl)];
      for (std::size_t j = (p == 0 ? 0 : 1); j < c.size(); ++j) {
        int q = c[j];
        std::size_t v = static_cast<std::size_t>(std::abs(q));
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        to_clear.push_back(static_cast<int>(v));
        bump_activity(static_cast<int>(v));
        if (level_[v] >= current_level())
          ++counter;
        else
          learnt.push_back(q);
      }
      do {
        --index;
      } while (!seen_[static_cast<std::size_t>(std::abs(trail_[index]))]);
      p = trail_[index];
      confl = reason_[static_cast<std::size_t>(std::abs(p))];
      seen_[static_cast<std::size_t>(std::abs(p))] = 0;
      --counter;
    } while (counter > 0);
    learnt[0] = -p;

    for (int v : to_clear) seen_[static_cast<std::size_t>(v)] = 0;

    if (learnt.size() == 1) {
      bt_level = 0;
      return;
    }
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (level_[static_cast<std::size_t>(std::abs(learnt[i]))] >
          level_[static_cast<std::size_t>(std::abs(learnt[max_i]))])
        max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    bt_level = level_[static_cast<std::size_t>(std::abs(learnt[1]))];
  }

  void attach_learnt(const std::vector<int>& learnt) {
    if (learnt.size() == 1) {
      enqueue(learnt[0], -1);
      return;
    }
    int ci = attach(learnt);
    enqueue(learnt[0], ci);
  }

  void backtrack(int target) {
    if (current_level() <= target) return;
    std::size_t keep = static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(target)]);
    while (trail_.size() > keep) {
      int lit = trail_.back();
      std::size_t v = static_cast<std::size_t>(std::abs(lit));
      phase_[v] = lit > 0;
      value_[v] = 0;
      reason_[v] = -1;
      if (heap_) heap_->insert(static_cast<int>(v));
      trail_.pop_back();
    }
    trail_lim_.resize(static_cast<std::size_t>(target));
    qhead_ = trail_.size();
  }

  int pick_branch_var() {
    while (heap_ && !heap_->empty()) {
      int v = heap_->pop();
      if (value_[static_cast<std::size_t>(v)] == 0) return v;
    }
    return 0;
  }

  void bump_activity(int v) {
    activity_[static_cast<std::size_t>(v)] += activity_inc_;
    if (activity_[static_cast<std::size_t>(v)] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      activity_inc_ *= 1e-100;
    }
    if (heap_) heap_->increased(v);
  }

  void decay_activities() { activity_inc_ *= (1.0 / 0.95); }

  Model extract_model() const {
    Model model(static_cast<std::size_t>(nvars_) + 1, false);
    for (int v = 1; v <= nvars_; ++v) model[static_cast<std::size_t>(v)] = value_[static_cast<std::size_t>(v)] == 1;
    // Models are re-verified against the input before they escape.
    for (const std::vector<int>& clause : input_->clauses) {
      bool satisfied = false;
      for (int lit : clause)
        if (lit > 0 ? model[static_cast<std::size_t>(lit)] : !model[static_cast<std::size_t>(-lit)]) {
          satisfied = true;
          break;
        }
      if (!satisfied) throw std::logic_error("sat solver produced a non-model");
    }
    return model;
  }

  int nvars_;
  bool ok_ = true;
  std::vector<std::vector<int>> clauses_;
  const Cnf* input_ = nullptr;
  std::vector<std::int8_t> value_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<bool> phase_;
  std::vector<std::int8_t> seen_;
  std::vector<double> activity_;
  double activity_inc_ = 1.0;
  std::vector<std::vector<int>> watches_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  SolverStats stats_;
  sat_detail::VarHeap* heap_ = nullptr;
  static constexpr std::uint64_t restart_unit_ = 100;
};

/// Solves a CNF, optionally under a conflict budget or wall-clock deadline.
/// Exhausted limits report "unknown", never "unsat".
inline SolveOutcome solve(const Cnf& cnf, const SolverLimits& limits = {}) {
  CdclSolver solver(cnf);
  return solver.solve(limits);
}

}  // namespace kbo
