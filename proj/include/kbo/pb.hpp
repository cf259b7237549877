// Pseudo-boolean encoding of KBO orientability: linear constraints over 0/1
// variables for admissibility, the per-rule order conditions with the
// KBO/KBO' auxiliary variables and their hidden case distinction, and the
// quasi-precedence conditions over X, Y, Z with symbols interpreted as
// natural numbers. Also the OPB interchange format.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kbo/decode_tables.hpp"
#include "kbo/formula.hpp"
#include "kbo/kbo_direct.hpp"
#include "kbo/sat_encoder.hpp"
#include "kbo/term.hpp"

namespace kbo {

struct PbTerm {
  long long coeff = 0;
  int var = 0;

  friend bool operator==(const PbTerm&, const PbTerm&) = default;
};

enum class PbRel { geq, eq, leq };

struct PbConstraint {
  std::vector<PbTerm> terms;
  PbRel rel = PbRel::geq;
  long long bound = 0;

  /// Coalesces duplicate variables and drops zero coefficients.
  static PbConstraint make(std::vector<PbTerm> terms, PbRel rel, long long bound) {
    std::map<int, long long> coeffs;
    for (const PbTerm& t : terms) coeffs[t.var] += t.coeff;
    PbConstraint c;
    c.rel = rel;
    c.bound = bound;
    for (const auto& [var, coeff] : coeffs)
      if (coeff != 0) c.terms.push_back(PbTerm{coeff, var});
    return c;
  }

  friend bool operator==(const PbConstraint&, const PbConstraint&) = default;
};

struct PbObjective {
  std::vector<PbTerm> terms;  // minimized

  friend bool operator==(const PbObjective&, const PbObjective&) = default;
};

struct PbProblem {
  std::vector<PbConstraint> constraints;
  std::optional<PbObjective> objective;
  int num_vars = 0;
  DecodeTables tables;
  std::vector<int> xy_vars;  // every X and Y variable, for the precedence objective

  friend bool operator==(const PbProblem& a, const PbProblem& b) {
    return a.constraints == b.constraints && a.objective == b.objective &&
           a.num_vars == b.num_vars;
  }
};

struct PbWeightVars {
  int width = 0;
  std::vector<int> w0;  // MSB first
  std::map<std::string, std::vector<int>> symbol;
};

struct PbPrecVars {
  int width = 0;
  std::map<std::string, std::vector<int>> code;
  std::map<std::pair<std::string, std::string>, int> x, y, z;
};

namespace pb_detail {

/// value * (2^(k-1) b_k + ... + 2^0 b_1), bit ids MSB first.
inline void add_bit_terms(std::vector<PbTerm>& out, const std::vector<int>& bits,
                          long long factor) {
  const int k = static_cast<int>(bits.size());
  for (int i = 0; i < k; ++i)
    out.push_back(PbTerm{factor * (1LL << (k - 1 - i)), bits[static_cast<std::size_t>(i)]});
}

}  // namespace pb_detail

inline std::pair<PbWeightVars, PbPrecVars> allocate_pb_vars(const std::vector<Symbol>& sig,
                                                            int bits, VarPool& pool) {
  PbWeightVars wv;
  wv.width = bits;
  for (int i = bits; i >= 1; --i) wv.w0.push_back(pool.fresh("w0_" + std::to_string(i)));
  for (const Symbol& s : sig) {
    std::vector<int>& ids = wv.symbol[s.name];
    for (int i = bits; i >= 1; --i) ids.push_back(pool.fresh("w." + s.name + "_" + std::to_string(i)));
  }
  PbPrecVars pv;
  pv.width = code_width_for(sig.size());
  for (const Symbol& s : sig) {
    std::vector<int>& ids = pv.code[s.name];
    for (int i = pv.width; i >= 1; --i)
      ids.push_back(pool.fresh("code." + s.name + "_" + std::to_string(i)));
  }
  for (const Symbol& f : sig)
    for (const Symbol& g : sig) {
      if (f.name == g.name) continue;
      pv.x.emplace(std::make_pair(f.name, g.name), pool.fresh("X." + f.name + "." + g.name));
      pv.y.emplace(std::make_pair(f.name, g.name), pool.fresh("Y." + f.name + "." + g.name));
      pv.z.emplace(std::make_pair(f.name, g.name), pool.fresh("Z." + f.name + "." + g.name));
    }
  return {std::move(wv), std::move(pv)};
}

/// ADM-PBC: w0 >= 1, constants at least w0, and for every unary symbol f
/// either a positive weight or X/Y relations to all n-1 other symbols.
inline std::vector<PbConstraint> adm_pbc(const PbWeightVars& wv, const PbPrecVars& pv,
                                         const std::vector<Symbol>& sig) {
  std::vector<PbConstraint> out;
  const long long n = static_cast<long long>(sig.size());
  {
    std::vector<PbTerm> terms;
    pb_detail::add_bit_terms(terms, wv.w0, 1);
    out.push_back(PbConstraint::make(std::move(terms), PbRel::geq, 1));
  }
  for (const Symbol& s : sig) {
    if (s.arity != 0) continue;
    std::vector<PbTerm> terms;
    pb_detail::add_bit_terms(terms, wv.symbol.at(s.name), 1);
    pb_detail::add_bit_terms(terms, wv.w0, -1);
    out.push_back(PbConstraint::make(std::move(terms), PbRel::geq, 0));
  }
  for (const Symbol& s : sig) {
    if (s.arity != 1 || n <= 1) continue;
    std::vector<PbTerm> terms;
    pb_detail::add_bit_terms(terms, wv.symbol.at(s.name), n - 1);
    for (const Symbol& g : sig) {
      if (g.name == s.name) continue;
      terms.push_back(PbTerm{1, pv.x.at({s.name, g.name})});
      terms.push_back(PbTerm{1, pv.y.at({s.name, g.name})});
    }
    out.push_back(PbConstraint::make(std::move(terms), PbRel::geq, n - 1));
  }
  return out;
}

/// PREC-PBC: mutual exclusion of X, Z and the symmetric Y pair, a proper
/// order through the X variables and an equivalence through the Y
/// variables, with i(f) the l-bit interpretation of the symbol code.
inline std::vector<PbConstraint> prec_pbc(const PbPrecVars& pv, const std::vector<Symbol>& sig) {
  std::vector<PbConstraint> out;
  const long long big = 1LL << pv.width;
  for (const Symbol& f : sig)
    for (const Symbol& g : sig) {
      if (f.name == g.name) continue;
      int xfg = pv.x.at({f.name, g.name});
      int yfg = pv.y.at({f.name, g.name});
      int ygf = pv.y.at({g.name, f.name});
      int zfg = pv.z.at({f.name, g.name});
      out.push_back(PbConstraint::make(
          {{2, xfg}, {1, yfg}, {1, ygf}, {2, zfg}}, PbRel::eq, 2));
      std::vector<PbTerm> second{{-1, xfg}, {big, yfg}, {big, zfg}};
      pb_detail::add_bit_terms(second, pv.code.at(f.name), 1);
      pb_detail::add_bit_terms(second, pv.code.at(g.name), -1);
      out.push_back(PbConstraint::make(std::move(second), PbRel::geq, 0));
      std::vector<PbTerm> third{{big, xfg}, {1, yfg}, {big, zfg}};
      pb_detail::add_bit_terms(third, pv.code.at(f.name), 1);
      pb_detail::add_bit_terms(third, pv.code.at(g.name), -1);
      out.push_back(PbConstraint::make(std::move(third), PbRel::geq, 1));
    }
  return out;
}

namespace pb_detail {

// Unambiguous memo key: variables and symbols are tagged so equal names
// never alias.
inline void term_key(const Term& t, std::string& out) {
  out += t.is_var() ? '$' : '#';
  out += t.name;
  if (!t.args.empty()) {
    out += '(';
    for (const Term& a : t.args) {
      term_key(a, out);
      out += ',';
    }
    out += ')';
  }
}

}  // namespace pb_detail

/// Per-rule PB encoding. KBO and KBO' variables are memoized per distinct
/// subterm pair within one rule, so shared argument comparisons are encoded
/// once.
class PbRuleEncoder {
 public:
  PbRuleEncoder(const PbWeightVars& wv, const PbPrecVars& pv, VarPool& pool)
      : wv_(wv), pv_(pv), pool_(pool) {}

  /// Emits the constraints for s >kbo t and returns the KBO_{s,t} variable.
  int encode(const Term& s, const Term& t) {
    std::string key;
    pb_detail::term_key(s, key);
    key += '>';
    pb_detail::term_key(t, key);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    int v = pool_.fresh("KBO{" + key + "}");
    memo_.emplace(std::move(key), v);

    TokenCounts cs = token_counts(s);
    TokenCounts ct = token_counts(t);
    bool var_condition = true;
    for (const auto& [x, c] : ct.vars) {
      auto it = cs.vars.find(x);
      if (it == cs.vars.end() || it->second < c) {
        var_condition = false;
        break;
      }
    }
    if (s.is_var() || s == t || !var_condition) {
      emit({{1, v}}, PbRel::eq, 0);
      return v;
    }

    const long long cap = 1LL << wv_.width;
    long long m = 0;
    std::vector<PbTerm> main;
    for (const auto& [name, cnt_t2] : ct.syms) {
      auto it = cs.syms.find(name);
      int cnt_s = it == cs.syms.end() ? 0 : it->second;
      if (cnt_t2 > cnt_s) m += cap * (cnt_t2 - cnt_s);
    }
    auto net = [&](const std::map<std::string, int>& a, const std::map<std::string, int>& b,
                   const std::string& name) {
      auto ia = a.find(name);
      auto ib = b.find(name);
      return (ia == a.end() ? 0 : ia->second) - (ib == b.end() ? 0 : ib->second);
    };
    for (const auto& [name, ids] : wv_.symbol) {
      int d = net(cs.syms, ct.syms, name);
      if (d != 0) pb_detail::add_bit_terms(main, ids, d);
    }
    long long var_net = 0;
    for (const auto& [x, c] : cs.vars) var_net += c;
    for (const auto& [x, c] : ct.vars) var_net -= c;
    if (var_net != 0) pb_detail::add_bit_terms(main, wv_.w0, var_net);

    int vprime = pool_.fresh("KBO'");
    main.push_back(PbTerm{-(m + 1), v});
    main.push_back(PbTerm{1, vprime});
    emit(std::move(main), PbRel::geq, -m);

    if (t.is_var()) {
      if (!detail::unary_tower_over(s, t)) emit({{1, vprime}}, PbRel::eq, 0);
      return v;
    }
    const std::size_t nargs = std::min(s.args.size(), t.args.size());
    std::optional<std::size_t> first_diff;
    for (std::size_t i = 0; i < nargs; ++i)
      if (!(s.args[i] == t.args[i])) {
        first_diff = i;
        break;
      }
    if (s.name == t.name) {
      if (!first_diff) {
        emit({{1, vprime}}, PbRel::eq, 0);
        return v;
      }
      int arg = encode(s.args[*first_diff], t.args[*first_diff]);
      emit({{-1, vprime}, {1, arg}}, PbRel::geq, 0);
      return v;
    }
    int x = pv_.x.at({s.name, t.name});
    if (!first_diff) {
      emit({{-1, vprime}, {1, x}}, PbRel::geq, 0);
      return v;
    }
    int y = pv_.y.at({s.name, t.name});
    int arg = encode(s.args[*first_diff], t.args[*first_diff]);
    emit({{-2, vprime}, {2, x}, {1, y}, {1, arg}}, PbRel::geq, 0);
    return v;
  }

  std::vector<PbConstraint>& constraints() { return constraints_; }

 private:
  void emit(std::vector<PbTerm> terms, PbRel rel, long long bound) {
    constraints_.push_back(PbConstraint::make(std::move(terms), rel, bound));
  }

  const PbWeightVars& wv_;
  const PbPrecVars& pv_;
  VarPool& pool_;
  std::map<std::string, int> memo_;
  std::vector<PbConstraint> constraints_;
};

struct PbEncoderOptions {
  int bits = 4;
  PrecedenceMode mode = PrecedenceMode::quasi;
};

/// KBO-PBC(R): admissibility, precedence conditions, the rule constraints
/// with KBO_{l,r} = 1, and Y pinned to zero in strict mode.
inline PbProblem kbo_pbc(const Trs& trs, const PbEncoderOptions& opts) {
  if (opts.bits < 1) throw std::invalid_argument("weight bit width must be at least 1");
  VarPool pool;
  auto [wv, pv] = allocate_pb_vars(trs.signature, opts.bits, pool);

  PbProblem out;
  for (PbConstraint& c : adm_pbc(wv, pv, trs.signature)) out.constraints.push_back(std::move(c));
  for (PbConstraint& c : prec_pbc(pv, trs.signature)) out.constraints.push_back(std::move(c));
  for (const Rule& r : trs.rules) {
    PbRuleEncoder enc(wv, pv, pool);
    int top = enc.encode(r.lhs, r.rhs);
    for (PbConstraint& c : enc.constraints()) out.constraints.push_back(std::move(c));
    out.constraints.push_back(PbConstraint::make({{1, top}}, PbRel::eq, 1));
  }
  if (opts.mode == PrecedenceMode::strict)
    for (const auto& [pair, y] : pv.y)
      out.constraints.push_back(PbConstraint::make({{1, y}}, PbRel::eq, 0));

  out.num_vars = pool.count();
  out.tables.engine = EngineKind::pbc;
  out.tables.weight_width = wv.width;
  out.tables.code_width = pv.width;
  out.tables.w0_bits = wv.w0;
  out.tables.symbol_weight_bits = wv.symbol;
  out.tables.symbol_code_bits = pv.code;
  for (const auto& [pair, x] : pv.x) out.xy_vars.push_back(x);
  for (const auto& [pair, y] : pv.y) out.xy_vars.push_back(y);
  std::sort(out.xy_vars.begin(), out.xy_vars.end());
  return out;
}

enum class ObjectiveKind { weights, precedence_comparisons };

/// Goal function terms: total encoded weight (symbols plus w0) or the
/// number of strict and equivalence comparisons in the precedence.
inline std::vector<PbTerm> objectives(const PbProblem& p, ObjectiveKind kind) {
  std::vector<PbTerm> terms;
  if (kind == ObjectiveKind::weights) {
    for (const auto& [name, ids] : p.tables.symbol_weight_bits)
      pb_detail::add_bit_terms(terms, ids, 1);
    pb_detail::add_bit_terms(terms, p.tables.w0_bits, 1);
  } else {
    for (int v : p.xy_vars) terms.push_back(PbTerm{1, v});
  }
  return terms;
}

/// OPB text: a size comment, the optional minimization line and one
/// constraint per line. A 'leq' constraint is negated into 'geq'.
inline std::string to_opb(const PbProblem& p) {
  std::ostringstream out;
  out << "* #variable= " << p.num_vars << " #constraint= " << p.constraints.size() << "\n";
  auto write_terms = [&](const std::vector<PbTerm>& terms, long long flip) {
    for (const PbTerm& t : terms) {
      long long c = t.coeff * flip;
      out << (c >= 0 ? "+" : "") << c << " x" << t.var << ' ';
    }
  };
  if (p.objective) {
    out << "min: ";
    write_terms(p.objective->terms, 1);
    out << ";\n";
  }
  for (const PbConstraint& c : p.constraints) {
    long long flip = c.rel == PbRel::leq ? -1 : 1;
    write_terms(c.terms, flip);
    out << (c.rel == PbRel::eq ? "=" : ">=") << ' ' << c.bound * flip << " ;\n";
  }
  return out.str();
}

inline PbProblem parse_opb(const std::string& text) {
  PbProblem p;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '*') {
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok)
        if (tok == "#variable=") ls >> p.num_vars;
      continue;
    }
    std::istringstream ls(line);
    std::string tok;
    bool is_objective = false;
    std::vector<PbTerm> terms;
    std::optional<PbRel> rel;
    long long bound = 0;
    while (ls >> tok) {
      if (tok == "min:") {
        is_objective = true;
      } else if (tok == ";") {
        break;
      } else if (tok == ">=") {
        rel = PbRel::geq;
        ls >> bound;
      } else if (tok == "=") {
        rel = PbRel::eq;
        ls >> bound;
      } else {
        long long coeff = std::stoll(tok);
        std::string var;
        ls >> var;
        if (var.empty() || var[0] != 'x')
          throw std::invalid_argument("opb: expected variable after coefficient");
        terms.push_back(PbTerm{coeff, std::stoi(var.substr(1))});
      }
    }
    if (is_objective) {
      p.objective = PbObjective{std::move(terms)};
    } else if (rel) {
      PbConstraint c;
      c.terms = std::move(terms);
      c.rel = *rel;
      c.bound = bound;
      p.constraints.push_back(std::move(c));
    } else if (!terms.empty()) {
      throw std::invalid_argument("opb: constraint without relation");
    }
  }
  for (const PbConstraint& c : p.constraints)
    for (const PbTerm& t : c.terms) p.num_vars = std::max(p.num_vars, t.var);
  return p;
}

}  // namespace kbo
