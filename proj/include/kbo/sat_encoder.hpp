// Purely propositional encoding of KBO orientability: admissibility,
// per-rule order constraints and the precedence definition over binary
// symbol codes. One encoder owns one fresh-variable pool, one addition
// cache and one collection of adder side constraints, so weight bits,
// precedence codes, carries and sums never collide.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kbo/bitvector.hpp"
#include "kbo/decode_tables.hpp"
#include "kbo/formula.hpp"
#include "kbo/kbo_direct.hpp"
#include "kbo/term.hpp"

namespace kbo {

struct SatEncoderOptions {
  int bits = 4;
  PrecedenceMode mode = PrecedenceMode::quasi;
  bool addition_cache = true;
  bool cancellation = true;
  bool embedding_shortcut = true;
  // Width used when summing term weights. Symbol weights stay at `bits`;
  // sums carry enough headroom that folding additions can never overflow,
  // which keeps the engine's power independent of how many tokens a rule
  // side has. 0 picks bits + 6 (up to 64 addends).
  int sum_width = 0;
};

/// Weight bit vectors: one per symbol plus w0, all of width k.
struct WeightVars {
  BitVector w0;
  std::map<std::string, BitVector> symbol;
};

/// Precedence variables: X (strictly greater) and Y (equivalent) per ordered
/// pair of distinct symbols, plus the binary code of each symbol.
struct PrecVars {
  std::map<std::pair<std::string, std::string>, int> x;
  std::map<std::pair<std::string, std::string>, int> y;
  std::map<std::string, BitVector> code;
  int code_width = 0;
};

struct SatEncodeStats {
  int adders_built = 0;
  int cache_hits = 0;
  int rules_skipped_by_embedding = 0;
};

struct SatEncoding {
  Formula formula;
  DecodeTables tables;
  VarPool pool;  // continue drawing Tseitin variables from here
  int num_vars = 0;
  SatEncodeStats stats;
};

/// A rule is skipped only when every admissible parameter set orients it.
/// Strict embedding alone is not enough: a weight-zero unary symbol tied
/// with a symbol of another arity can defeat the lexicographic case, so the
/// skip additionally requires a guaranteed strict weight decrease (a
/// variable or constant in the token surplus, each weighing at least w0) or
/// a variable right-hand side (where the tower case covers weight equality).
inline bool embedding_skip_applies(const Rule& rule, const std::map<std::string, int>& arity) {
  if (!embeds(rule.lhs, rule.rhs)) return false;
  if (rule.rhs.is_var()) return true;
  auto [surplus, deficit] = cancel_common(rule.lhs, rule.rhs);
  if (!surplus.vars.empty()) return true;
  for (const auto& [name, count] : surplus.syms)
    if (arity.at(name) == 0) return true;
  return false;
}

inline int code_width_for(std::size_t signature_size) {
  if (signature_size <= 2) return 1;
  int l = 0;
  std::size_t v = signature_size - 1;
  while (v) {
    ++l;
    v >>= 1;
  }
  return l;
}

class SatKboEncoder {
 public:
  SatKboEncoder(std::vector<Symbol> signature, const SatEncoderOptions& opts, VarPool& pool)
      : sig_(std::move(signature)), opts_(opts), pool_(pool) {
    if (opts_.sum_width == 0) opts_.sum_width = opts_.bits + 6;
    if (opts_.sum_width < opts_.bits)
      throw std::invalid_argument("sum width below the weight width");
    wv_.w0 = BitVector::fresh(pool_, opts_.bits, "w0");
    for (const Symbol& s : sig_)
      wv_.symbol.emplace(s.name, BitVector::fresh(pool_, opts_.bits, "w." + s.name));
    pv_.code_width = code_width_for(sig_.size());
    for (const Symbol& s : sig_)
      pv_.code.emplace(s.name, BitVector::fresh(pool_, pv_.code_width, "code." + s.name));
    for (const Symbol& f : sig_)
      for (const Symbol& g : sig_) {
        if (f.name == g.name) continue;
        pv_.x.emplace(std::make_pair(f.name, g.name), pool_.fresh("X." + f.name + "." + g.name));
        pv_.y.emplace(std::make_pair(f.name, g.name), pool_.fresh("Y." + f.name + "." + g.name));
      }
  }

  const WeightVars& weight_vars() const { return wv_; }
  const PrecVars& prec_vars() const { return pv_; }
  const SatEncodeStats& stats() const { return stats_; }
  const std::vector<Formula>& sides() const { return sides_; }

  /// w0 > 0, constants weigh at least w0, and a unary symbol of weight zero
  /// is above or equivalent to every other symbol.
  Formula adm_sat() const {
    std::vector<Formula> parts;
    parts.push_back(bv_gt(wv_.w0, BitVector::constant(0, opts_.bits)));
    for (const Symbol& s : sig_)
      if (s.arity == 0) parts.push_back(bv_geq(wv_.symbol.at(s.name), wv_.w0));
    for (const Symbol& s : sig_) {
      if (s.arity != 1) continue;
      std::vector<Formula> above_all;
      for (const Symbol& g : sig_) {
        if (g.name == s.name) continue;
        above_all.push_back(mk_or(mk_var(pv_.x.at({s.name, g.name})),
                                  mk_var(pv_.y.at({s.name, g.name}))));
      }
      parts.push_back(mk_implies(bv_eq(wv_.symbol.at(s.name), BitVector::constant(0, opts_.bits)),
                                 mk_and(std::move(above_all))));
    }
    return mk_and(std::move(parts));
  }

  /// Weight of a token multiset: symbol weights plus w0 per variable
  /// occurrence, folded through the cached adder at the widened sum width so
  /// intermediate results cannot overflow. The returned side formula carries
  /// every definitional constraint the sum depends on.
  WeightedBits encode_weight(const TokenCounts& tokens) {
    std::vector<const BitVector*> addends;
    TokenCounts prefix;
    for (const auto& [name, count] : tokens.syms)
      for (int i = 0; i < count; ++i) addends.push_back(&wv_.symbol.at(name));
    int var_occurrences = 0;
    for (const auto& [name, count] : tokens.vars) var_occurrences += count;
    for (int i = 0; i < var_occurrences; ++i) addends.push_back(&wv_.w0);

    if (addends.empty()) return WeightedBits{BitVector::constant(0, opts_.sum_width), mk_true()};
    if (static_cast<unsigned long long>(addends.size()) >=
        (1ULL << (opts_.sum_width - opts_.bits)))
      throw std::invalid_argument("term has too many tokens for the configured sum width");

    auto advance_prefix = [&](std::size_t next) {
      // mirror the addend order: symbols by name, then variables
      int sym_seen = 0;
      prefix = TokenCounts{};
      for (const auto& [name, count] : tokens.syms) {
        int take = std::min(count, static_cast<int>(next) - sym_seen);
        if (take <= 0) break;
        prefix.syms[name] = take;
        sym_seen += take;
      }
      int rest = static_cast<int>(next) - sym_seen;
      if (rest > 0) prefix.vars["#w0"] = rest;
    };

    WeightedBits acc{bv_zero_extend(*addends[0], opts_.sum_width), mk_true()};
    for (std::size_t i = 1; i < addends.size(); ++i) {
      advance_prefix(i + 1);
      std::string key = cache_key(prefix);
      if (opts_.addition_cache) {
        if (auto it = add_cache_.find(key); it != add_cache_.end()) {
          ++stats_.cache_hits;
          acc = it->second;
          continue;
        }
      }
      acc = bv_add(acc, WeightedBits{bv_zero_extend(*addends[i], opts_.sum_width), mk_true()},
                   pool_);
      ++stats_.adders_built;
      if (opts_.addition_cache) add_cache_.emplace(std::move(key), acc);
    }
    record_side(acc.side);
    return acc;
  }

  /// SAT(s >kbo t): false when s is a variable, s equals t or the variable
  /// condition fails; otherwise strictly heavier, or equally heavy and
  /// greater in the order refinement. Weight comparisons run over the
  /// cancelled residuals of both sides.
  Formula encode_kbo_gt(const Term& s, const Term& t) {
    if (s.is_var() || s == t) return mk_false();
    TokenCounts cs = token_counts(s);
    TokenCounts ct = token_counts(t);
    for (const auto& [x, c] : ct.vars) {
      auto it = cs.vars.find(x);
      if (it == cs.vars.end() || it->second < c) return mk_false();
    }

    TokenCounts rs = cs;
    TokenCounts rt = ct;
    if (opts_.cancellation) {
      auto [a, b] = cancel_common(s, t);
      rs = std::move(a);
      rt = std::move(b);
    }
    WeightedBits ws = encode_weight(rs);
    WeightedBits wt = encode_weight(rt);
    Formula refinement = encode_kbo_gt_prime(s, t);
    return mk_or(bv_gt(ws.bits, wt.bits), mk_and(bv_eq(ws.bits, wt.bits), refinement));
  }

  /// Per-pair definitions of the precedence variables over the symbol
  /// codes; strict mode pins every Y variable to false.
  Formula prec_defs() const {
    std::vector<Formula> parts;
    for (const Symbol& f : sig_)
      for (const Symbol& g : sig_) {
        if (f.name == g.name) continue;
        const BitVector& cf = pv_.code.at(f.name);
        const BitVector& cg = pv_.code.at(g.name);
        parts.push_back(mk_iff(mk_var(pv_.x.at({f.name, g.name})), bv_gt(cf, cg)));
        parts.push_back(mk_iff(mk_var(pv_.y.at({f.name, g.name})), bv_eq(cf, cg)));
        if (opts_.mode == PrecedenceMode::strict)
          parts.push_back(mk_not(mk_var(pv_.y.at({f.name, g.name}))));
      }
    return mk_and(std::move(parts));
  }

  DecodeTables tables() const {
    DecodeTables t;
    t.engine = EngineKind::sat;
    t.weight_width = opts_.bits;
    t.code_width = pv_.code_width;
    t.w0_bits = bit_ids(wv_.w0);
    for (const auto& [name, bv] : wv_.symbol) t.symbol_weight_bits[name] = bit_ids(bv);
    for (const auto& [name, bv] : pv_.code) t.symbol_code_bits[name] = bit_ids(bv);
    return t;
  }

  void note_skipped_rule() { ++stats_.rules_skipped_by_embedding; }

 private:
  Formula encode_kbo_gt_prime(const Term& s, const Term& t) {
    if (t.is_var()) {
      if (detail::unary_tower_over(s, t)) return mk_true();
      return mk_false();
    }
    const std::size_t n = std::min(s.args.size(), t.args.size());
    std::optional<std::size_t> first_diff;
    for (std::size_t i = 0; i < n; ++i)
      if (!(s.args[i] == t.args[i])) {
        first_diff = i;
        break;
      }
    if (s.name == t.name) {
      if (!first_diff) return mk_false();
      return encode_kbo_gt(s.args[*first_diff], t.args[*first_diff]);
    }
    Formula x = mk_var(pv_.x.at({s.name, t.name}));
    if (!first_diff) return x;
    Formula y = mk_var(pv_.y.at({s.name, t.name}));
    return mk_or(x, mk_and(y, encode_kbo_gt(s.args[*first_diff], t.args[*first_diff])));
  }

  static std::vector<int> bit_ids(const BitVector& bv) {
    std::vector<int> ids;
    ids.reserve(bv.bits.size());
    for (const Formula& b : bv.bits) ids.push_back(b.var());
    return ids;
  }

  static std::string cache_key(const TokenCounts& tokens) {
    std::string key;
    for (const auto& [name, count] : tokens.syms)
      key += name + ":" + std::to_string(count) + "|";
    for (const auto& [name, count] : tokens.vars)
      key += "#" + name + ":" + std::to_string(count) + "|";
    return key;
  }

  void record_side(const Formula& side) {
    if (side.is_true()) return;
    if (recorded_sides_.insert(side.id()).second) sides_.push_back(side);
  }

  std::vector<Symbol> sig_;
  SatEncoderOptions opts_;
  VarPool& pool_;
  WeightVars wv_;
  PrecVars pv_;
  std::map<std::string, WeightedBits> add_cache_;
  std::vector<Formula> sides_;
  std::unordered_set<const Formula::Node*> recorded_sides_;
  SatEncodeStats stats_;
};

/// KBO-SAT(R): admissibility, one constraint per rule (rules whose left
/// side strictly embeds the right contribute nothing), the precedence
/// definitions and the collected adder constraints.
inline SatEncoding kbo_sat(const Trs& trs, const SatEncoderOptions& opts) {
  if (opts.bits < 1) throw std::invalid_argument("weight bit width must be at least 1");
  SatEncoderOptions sized = opts;
  if (sized.sum_width == 0) {
    int max_tokens = 1;
    for (const Rule& r : trs.rules) {
      max_tokens = std::max(max_tokens, token_counts(r.lhs).total());
      max_tokens = std::max(max_tokens, token_counts(r.rhs).total());
    }
    int extra = 1;
    while ((1 << extra) <= max_tokens) ++extra;
    sized.sum_width = sized.bits + extra;
  }
  VarPool pool;
  SatKboEncoder enc(trs.signature, sized, pool);
  std::map<std::string, int> arity = signature_map(trs);

  std::vector<Formula> parts;
  parts.push_back(enc.adm_sat());
  for (const Rule& r : trs.rules) {
    if (sized.embedding_shortcut && embedding_skip_applies(r, arity)) {
      enc.note_skipped_rule();
      continue;
    }
    parts.push_back(enc.encode_kbo_gt(r.lhs, r.rhs));
  }
  parts.push_back(enc.prec_defs());
  for (const Formula& side : enc.sides()) parts.push_back(side);

  SatEncoding out;
  out.formula = mk_and(std::move(parts));
  out.tables = enc.tables();
  out.num_vars = pool.count();
  out.stats = enc.stats();
  out.pool = std::move(pool);
  return out;
}

}  // namespace kbo
