// Turns solver models into Knuth-Bendix parameters, verifies them through
// the direct order implementation and renders proofs. A YES answer is only
// ever produced from a decode that passed verification.

#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kbo/decode_tables.hpp"
#include "kbo/kbo_direct.hpp"
#include "kbo/sat_solver.hpp"
#include "kbo/term.hpp"

namespace kbo {

struct soundness_error : std::runtime_error {
  explicit soundness_error(const std::string& what) : std::runtime_error(what) {}
};

namespace proof_detail {

inline unsigned long long read_bits(const Model& m, const std::vector<int>& ids) {
  unsigned long long v = 0;
  for (int id : ids) {
    if (id <= 0 || static_cast<std::size_t>(id) >= m.size())
      throw std::out_of_range("model does not cover decode variable " + std::to_string(id));
    v = (v << 1) | (m[static_cast<std::size_t>(id)] ? 1ULL : 0ULL);
  }
  return v;
}

}  // namespace proof_detail

/// Reads weights and w0 as binary numbers from the model and ranks the
/// symbols by their decoded codes: f > g iff code(f) > code(g), f ~ g iff
/// the codes coincide.
inline std::pair<WeightFunction, Precedence> decode(const Model& m, const DecodeTables& t) {
  WeightFunction wf;
  wf.w0 = static_cast<unsigned>(proof_detail::read_bits(m, t.w0_bits));
  for (const auto& [name, ids] : t.symbol_weight_bits)
    wf.weights[name] = static_cast<unsigned>(proof_detail::read_bits(m, ids));
  std::map<std::string, long long> ranks;
  for (const auto& [name, ids] : t.symbol_code_bits)
    ranks[name] = static_cast<long long>(proof_detail::read_bits(m, ids));
  return {std::move(wf), Precedence(std::move(ranks))};
}

/// Soundness gate: delegates to the direct checker and throws instead of
/// returning when the parameters fail, so callers cannot report unverified
/// proofs.
inline KboProof verify(const Trs& trs, const WeightFunction& wf, const Precedence& prec) {
  std::variant<KboProof, OrientFailure> r = [&] {
    try {
      return orients(trs, wf, prec);
    } catch (const inadmissible_error& e) {
      throw soundness_error(std::string("decoded parameters are inadmissible: ") + e.what());
    }
  }();
  if (auto* failure = std::get_if<OrientFailure>(&r))
    throw soundness_error("decoded parameters do not orient rule " + to_string(failure->rule));
  return std::get<KboProof>(std::move(r));
}

/// Precedence chain such as "f ~ g > h"; "(empty)" when no symbol is ranked.
inline std::string render_precedence(const Precedence& prec) {
  if (prec.display_pairs()) {
    const auto& pairs = *prec.display_pairs();
    if (pairs.empty()) return "(empty)";
    std::string out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (i > 0) out += ", ";
      out += pairs[i].first + " > " + pairs[i].second;
    }
    return out;
  }
  if (prec.ranks().empty()) return "(empty)";
  std::map<long long, std::vector<std::string>> classes;
  for (const auto& [name, rank] : prec.ranks()) classes[rank].push_back(name);
  std::string out;
  for (auto it = classes.rbegin(); it != classes.rend(); ++it) {
    if (!out.empty()) out += " > ";
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      if (i > 0) out += " ~ ";
      out += it->second[i];
    }
  }
  return out;
}

/// Deterministic plain-text proof: w0, symbol weights by name, the
/// precedence chain and one justification per rule.
inline std::string render(const KboProof& proof) {
  std::ostringstream out;
  out << "weight function:\n";
  out << "  w0 = " << proof.weights.w0 << '\n';
  for (const auto& [name, w] : proof.weights.weights) out << "  " << name << " = " << w << '\n';
  out << "precedence: " << render_precedence(proof.precedence) << '\n';
  out << "rules:\n";
  for (const RuleJustification& j : proof.per_rule)
    out << "  " << to_string(j.rule) << "  [" << to_string(j.how) << "]\n";
  return out.str();
}

inline nlohmann::json proof_json(const KboProof& proof) {
  nlohmann::json weights = nlohmann::json::object();
  for (const auto& [name, w] : proof.weights.weights) weights[name] = w;
  nlohmann::json ranks = nlohmann::json::object();
  for (const auto& [name, rank] : proof.precedence.ranks()) ranks[name] = rank;
  nlohmann::json rules = nlohmann::json::array();
  for (const RuleJustification& j : proof.per_rule)
    rules.push_back({{"lhs", to_string(j.rule.lhs)},
                     {"rhs", to_string(j.rule.rhs)},
                     {"case", to_string(j.how)}});
  return {{"w0", proof.weights.w0},
          {"weights", std::move(weights)},
          {"precedence_ranks", std::move(ranks)},
          {"rules", std::move(rules)}};
}

}  // namespace kbo
