#include <doctest.h>

#include <fstream>
#include <sstream>

#include "kbo/proof.hpp"
#include "kbo/sat_encoder.hpp"
#include "kbo/tpdb.hpp"
#include "support/oracles.hpp"

using namespace kbo;

namespace {

Trs load(const std::string& rel) {
  std::ifstream in(oracle::data_path(rel));
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (rel.size() > 4 && rel.substr(rel.size() - 4) == ".srs") return parse_srs(buf.str());
  return parse_trs(buf.str());
}

DecodeTables tiny_tables() {
  DecodeTables t;
  t.weight_width = 2;
  t.code_width = 1;
  t.w0_bits = {1, 2};
  t.symbol_weight_bits = {{"f", {3, 4}}, {"g", {5, 6}}};
  t.symbol_code_bits = {{"f", {7}}, {"g", {8}}};
  return t;
}

}  // namespace

TEST_SUITE("proof") {
  TEST_CASE("decode reads binary weights and ranks, most significant bit first") {
    DecodeTables t = tiny_tables();
    Model m(9, false);
    m[2] = true;             // w0 = 01 -> 1
    m[3] = true;             // w(f) = 10 -> 2
    m[7] = true;             // code(f) = 1
    auto [wf, prec] = decode(m, t);
    CHECK(wf.w0 == 1);
    CHECK(wf.weights.at("f") == 2);
    CHECK(wf.weights.at("g") == 0);
    CHECK(prec.compare("f", "g") == PrecCompare::greater);
    CHECK(prec.compare("g", "f") == PrecCompare::less);
  }

  TEST_CASE("decode after writing known parameters into the bit variables") {
    Trs trs = load("corpus/SK_90.2.42.trs");
    SatEncoderOptions opts;
    opts.bits = 2;
    SatEncoding enc = kbo_sat(trs, opts);
    WeightFunction wf;
    wf.w0 = 1;
    wf.weights = {{"flatten", 0}, {"rev", 0}, {"++", 0}, {"unit", 1}, {"nil", 1}};
    std::map<std::string, long long> ranks{
        {"flatten", 3}, {"rev", 3}, {"unit", 2}, {"++", 1}, {"nil", 0}};
    Model m(static_cast<std::size_t>(enc.num_vars) + 1, false);
    auto write_bits = [&](const std::vector<int>& ids, unsigned long long value) {
      for (std::size_t i = 0; i < ids.size(); ++i)
        m[static_cast<std::size_t>(ids[i])] = (value >> (ids.size() - 1 - i)) & 1;
    };
    write_bits(enc.tables.w0_bits, wf.w0);
    for (const auto& [name, w] : wf.weights)
      write_bits(enc.tables.symbol_weight_bits.at(name), w);
    for (const auto& [name, r] : ranks)
      write_bits(enc.tables.symbol_code_bits.at(name), static_cast<unsigned long long>(r));
    auto [wf2, prec2] = decode(m, enc.tables);
    CHECK(wf2 == wf);
    CHECK(prec2 == Precedence::from_ranks(ranks));
  }

  TEST_CASE("verify accepts the published parameters") {
    Trs sk = load("corpus/SK_90.2.42.trs");
    WeightFunction wf;
    wf.weights = {{"flatten", 0}, {"rev", 0}, {"++", 0}, {"unit", 1}, {"nil", 1}};
    Precedence prec = Precedence::from_ranks(
        {{"flatten", 3}, {"rev", 3}, {"unit", 2}, {"++", 1}, {"nil", 0}});
    KboProof proof = verify(sk, wf, prec);
    CHECK(proof.per_rule.size() == 12);

    // deliberately corrupted weights must be caught, both as a failed rule
    // and as lost admissibility
    WeightFunction heavier = wf;
    heavier.weights["flatten"] = 1;  // the duplicated flatten makes rhs heavier
    CHECK_THROWS_AS(verify(sk, heavier, prec), soundness_error);
    WeightFunction demoted = wf;
    demoted.weights["unit"] = 0;  // weight-zero unary symbol that is not maximal
    CHECK_THROWS_AS(verify(sk, demoted, prec), soundness_error);
  }

  TEST_CASE("verify reports inadmissible decodes as soundness errors") {
    Trs trs = load("corpus/pred.trs");
    WeightFunction wf;
    wf.weights = {{"p", 1}, {"s", 1}};
    wf.w0 = 0;
    CHECK_THROWS_AS(verify(trs, wf, Precedence::from_ranks({{"p", 0}, {"s", 0}})),
                    soundness_error);
  }

  TEST_CASE("rendering is deterministic and shows the precedence chain") {
    Trs sk = load("corpus/SK_90.2.42.trs");
    WeightFunction wf;
    wf.weights = {{"flatten", 0}, {"rev", 0}, {"++", 0}, {"unit", 1}, {"nil", 1}};
    Precedence prec = Precedence::from_ranks(
        {{"flatten", 3}, {"rev", 3}, {"unit", 2}, {"++", 1}, {"nil", 0}});
    KboProof proof = verify(sk, wf, prec);
    std::string text = render(proof);
    CHECK(text.find("precedence: flatten ~ rev > unit > ++ > nil") != std::string::npos);
    CHECK(text.find("w0 = 1") != std::string::npos);
    CHECK(text == render(proof));
  }

  TEST_CASE("empty precedences render as (empty)") {
    CHECK(render_precedence(Precedence{}) == "(empty)");
    Precedence chains;
    chains.set_display_pairs({{"3", "1"}, {"1", "2"}});
    CHECK(render_precedence(chains) == "3 > 1, 1 > 2");
    chains.set_display_pairs({});
    CHECK(render_precedence(chains) == "(empty)");
  }

  TEST_CASE("proof json carries weights, ranks and per-rule cases") {
    Trs trs = load("corpus/pred.trs");
    WeightFunction wf;
    wf.weights = {{"p", 1}, {"s", 1}};
    Precedence prec = Precedence::from_ranks({{"p", 0}, {"s", 0}});
    nlohmann::json j = proof_json(verify(trs, wf, prec));
    CHECK(j["w0"] == 1);
    CHECK(j["weights"]["p"] == 1);
    CHECK(j["precedence_ranks"].size() == 2);
    REQUIRE(j["rules"].size() == 1);
    CHECK(j["rules"][0]["case"] == "weight");
  }
}
