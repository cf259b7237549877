// Command-line front end. Subcommands:
//   kbo prove FILE    decide KBO orientability of one system
//   kbo corpus DIR    run every .trs/.srs file in a directory
//   kbo export FILE   write the encoding without solving
// Exit codes for prove: 0 YES, 1 MAYBE, 2 error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kbo/prover.hpp"

namespace {

struct CliOptions {
  std::string file;
  std::string engine = "pbc";
  int bits = 0;  // 0 = pick by system kind: 4 for TRSs, 7 for SRSs
  std::string precedence = "quasi";
  std::string minimize = "none";
  double timeout = 10.0;
  std::string emit_dimacs;
  std::string emit_opb;
  std::string format = "text";
  bool no_cache = false;
  bool no_cancellation = false;
  bool no_embedding = false;
};

void add_common_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--engine", o.engine, "constraint engine")
      ->check(CLI::IsMember({"sat", "pbc"}));
  cmd->add_option("--bits,-k", o.bits, "weight bits (default 4 for TRSs, 7 for SRSs)")
      ->check(CLI::Range(0, 24));
  cmd->add_option("--precedence", o.precedence, "precedence kind")
      ->check(CLI::IsMember({"strict", "quasi"}));
  cmd->add_option("--minimize", o.minimize, "pbc goal function")
      ->check(CLI::IsMember({"none", "weights", "precedence"}));
  cmd->add_option("--timeout", o.timeout, "seconds per problem");
  cmd->add_option("--emit-dimacs", o.emit_dimacs, "write the CNF encoding to PATH");
  cmd->add_option("--emit-opb", o.emit_opb, "write the PB encoding to PATH");
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_flag("--sat-no-cache", o.no_cache, "disable the addition cache (sat engine)");
  cmd->add_flag("--sat-no-cancellation", o.no_cancellation,
                "compare full term weights (sat engine)");
  cmd->add_flag("--sat-no-embedding", o.no_embedding,
                "encode rules even when the embedding test succeeds (sat engine)");
}

kbo::ProveConfig to_config(const CliOptions& o, kbo::SystemKind kind) {
  kbo::ProveConfig cfg;
  cfg.engine = o.engine == "sat" ? kbo::Engine::sat : kbo::Engine::pbc;
  cfg.bits = o.bits > 0 ? o.bits : (kind == kbo::SystemKind::string_system ? 7 : 4);
  cfg.mode = o.precedence == "strict" ? kbo::PrecedenceMode::strict : kbo::PrecedenceMode::quasi;
  cfg.minimize = o.minimize == "weights"      ? kbo::MinimizeKind::weights
                 : o.minimize == "precedence" ? kbo::MinimizeKind::precedence
                                              : kbo::MinimizeKind::none;
  cfg.timeout_seconds = o.timeout;
  cfg.sat_addition_cache = !o.no_cache;
  cfg.sat_cancellation = !o.no_cancellation;
  cfg.sat_embedding_shortcut = !o.no_embedding;
  if (cfg.minimize != kbo::MinimizeKind::none && cfg.engine != kbo::Engine::pbc)
    throw CLI::ValidationError("--minimize requires --engine pbc");
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void write_exports(const kbo::Trs& trs, const kbo::ProveConfig& cfg, const CliOptions& o) {
  if (!o.emit_dimacs.empty()) write_file(o.emit_dimacs, kbo::export_dimacs(trs, cfg));
  if (!o.emit_opb.empty()) write_file(o.emit_opb, kbo::export_opb(trs, cfg));
}

int run_prove(const CliOptions& o) {
  kbo::Trs trs = kbo::load_problem(o.file);
  kbo::ProveConfig cfg = to_config(o, trs.kind);
  write_exports(trs, cfg, o);
  kbo::ProveOutcome r = kbo::prove(trs, cfg);
  if (o.format == "json") {
    nlohmann::json j{{"file", o.file},
                     {"verdict", kbo::to_string(r.verdict)},
                     {"engine", kbo::to_string(cfg.engine)},
                     {"bits", cfg.bits},
                     {"precedence", o.precedence},
                     {"time_ms", r.time_ms},
                     {"note", r.note}};
    if (r.proof) j["proof"] = kbo::proof_json(*r.proof);
    if (r.objective_value) j["objective"] = *r.objective_value;
    if (!r.minimize_trace.empty()) j["minimize_trace"] = r.minimize_trace;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << kbo::to_string(r.verdict);
    if (!r.note.empty()) std::cout << " (" << r.note << ")";
    std::cout << '\n';
    if (r.proof) std::cout << kbo::render(*r.proof);
    if (r.objective_value) {
      std::cout << "objective: " << *r.objective_value << "  (trace:";
      for (long long v : r.minimize_trace) std::cout << ' ' << v;
      std::cout << ")\n";
    }
  }
  return r.verdict == kbo::Verdict::yes ? 0 : 1;
}

int run_corpus(const CliOptions& o) {
  kbo::ProveConfig cfg = to_config(o, kbo::SystemKind::term_system);
  if (o.bits == 0) cfg.bits = 0;  // per-file default: 4 for .trs, 7 for .srs
  kbo::CorpusReport report = kbo::run_corpus(o.file, cfg);
  if (o.format == "json")
    std::cout << kbo::corpus_json(report).dump(2) << '\n';
  else
    std::cout << kbo::render_corpus_text(report);
  return 0;
}

int run_export(const CliOptions& o) {
  if (o.emit_dimacs.empty() && o.emit_opb.empty())
    throw CLI::ValidationError("export needs --emit-dimacs or --emit-opb");
  kbo::Trs trs = kbo::load_problem(o.file);
  kbo::ProveConfig cfg = to_config(o, trs.kind);
  write_exports(trs, cfg, o);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KBO termination prover: decides Knuth-Bendix orientability by"
               " SAT or pseudo-boolean constraint solving"};
  app.require_subcommand(1);

  CliOptions prove_opts, corpus_opts, export_opts;
  CLI::App* prove = app.add_subcommand("prove", "prove termination of one system");
  prove->add_option("file", prove_opts.file, "TPDB .trs or .srs file")->required();
  add_common_flags(prove, prove_opts);

  CLI::App* corpus = app.add_subcommand("corpus", "run a directory of systems");
  corpus->add_option("dir", corpus_opts.file, "directory with .trs/.srs files")->required();
  add_common_flags(corpus, corpus_opts);

  CLI::App* exp = app.add_subcommand("export", "write the encoding without solving");
  exp->add_option("file", export_opts.file, "TPDB .trs or .srs file")->required();
  add_common_flags(exp, export_opts);

  try {
    app.parse(argc, argv);
    if (prove->parsed()) return run_prove(prove_opts);
    if (corpus->parsed()) return run_corpus(corpus_opts);
    if (exp->parsed()) return run_export(export_opts);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
