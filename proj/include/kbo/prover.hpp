// Front-end glue: run one encoding engine on one system, decode and verify
// the model, and aggregate corpus runs. YES is only reported together with
// a proof that passed the direct checker; unsatisfiable, timed out or
// budget-exhausted solves report MAYBE, because the encodings are
// incomplete at a fixed bit width.

#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kbo/pb.hpp"
#include "kbo/pb_solver.hpp"
#include "kbo/proof.hpp"
#include "kbo/sat_encoder.hpp"
#include "kbo/sat_solver.hpp"
#include "kbo/tpdb.hpp"

namespace kbo {

enum class Engine { sat, pbc };
enum class MinimizeKind { none, weights, precedence };
enum class Verdict { yes, maybe };

inline const char* to_string(Verdict v) { return v == Verdict::yes ? "YES" : "MAYBE"; }
inline const char* to_string(Engine e) { return e == Engine::sat ? "sat" : "pbc"; }

struct ProveConfig {
  Engine engine = Engine::pbc;
  int bits = 4;
  PrecedenceMode mode = PrecedenceMode::quasi;
  MinimizeKind minimize = MinimizeKind::none;
  double timeout_seconds = 10.0;
  // sat-engine optimizations, on by default
  bool sat_addition_cache = true;
  bool sat_cancellation = true;
  bool sat_embedding_shortcut = true;
};

struct ProveOutcome {
  Verdict verdict = Verdict::maybe;
  std::optional<KboProof> proof;
  std::string note;  // "unsat", "timeout", ...
  double time_ms = 0.0;
  int encode_vars = 0;
  SolverStats solver_stats;
  std::optional<long long> objective_value;
  std::vector<long long> minimize_trace;
};

inline SolverLimits limits_for(const ProveConfig& cfg) {
  SolverLimits limits;
  if (cfg.timeout_seconds > 0)
    limits.deadline = std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(cfg.timeout_seconds));
  return limits;
}

inline ProveOutcome prove(const Trs& trs, const ProveConfig& cfg) {
  if (cfg.bits < 1) throw std::invalid_argument("bits must be at least 1");
  if (cfg.minimize != MinimizeKind::none && cfg.engine != Engine::pbc)
    throw std::invalid_argument("minimization requires the pbc engine");
  auto start = std::chrono::steady_clock::now();
  SolverLimits limits = limits_for(cfg);

  ProveOutcome out;
  std::optional<Model> model;
  DecodeTables tables;

  if (cfg.engine == Engine::sat) {
    SatEncoderOptions opts;
    opts.bits = cfg.bits;
    opts.mode = cfg.mode;
    opts.addition_cache = cfg.sat_addition_cache;
    opts.cancellation = cfg.sat_cancellation;
    opts.embedding_shortcut = cfg.sat_embedding_shortcut;
    SatEncoding enc = kbo_sat(trs, opts);
    tables = enc.tables;
    Cnf cnf = tseitin(enc.formula, enc.pool);
    out.encode_vars = enc.num_vars;
    SolveOutcome s = solve(cnf, limits);
    out.solver_stats = s.stats;
    if (s.status == SolveStatus::sat) model = std::move(s.model);
    else out.note = s.status == SolveStatus::unsat ? "unsat" : "timeout";
  } else {
    PbEncoderOptions opts;
    opts.bits = cfg.bits;
    opts.mode = cfg.mode;
    PbProblem p = kbo_pbc(trs, opts);
    tables = p.tables;
    out.encode_vars = p.num_vars;
    if (cfg.minimize != MinimizeKind::none) {
      p.objective = PbObjective{objectives(p, cfg.minimize == MinimizeKind::weights
                                                  ? ObjectiveKind::weights
                                                  : ObjectiveKind::precedence_comparisons)};
      MinimizeOutcome m = minimize(p, limits);
      out.solver_stats = m.stats;
      out.minimize_trace = m.trace;
      if (m.status == SolveStatus::sat) {
        model = std::move(m.best_model);
        out.objective_value = m.best_value;
        if (!m.optimal) out.note = "minimization incomplete";
      } else {
        out.note = m.status == SolveStatus::unsat ? "unsat" : "timeout";
      }
    } else {
      PbSolveOutcome s = solve_pb(p, limits);
      out.solver_stats = s.stats;
      if (s.status == SolveStatus::sat) model = std::move(s.model);
      else out.note = s.status == SolveStatus::unsat ? "unsat" : "timeout";
    }
  }

  if (model) {
    auto [wf, prec] = decode(*model, tables);
    out.proof = verify(trs, wf, prec);  // throws on a soundness violation
    out.verdict = Verdict::yes;
  }
  out.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

/// Loads a .trs or .srs file; the extension picks the parser.
inline Trs load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (path.extension() == ".srs") return parse_srs(buf.str());
  return parse_trs(buf.str());
}

/// The exact encoding text the internal pipeline would solve.
inline std::string export_dimacs(const Trs& trs, const ProveConfig& cfg) {
  SatEncoderOptions opts;
  opts.bits = cfg.bits;
  opts.mode = cfg.mode;
  opts.addition_cache = cfg.sat_addition_cache;
  opts.cancellation = cfg.sat_cancellation;
  opts.embedding_shortcut = cfg.sat_embedding_shortcut;
  SatEncoding enc = kbo_sat(trs, opts);
  return to_dimacs(tseitin(enc.formula, enc.pool));
}

inline std::string export_opb(const Trs& trs, const ProveConfig& cfg) {
  PbEncoderOptions opts;
  opts.bits = cfg.bits;
  opts.mode = cfg.mode;
  PbProblem p = kbo_pbc(trs, opts);
  if (cfg.minimize != MinimizeKind::none)
    p.objective = PbObjective{objectives(p, cfg.minimize == MinimizeKind::weights
                                                ? ObjectiveKind::weights
                                                : ObjectiveKind::precedence_comparisons)};
  return to_opb(p);
}

struct CorpusEntry {
  std::string file;
  std::string verdict;  // YES / MAYBE / ERROR
  std::string note;
  double time_ms = 0.0;
  std::optional<KboProof> proof;
};

struct CorpusReport {
  std::vector<CorpusEntry> entries;
  int successes = 0;
  int timeouts = 0;
  int errors = 0;
  double total_time_ms = 0.0;
};

/// Runs every .trs/.srs file under dir (sorted by name). Per-file errors
/// are recorded and the run continues. With bits = 0 each file gets the
/// default width of its kind: 4 for term systems, 7 for string systems.
inline CorpusReport run_corpus(const std::filesystem::path& dir, const ProveConfig& cfg) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension();
    if (ext == ".trs" || ext == ".srs") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  CorpusReport report;
  for (const auto& file : files) {
    CorpusEntry e;
    e.file = file.filename().string();
    auto start = std::chrono::steady_clock::now();
    try {
      Trs trs = load_problem(file);
      ProveConfig file_cfg = cfg;
      if (file_cfg.bits == 0)
        file_cfg.bits = trs.kind == SystemKind::string_system ? 7 : 4;
      ProveOutcome r = prove(trs, file_cfg);
      e.verdict = to_string(r.verdict);
      e.note = r.note;
      e.time_ms = r.time_ms;
      e.proof = std::move(r.proof);
      if (r.verdict == Verdict::yes) ++report.successes;
      if (r.note == "timeout") ++report.timeouts;
    } catch (const std::exception& ex) {
      e.verdict = "ERROR";
      e.note = ex.what();
      e.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start)
                      .count();
      ++report.errors;
    }
    report.total_time_ms += e.time_ms;
    report.entries.push_back(std::move(e));
  }
  return report;
}

inline std::string render_corpus_text(const CorpusReport& r) {
  std::ostringstream out;
  std::size_t width = 8;
  for (const CorpusEntry& e : r.entries) width = std::max(width, e.file.size());
  for (const CorpusEntry& e : r.entries) {
    out << e.file << std::string(width - e.file.size() + 2, ' ') << e.verdict;
    if (!e.note.empty()) out << " (" << e.note << ")";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", e.time_ms);
    out << "  " << buf << " ms\n";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", r.total_time_ms);
  out << "total: " << buf << " ms  successes: " << r.successes << "  timeouts: " << r.timeouts
      << "  errors: " << r.errors << '\n';
  return out.str();
}

inline nlohmann::json corpus_json(const CorpusReport& r) {
  nlohmann::json problems = nlohmann::json::array();
  for (const CorpusEntry& e : r.entries) {
    nlohmann::json entry{
        {"file", e.file}, {"verdict", e.verdict}, {"note", e.note}, {"time_ms", e.time_ms}};
    if (e.proof) entry["proof"] = proof_json(*e.proof);
    problems.push_back(std::move(entry));
  }
  return {{"problems", std::move(problems)},
          {"summary",
           {{"total_time_ms", r.total_time_ms},
            {"successes", r.successes},
            {"timeouts", r.timeouts},
            {"errors", r.errors}}}};
}

}  // namespace kbo
