// lofusion: command-line front end.
//
//   lofusion kraus --gate type1|type2|czr
//   lofusion estimate [--config cfg.json] [--strategy S --target N --rows R --trials T]
//   lofusion mbqc --circuit circuit.json
//   lofusion export-graph --source bell|cross|chain|five|lshape|tile|file [--format json|dot]
//
// Every subcommand writes into --out (default $LOFUSION_OUT_DIR, else ".") and
// leaves a manifest next to its outputs. Exit codes: 0 ok, 1 check failed,
// 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lofusion/io.hpp"
#include "lofusion/mbqc.hpp"
#include "lofusion/strategies.hpp"

#ifndef LOFUSION_VERSION
#define LOFUSION_VERSION "dev"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lofusion;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> trials;
  std::string out;
  std::string format;
};

fs::path out_dir(const Common& c) {
  std::string d = c.out;
  if (d.empty())
    if (const char* env = std::getenv("LOFUSION_OUT_DIR")) d = env;
  if (d.empty()) d = ".";
  fs::create_directories(d);
  return d;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

// Wall-clock time is only recorded when SOURCE_DATE_EPOCH pins it, so reruns
// stay byte-identical.
void write_manifest(const fs::path& dir, const std::string& sub, const json& config, std::uint64_t seed,
                    const std::vector<std::string>& files) {
  const std::string json_version = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                   std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                   std::to_string(NLOHMANN_JSON_VERSION_PATCH);
  json m = {{"subcommand", sub},
            {"config", config},
            {"seed", seed},
            {"versions", {{"lofusion", LOFUSION_VERSION}, {"json", json_version}}},
            {"outputs", files}};
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH"))
    m["timestamp"] = std::string(e);
  else
    m["timestamp"] = nullptr;
  for (const auto& f : files)
    if (!fs::exists(dir / f)) throw std::runtime_error("missing output " + f);
  write_file(dir / ("manifest_" + sub + ".json"), m.dump(2) + "\n");
}

// ---------------------------------------------------------------- kraus

int cmd_kraus(const Common& c, const std::string& gate, bool threshold) {
  FusionOp op;
  if (gate == "type1")
    op = FusionOp::TypeI;
  else if (gate == "type2")
    op = FusionOp::TypeII;
  else if (gate == "czr")
    op = FusionOp::CzRedundant;
  else
    throw UsageError("unknown gate '" + gate + "'");
  const auto ch = io::fusion_channel(op, !threshold);
  json j = io::channel_json(ch);
  j["classes"] = io::fusion_classes_json(op, ch);
  const auto dir = out_dir(c);
  const std::string name = "kraus_" + gate + ".json";
  write_file(dir / name, j.dump(2) + "\n");
  write_manifest(dir, "kraus", {{"gate", gate}, {"number_resolving", !threshold}}, c.seed, {name});
  const double err = ch.completeness_error();
  std::set<std::string> kinds;
  for (const auto& cl : j["classes"]) kinds.insert(cl["kind"].get<std::string>());
  std::cout << gate << ": " << ch.entries.size() << " detection outcomes, " << kinds.size()
            << " fusion outcomes, completeness error " << err << "\n";
  if (err > 1e-9) {
    std::cerr << "completeness check failed\n";
    return 1;
  }
  return 0;
}

// ------------------------------------------------------------- estimate

struct EstimateFlags {
  std::string config;
  std::optional<std::string> strategy;
  std::optional<std::size_t> target, rows;
  std::optional<unsigned> threads;
};

int cmd_estimate(const Common& c, bool seed_given, const EstimateFlags& f) {
  StrategyConfig cfg;
  cfg.seed = c.seed;
  try {
    if (!f.config.empty()) {
      const json j = read_json(f.config);
      for (const auto& [k, v] : j.items())
        if (k != "strategy" && k != "target" && k != "rows" && k != "trials" && k != "seed" && k != "threads")
          throw UsageError("unknown config key '" + k + "'");
      if (j.contains("strategy")) cfg.strategy = strategy_from_name(j["strategy"].get<std::string>());
      cfg.target = j.value("target", cfg.target);
      cfg.rows = j.value("rows", cfg.rows);
      cfg.trials = j.value("trials", cfg.trials);
      if (!seed_given) cfg.seed = j.value("seed", cfg.seed);
      cfg.threads = j.value("threads", cfg.threads);
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config: ") + e.what());
  }
  if (f.strategy) cfg.strategy = strategy_from_name(*f.strategy);
  if (f.target) cfg.target = *f.target;
  if (f.rows) cfg.rows = *f.rows;
  if (c.trials) cfg.trials = *c.trials;
  if (f.threads) cfg.threads = *f.threads;
  cfg.validate();

  const auto rep = estimate_resources(cfg);
  const auto dir = out_dir(c);
  const std::string stem = std::string("estimate_") + strategy_name(cfg.strategy);
  std::ostringstream csv;
  write_trials_csv(rep, csv);
  write_file(dir / (stem + ".csv"), csv.str());
  const json summary = summary_json(rep);
  write_file(dir / (stem + ".json"), summary.dump(2) + "\n");
  const json echo = {{"strategy", strategy_name(cfg.strategy)},
                     {"target", cfg.target},
                     {"rows", cfg.rows},
                     {"trials", cfg.trials}};
  write_manifest(dir, "estimate", echo, cfg.seed, {stem + ".csv", stem + ".json"});
  if (c.format == "csv")
    std::cout << csv.str();
  else
    std::cout << summary.dump(2) << "\n";
  return 0;
}

// ----------------------------------------------------------------- mbqc

int cmd_mbqc(const Common& c, const std::string& circuit_path) {
  LogicalCircuit circuit;
  try {
    circuit = io::circuit_from_json(read_json(circuit_path));
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad circuit: ") + e.what());
  }
  Rng rng(c.seed);
  const auto run = run_mbqc(circuit, rng);
  json report = {{"circuit", io::circuit_json(circuit)},
                 {"layout",
                  {{"columns", run.compiled.layout.columns},
                   {"rows", run.compiled.layout.rows},
                   {"bond_units", run.compiled.bond_units()}}},
                 {"pattern", io::pattern_json(run.compiled.pattern)},
                 {"outcomes", run.exec.outcomes},
                 {"type_ii_attempts", run.tile.tally.type_ii_attempts},
                 {"fidelity", run.fidelity}};
  const auto dir = out_dir(c);
  write_file(dir / "mbqc.json", report.dump(2) + "\n");
  write_manifest(dir, "mbqc", {{"circuit", fs::path(circuit_path).filename().string()}}, c.seed, {"mbqc.json"});
  std::cout << "fidelity " << run.fidelity << "\n";
  if (run.fidelity < 1 - 1e-9) {
    std::cerr << "fidelity below 1 - 1e-9\n";
    return 1;
  }
  return 0;
}

// --------------------------------------------------------- export-graph

struct ExportFlags {
  std::string source = "bell";
  std::string input;
  int length = 8, columns = 2, rows = 2;
  bool events = false;
};

int cmd_export(const Common& c, const ExportFlags& f) {
  const std::string format = c.format.empty() ? "json" : c.format;
  if (format != "json" && format != "dot") throw UsageError("unknown graph format '" + format + "'");
  Rng rng(c.seed);
  FusionLog log;
  GraphState g;
  if (f.source == "bell") {
    g = GraphState::bell_pair();
  } else if (f.source == "cross") {
    g = GraphState::linear_cluster(3);
    g.absorb(GraphState::linear_cluster(3));
    fuse_type_i(g, 1, 4, FusionChoice::sample(rng), &log);
    while (g.vertex_count() != 5) {
      g = GraphState::linear_cluster(3);
      g.absorb(GraphState::linear_cluster(3));
      fuse_type_i(g, 1, 4, FusionChoice::sample(rng), &log);
    }
  } else if (f.source == "chain") {
    if (f.length < 3) throw UsageError("chain length must be at least 3");
    g = *grow_linear_naive(static_cast<std::size_t>(f.length), rng, Mode::Graph, &log).chain.g;
  } else if (f.source == "five") {
    ResourceTally t;
    g = *build_five_cluster(rng, t, Mode::Graph, &log).g;
  } else if (f.source == "lshape") {
    g = *build_lshape(rng, Mode::Graph, {}, &log).g;
  } else if (f.source == "tile") {
    if (f.columns < 1 || f.rows < 1) throw UsageError("tile needs columns >= 1 and rows >= 1");
    g = *tile_layout(f.columns, f.rows, rng, Mode::Graph, {}, &log).g;
  } else if (f.source == "file") {
    if (f.input.empty()) throw UsageError("--input is required with --source file");
    const std::string text = read_text(f.input);
    try {
      g = text.rfind("graph", 0) == 0 ? io::graph_from_dot(text) : io::graph_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw UsageError(std::string("bad graph file: ") + e.what());
    }
  } else {
    throw UsageError("unknown source '" + f.source + "'");
  }
  const auto dir = out_dir(c);
  const std::string name = "graph_" + f.source + "." + format;
  write_file(dir / name, format == "json" ? io::graph_json(g).dump(2) + "\n" : io::graph_dot(g));
  std::vector<std::string> files{name};
  if (f.events) {
    std::ostringstream ev;
    log.write_jsonl(ev);
    files.push_back("graph_" + f.source + ".events.jsonl");
    write_file(dir / files.back(), ev.str());
  }
  json echo = {{"source", f.source}, {"format", format}};
  if (f.source == "chain") echo["length"] = f.length;
  if (f.source == "tile") echo["columns"] = f.columns, echo["rows"] = f.rows;
  if (f.source == "file") echo["input"] = fs::path(f.input).filename().string();
  write_manifest(dir, "export-graph", echo, c.seed, files);
  std::cout << g.vertex_count() << " vertices, " << g.edges().size() << " edges\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fusion-based linear-optics cluster-state simulator"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "random seed")->capture_default_str();
    sub->add_option("--out", common.out, "output directory (default $LOFUSION_OUT_DIR or .)");
  };

  auto* kraus = app.add_subcommand("kraus", "derive a fusion gate's Kraus operators");
  std::string gate;
  bool threshold = false;
  kraus->add_option("--gate", gate, "type1, type2 or czr")->required();
  kraus->add_flag("--threshold", threshold, "non-number-resolving detectors");
  add_common(kraus);

  auto* est = app.add_subcommand("estimate", "Monte Carlo resource estimate");
  EstimateFlags ef;
  est->add_option("--config", ef.config, "StrategyConfig JSON file");
  est->add_option("--strategy", ef.strategy, "three-cluster, five-cluster, naive, five, lshape or tile");
  est->add_option("--target", ef.target, "chain length, or tile columns");
  est->add_option("--rows", ef.rows, "tile rows");
  est->add_option("--trials", common.trials, "number of trials");
  est->add_option("--threads", ef.threads, "worker threads (0: all cores)");
  est->add_option("--format", common.format, "stdout format: json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_common(est);

  auto* mb = app.add_subcommand("mbqc", "run a circuit as a measurement pattern on a fused tile");
  std::string circuit;
  mb->add_option("--circuit", circuit, "circuit JSON (angles in degrees)")->required();
  add_common(mb);

  auto* ex = app.add_subcommand("export-graph", "write a cluster state as JSON or DOT");
  ExportFlags xf;
  ex->add_option("--source", xf.source, "bell, cross, chain, five, lshape, tile or file")->capture_default_str();
  ex->add_option("--input", xf.input, "graph file for --source file");
  ex->add_option("--length", xf.length, "chain length")->capture_default_str();
  ex->add_option("--columns", xf.columns, "tile columns")->capture_default_str();
  ex->add_option("--rows", xf.rows, "tile rows")->capture_default_str();
  ex->add_option("--format", common.format, "json or dot");
  ex->add_flag("--events", xf.events, "also write the fusion event log");
  add_common(ex);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*kraus) return cmd_kraus(common, gate, threshold);
    if (*est) return cmd_estimate(common, est->get_option("--seed")->count() > 0, ef);
    if (*mb) return cmd_mbqc(common, circuit);
    if (*ex) return cmd_export(common, xf);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
