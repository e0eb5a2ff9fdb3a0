#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maskpr/bench.hpp"
#include "maskpr/graph.hpp"
#include "maskpr/io.hpp"
#include "maskpr/masks.hpp"
#include "maskpr/measure.hpp"
#include "maskpr/recover.hpp"
#include "maskpr/setgen.hpp"

using namespace maskpr;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

struct MasksGenOptions {
  int dim = 32;
  int count = 3;
  std::string mode = "gaussian";
  std::uint64_t seed = 1;
  std::string set;
  std::string density_mode = "section4";
  double c = 4.0;
  std::uint64_t set_seed = 2;
  bool vertex_only = false;
  std::string out;
};

struct SimulateOptions {
  std::string masks;
  std::string signal;
  std::string signal_mode = "complex";
  std::uint64_t signal_seed = 3;
  double sigma2 = 0.0;
  std::uint64_t noise_seed = 4;
  std::string out;
  std::string signal_out;
};

struct RecoverOptions {
  std::string masks;
  std::string measurements;
  std::string out;
  std::string diagnostics;
  std::string truth;
  double alpha = 0.99;
  double tau = 0.1;
  bool no_clamp = false;
};

struct GraphOptions {
  int dim = 0;
  int count = 1;
  std::string set;
  std::string out;
};

int run_masks_gen(const MasksGenOptions& o) {
  const VertexMaskSet vertex = build_vertex_masks(o.dim, o.count, alpha_mode_from_string(o.mode), o.seed);
  ModulationSet a;
  if (!o.set.empty()) {
    a = ModulationSet::from_elements(o.dim, parse_int_list(o.set));
  } else if (o.density_mode == "section4") {
    a = symmetrize(o.dim, draw_B(SetGenConfig::nonzero_log_density(o.dim, o.set_seed)));
  } else if (o.density_mode == "paper-c") {
    a = symmetrize(o.dim, draw_B(SetGenConfig::with_constant(o.dim, o.c, o.set_seed)));
  } else {
    throw std::invalid_argument("unknown --density-mode '" + o.density_mode + "'");
  }
  const MaskEnsemble ensemble(vertex, a);
  auto out = open_out(o.out);
  out << ensemble_to_json(ensemble, !o.vertex_only, 1) << '\n';
  std::cerr << "wrote " << ensemble.total_masks() << " masks (|A| = " << a.size() << ") to " << o.out << '\n';
  return 0;
}

int run_simulate(const SimulateOptions& o) {
  const MaskEnsemble ensemble = ensemble_from_json(read_file(o.masks));
  SignalInstance x;
  if (!o.signal.empty()) {
    std::ifstream in(o.signal);
    if (!in) throw std::runtime_error("cannot open " + o.signal);
    x = read_signal_csv(in);
    if (x.dim() != ensemble.dim()) throw std::invalid_argument("signal length does not match the mask dimension");
  } else {
    SignalMode mode;
    if (o.signal_mode == "complex") mode = SignalMode::complex_gaussian;
    else if (o.signal_mode == "real") mode = SignalMode::real_gaussian;
    else throw std::invalid_argument("unknown --signal-mode '" + o.signal_mode + "'");
    x = draw_signal(ensemble.dim(), mode, o.signal_seed);
  }
  const MeasurementSet meas = add_noise(measure_all(x, ensemble), NoiseModel{o.sigma2, o.noise_seed});
  auto out = open_out(o.out);
  write_measurements_csv(out, meas);
  if (!o.signal_out.empty()) {
    auto sig = open_out(o.signal_out);
    write_signal_csv(sig, x);
  }
  return 0;
}

int run_recover(const RecoverOptions& o) {
  const MaskEnsemble ensemble = ensemble_from_json(read_file(o.masks));
  std::ifstream in(o.measurements);
  if (!in) throw std::runtime_error("cannot open " + o.measurements);
  const MeasurementSet meas = read_measurements_csv(in, ensemble);
  const RecoveryResult result = recover(meas, ensemble, RecoveryParams{o.alpha, o.tau, !o.no_clamp});

  auto out = open_out(o.out);
  write_signal_csv(out, result.estimate);
  const std::string diag_path = o.diagnostics.empty() ? o.out + ".json" : o.diagnostics;
  auto diag = open_out(diag_path);
  diag << diagnostics_to_json(result) << '\n';

  std::cout << "success: " << (result.success ? "true" : "false") << '\n';
  if (!result.success) std::cout << "failed stage: " << result.failed_stage << " (" << result.message << ")\n";
  std::cout << "surviving vertices: " << result.surviving_vertices << '\n';
  if (!o.truth.empty()) {
    std::ifstream tin(o.truth);
    if (!tin) throw std::runtime_error("cannot open " + o.truth);
    std::cout << "relative error: " << format_double(relative_error(result.estimate, read_signal_csv(tin))) << '\n';
  }
  return result.success ? 0 : 2;
}

int run_experiment_cmd(const std::string& config_path, const std::string& out_path, const std::string& plots) {
  const ExperimentConfig config = parse_experiment_config(read_file(config_path));
  const auto records = run_experiment(config);
  auto out = open_out(out_path);
  write_records_csv(out, records);
  const auto summary = summarize(records);
  for (const auto& c : summary) {
    std::printf("M=%d sigma2=%g n=%d rel_error=%.3g+-%.3g runtime_ms=%.3g success=%.0f%%\n", c.dim, c.sigma2, c.n,
                c.mean_error, c.std_error, c.mean_runtime_ms, 100.0 * c.success_rate);
  }
  if (!plots.empty()) {
    for (const auto& p : emit_plots(summary, plots)) std::cout << "plot: " << p.string() << '\n';
  }
  return 0;
}

int run_bias_eval(int dim, const std::string& set_text) {
  const std::vector<int> s = parse_int_list(set_text);
  std::vector<int> reduced;
  for (int v : s) reduced.push_back(((v % dim) + dim) % dim);
  std::printf("bias %s\n", format_double(fourier_bias(reduced, dim)).c_str());
  try {
    const ModulationSet a = ModulationSet::from_elements(dim, reduced);
    std::printf("gap %s\n", format_double(spectral_gap_from_bias(a)).c_str());
  } catch (const std::invalid_argument& e) {
    std::printf("gap n/a (%s)\n", e.what());
  }
  return 0;
}

int run_graph_dump(const GraphOptions& o) {
  const auto graph = build_graph(o.count, o.dim, ModulationSet::from_elements(o.dim, parse_int_list(o.set)));
  if (o.out.empty()) {
    graph.write_edge_list(std::cout);
  } else {
    auto out = open_out(o.out);
    graph.write_edge_list(out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase retrieval from masked Fourier intensities via polarization"};
  app.require_subcommand(1);

  auto* masks = app.add_subcommand("masks", "Mask ensembles");
  masks->require_subcommand(1);
  MasksGenOptions gen;
  auto* masks_gen = masks->add_subcommand("gen", "Generate a mask ensemble as JSON");
  masks_gen->add_option("--dim", gen.dim, "Signal dimension M")->required()->check(CLI::PositiveNumber);
  masks_gen->add_option("--K", gen.count, "Number of vertex masks")->check(CLI::PositiveNumber);
  masks_gen->add_option("--mode", gen.mode, "deterministic | random | gaussian");
  masks_gen->add_option("--seed", gen.seed, "Seed for random and gaussian masks");
  masks_gen->add_option("--set", gen.set, "Explicit modulation set a1,a2,...");
  masks_gen->add_option("--density-mode", gen.density_mode, "section4 | paper-c (when --set is absent)");
  masks_gen->add_option("--c", gen.c, "Constant for paper-c density");
  masks_gen->add_option("--set-seed", gen.set_seed, "Seed for the modulation set draw");
  masks_gen->add_flag("--vertex-only", gen.vertex_only, "Omit auxiliary mask diagonals");
  masks_gen->add_option("--out", gen.out, "Output JSON path")->required();

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Draw or read a signal and write its measurements");
  simulate->add_option("--masks", sim.masks, "Mask ensemble JSON")->required();
  simulate->add_option("--signal", sim.signal, "Signal CSV (m,re,im); drawn at random if absent");
  simulate->add_option("--signal-mode", sim.signal_mode, "complex | real");
  simulate->add_option("--signal-seed", sim.signal_seed, "Seed for the signal draw");
  simulate->add_option("--sigma2", sim.sigma2, "Noise variance")->check(CLI::NonNegativeNumber);
  simulate->add_option("--noise-seed", sim.noise_seed, "Seed for the noise draw");
  simulate->add_option("--out", sim.out, "Measurement CSV path")->required();
  simulate->add_option("--signal-out", sim.signal_out, "Also write the signal CSV here");

  RecoverOptions rec;
  auto* recover_cmd = app.add_subcommand("recover", "Recover a signal from measurements");
  recover_cmd->add_option("--masks", rec.masks, "Mask ensemble JSON")->required();
  recover_cmd->add_option("--measurements", rec.measurements, "Measurement CSV")->required();
  recover_cmd->add_option("--out", rec.out, "Estimate CSV path")->required();
  recover_cmd->add_option("--diagnostics", rec.diagnostics, "Diagnostics JSON path (default <out>.json)");
  recover_cmd->add_option("--truth", rec.truth, "True signal CSV, to report the relative error");
  recover_cmd->add_option("--alpha", rec.alpha, "Reliability pruning parameter")->check(CLI::Range(0.0, 1.0));
  recover_cmd->add_option("--tau", rec.tau, "Connectivity threshold")->check(CLI::Range(0.0, 1.0));
  recover_cmd->add_flag("--no-clamp", rec.no_clamp, "Use sqrt|I| instead of clamping negative intensities");

  std::string config_path, results_path, plots_dir;
  auto* experiment = app.add_subcommand("experiment", "Run a seeded experiment sweep");
  experiment->add_option("--config", config_path, "key = value config file")->required();
  experiment->add_option("--out", results_path, "results.csv path")->required();
  experiment->add_option("--plots", plots_dir, "Directory for SVG plots");

  auto* bias = app.add_subcommand("bias", "Fourier bias tools");
  bias->require_subcommand(1);
  int bias_dim = 0;
  std::string bias_set;
  auto* bias_eval = bias->add_subcommand("eval", "Print the Fourier bias and graph gap of a set");
  bias_eval->add_option("--dim", bias_dim, "Dimension M")->required()->check(CLI::Range(2, 1 << 30));
  bias_eval->add_option("--set", bias_set, "Residues a1,a2,...")->required();

  GraphOptions graph_opts;
  auto* graph = app.add_subcommand("graph", "Polarization graph tools");
  graph->require_subcommand(1);
  auto* graph_dump = graph->add_subcommand("dump", "Write the edge list as 'k,m k',m'' lines");
  graph_dump->add_option("--dim", graph_opts.dim, "Dimension M")->required()->check(CLI::PositiveNumber);
  graph_dump->add_option("--K", graph_opts.count, "Number of vertex masks")->check(CLI::PositiveNumber);
  graph_dump->add_option("--set", graph_opts.set, "Modulation set a1,a2,...")->required();
  graph_dump->add_option("--out", graph_opts.out, "Output path (stdout if absent)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*masks_gen) return run_masks_gen(gen);
    if (*simulate) return run_simulate(sim);
    if (*recover_cmd) return run_recover(rec);
    if (*experiment) return run_experiment_cmd(config_path, results_path, plots_dir);
    if (*bias_eval) return run_bias_eval(bias_dim, bias_set);
    if (*graph_dump) return run_graph_dump(graph_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
