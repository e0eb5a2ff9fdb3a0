#include "maskpr/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace maskpr {

void ExperimentConfig::validate() const {
  if (dims.empty()) throw std::invalid_argument("experiment config: dims must be nonempty");
  if (noise_variances.empty()) throw std::invalid_argument("experiment config: noise_variances must be nonempty");
  if (trials < 1) throw std::invalid_argument("experiment config: trials must be >= 1");
  if (count < 1) throw std::invalid_argument("experiment config: K must be >= 1");
  for (int m : dims) {
    if (m < 2) throw std::invalid_argument("experiment config: every dimension must be >= 2");
  }
  for (double s : noise_variances) {
    if (!(s >= 0.0)) throw std::invalid_argument("experiment config: noise variances must be >= 0");
  }
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) throw std::invalid_argument("experiment config: alpha must lie in (0, 1]");
  if (!(params.tau > 0.0 && params.tau < 1.0)) throw std::invalid_argument("experiment config: tau must lie in (0, 1)");
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return splitmix(splitmix(splitmix(master) ^ a) ^ b);
}

SignalInstance draw_signal(int dim, SignalMode mode, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SignalInstance x{CVector(dim)};
  if (mode == SignalMode::real_gaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int m = 0; m < dim; ++m) x.values[m] = Complex(normal(rng), 0.0);
  } else {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    for (int m = 0; m < dim; ++m) {
      const double re = normal(rng);
      const double im = normal(rng);
      x.values[m] = Complex(re, im);
    }
  }
  return x;
}

TrialInstance draw_instance(const ExperimentConfig& config, int dim, std::uint64_t seed) {
  VertexMaskSet vertex = build_vertex_masks(dim, config.count, config.mask_mode, mix_seed(seed, 1, 0));
  const SetGenConfig set_config = config.set_density_mode == SetDensityMode::constant_c
                                      ? SetGenConfig::with_constant(dim, config.c, mix_seed(seed, 2, 0))
                                      : SetGenConfig::nonzero_log_density(dim, mix_seed(seed, 2, 0));
  ModulationSet a = symmetrize(dim, draw_B(set_config));
  return TrialInstance{MaskEnsemble(std::move(vertex), std::move(a)),
                       draw_signal(dim, config.signal_mode, mix_seed(seed, 3, 0))};
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<TrialRecord> records;
  records.reserve(config.dims.size() * config.noise_variances.size() * static_cast<std::size_t>(config.trials));

  for (int dim : config.dims) {
    for (int trial = 0; trial < config.trials; ++trial) {
      const std::uint64_t seed = mix_seed(config.master_seed, static_cast<std::uint64_t>(dim),
                                          static_cast<std::uint64_t>(trial));
      const TrialInstance instance = draw_instance(config, dim, seed);
      const MeasurementSet clean = measure_all(instance.signal, instance.ensemble);
      for (std::size_t s = 0; s < config.noise_variances.size(); ++s) {
        const double sigma2 = config.noise_variances[s];
        const MeasurementSet noisy = add_noise(clean, NoiseModel{sigma2, mix_seed(seed, 4, s)});

        TrialRecord rec;
        rec.dim = dim;
        rec.sigma2 = sigma2;
        rec.trial = trial;
        rec.seed = seed;
        rec.set_size = static_cast<int>(instance.ensemble.modulations().size());
        rec.num_masks = instance.ensemble.total_masks();

        const auto start = std::chrono::steady_clock::now();
        const RecoveryResult result = recover(noisy, instance.ensemble, config.params);
        const auto stop = std::chrono::steady_clock::now();

        rec.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        rec.rel_error = relative_error(result.estimate, instance.signal);
        rec.surviving_vertices = result.surviving_vertices;
        rec.final_gap = result.final_gap;
        rec.success = result.success;
        records.push_back(rec);
      }
    }
  }

  std::stable_sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return std::tie(a.dim, a.sigma2, a.trial) < std::tie(b.dim, b.sigma2, b.trial);
  });
  return records;
}

namespace {

void mean_and_std(const std::vector<double>& v, double& mean, double& sd) {
  // Welford updates keep a constant sequence at exactly zero spread.
  mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double delta = v[i] - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v[i] - mean);
  }
  sd = v.size() < 2 ? 0.0 : std::sqrt(m2 / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  std::map<std::pair<int, double>, std::vector<const TrialRecord*>> cells;
  for (const auto& r : records) cells[{r.dim, r.sigma2}].push_back(&r);

  std::vector<CellSummary> out;
  for (const auto& [key, group] : cells) {
    std::vector<double> err;
    std::vector<double> time;
    int ok = 0;
    for (const TrialRecord* r : group) {
      err.push_back(r->rel_error);
      time.push_back(r->runtime_ms);
      ok += r->success ? 1 : 0;
    }
    CellSummary cell;
    cell.dim = key.first;
    cell.sigma2 = key.second;
    cell.n = static_cast<int>(group.size());
    mean_and_std(err, cell.mean_error, cell.std_error);
    mean_and_std(time, cell.mean_runtime_ms, cell.std_runtime_ms);
    cell.success_rate = static_cast<double>(ok) / cell.n;
    cell.single_sample = cell.n == 1;
    out.push_back(cell);
  }
  return out;
}

namespace {

std::string svg_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string sigma_label(double sigma2) {
  std::ostringstream os;
  os << sigma2;
  std::string s = os.str();
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const std::vector<CellSummary>& summary,
                                              const std::filesystem::path& directory) {
  if (summary.empty()) throw std::invalid_argument("emit_plots: empty summary");
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw std::runtime_error("emit_plots: cannot create " + directory.string() + ": " + ec.message());

  std::map<double, std::vector<CellSummary>> by_sigma;
  for (const auto& c : summary) by_sigma[c.sigma2].push_back(c);

  constexpr double width = 480.0;
  constexpr double height = 360.0;
  constexpr double margin = 60.0;
  constexpr double floor_error = 1e-16;

  std::vector<std::filesystem::path> written;
  for (auto& [sigma2, cells] : by_sigma) {
    std::sort(cells.begin(), cells.end(), [](const CellSummary& a, const CellSummary& b) { return a.dim < b.dim; });

    double xmin = std::log2(cells.front().dim);
    double xmax = std::log2(cells.back().dim);
    if (xmax == xmin) {
      xmin -= 1.0;
      xmax += 1.0;
    }
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();
    for (const auto& c : cells) {
      const double mean = std::max(c.mean_error, floor_error);
      ymin = std::min(ymin, std::log10(mean));
      ymax = std::max(ymax, std::log10(mean + c.std_error));
      if (c.mean_error - c.std_error > 0.0) ymin = std::min(ymin, std::log10(c.mean_error - c.std_error));
    }
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (ymax == ymin) ymax += 1.0;

    auto px = [&](double lx) { return margin + (lx - xmin) / (xmax - xmin) * (width - 2 * margin); };
    auto py = [&](double ly) { return height - margin - (ly - ymin) / (ymax - ymin) * (height - 2 * margin); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    svg << "<title>relative error, sigma^2 = " << sigma2 << "</title>\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\"/>\n";
    for (const auto& c : cells) {
      const double x = px(std::log2(c.dim));
      svg << "<text x=\"" << svg_number(x) << "\" y=\"" << height - margin + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
          << c.dim << "</text>\n";
    }
    for (double e = ymin; e <= ymax; e += 1.0) {
      svg << "<text x=\"" << margin - 6 << "\" y=\"" << svg_number(py(e) + 4) << "\" text-anchor=\"end\" font-size=\"11\">1e"
          << static_cast<int>(e) << "</text>\n";
    }
    svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\" font-size=\"12\">M</text>\n";
    svg << "<text x=\"15\" y=\"" << height / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 15 "
        << height / 2 << ")\">relative error</text>\n";

    for (const auto& c : cells) {
      const double x = px(std::log2(c.dim));
      const double y = py(std::log10(std::max(c.mean_error, floor_error)));
      const double top = py(std::log10(std::max(c.mean_error, floor_error) + c.std_error));
      svg << "<line class=\"upper\" x1=\"" << svg_number(x) << "\" y1=\"" << svg_number(y) << "\" x2=\"" << svg_number(x)
          << "\" y2=\"" << svg_number(top) << "\" stroke=\"steelblue\"/>\n";
      const double lower = c.mean_error - c.std_error;
      if (lower > 0.0) {
        svg << "<line class=\"lower\" x1=\"" << svg_number(x) << "\" y1=\"" << svg_number(y) << "\" x2=\"" << svg_number(x)
            << "\" y2=\"" << svg_number(py(std::log10(lower))) << "\" stroke=\"steelblue\"/>\n";
      }
      svg << "<circle class=\"mean\" cx=\"" << svg_number(x) << "\" cy=\"" << svg_number(y)
          << "\" r=\"3.5\" fill=\"steelblue\"/>\n";
    }
    svg << "</svg>\n";

    const std::filesystem::path path = directory / ("rel_error_sigma2_" + sigma_label(sigma2) + ".svg");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_plots: cannot write " + path.string());
    out << svg.str();
    if (!out) throw std::runtime_error("emit_plots: write failed for " + path.string());
    written.push_back(path);
  }
  return written;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("experiment config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "dims") {
        cfg.dims.clear();
        for (const auto& v : split_list(value)) cfg.dims.push_back(std::stoi(v));
      } else if (key == "noise_variances") {
        cfg.noise_variances.clear();
        for (const auto& v : split_list(value)) cfg.noise_variances.push_back(std::stod(v));
      } else if (key == "trials") {
        cfg.trials = std::stoi(value);
      } else if (key == "K") {
        cfg.count = std::stoi(value);
      } else if (key == "mask_mode") {
        cfg.mask_mode = alpha_mode_from_string(value);
      } else if (key == "set_density_mode") {
        if (value == "paper-c") {
          cfg.set_density_mode = SetDensityMode::constant_c;
        } else if (value == "section4") {
          cfg.set_density_mode = SetDensityMode::nonzero_log;
        } else {
          throw std::invalid_argument("unknown set_density_mode '" + value + "'");
        }
      } else if (key == "c") {
        cfg.c = std::stod(value);
      } else if (key == "alpha") {
        cfg.params.alpha = std::stod(value);
      } else if (key == "tau") {
        cfg.params.tau = std::stod(value);
      } else if (key == "clamp_negative") {
        cfg.params.clamp_negative = value == "true" || value == "1";
      } else if (key == "signal_mode") {
        if (value == "complex") {
          cfg.signal_mode = SignalMode::complex_gaussian;
        } else if (value == "real") {
          cfg.signal_mode = SignalMode::real_gaussian;
        } else {
          throw std::invalid_argument("unknown signal_mode '" + value + "'");
        }
      } else if (key == "master_seed") {
        cfg.master_seed = std::stoull(value);
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("experiment config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace maskpr
