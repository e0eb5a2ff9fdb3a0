#include "maskpr/io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace maskpr {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json complex_array(const CVector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back({v[i].real(), v[i].imag()});
  return arr;
}

CVector complex_vector(const json& arr, const char* what) {
  if (!arr.is_array()) throw std::invalid_argument(std::string("ensemble JSON: ") + what + " must be an array");
  CVector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& z = arr[i];
    if (!z.is_array() || z.size() != 2) {
      throw std::invalid_argument(std::string("ensemble JSON: ") + what + " entries must be [re, im] pairs");
    }
    v[static_cast<Eigen::Index>(i)] = Complex(z[0].get<double>(), z[1].get<double>());
  }
  return v;
}

}  // namespace

std::string ensemble_to_json(const MaskEnsemble& ensemble, bool include_auxiliary, int indent) {
  const VertexMaskSet& vertex = ensemble.vertex();
  json doc;
  doc["dim"] = ensemble.dim();
  doc["K"] = ensemble.count();
  doc["alpha_mode"] = std::string(to_string(vertex.mode));
  doc["seed"] = vertex.seed;
  doc["modulation_set"] = std::vector<int>(ensemble.modulations().elements().begin(),
                                           ensemble.modulations().elements().end());
  json alphas = json::array();
  for (const Complex& a : vertex.alphas) alphas.push_back({a.real(), a.imag()});
  doc["alphas"] = alphas;
  json masks = json::array();
  for (const auto& mask : vertex.masks) masks.push_back(complex_array(mask.diag));
  doc["vertex_masks"] = masks;
  json aux = json::array();
  if (include_auxiliary) {
    for (std::size_t i = 0; i < ensemble.auxiliary().size(); ++i) {
      const AuxiliaryIndex& idx = ensemble.auxiliary()[i];
      aux.push_back({{"k", idx.k}, {"k'", idx.kp}, {"r", idx.r}, {"a", idx.a},
                     {"diag", complex_array(ensemble.auxiliary_mask(i).diag)}});
    }
  }
  doc["auxiliary_masks"] = aux;
  return doc.dump(indent);
}

MaskEnsemble ensemble_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("ensemble JSON: ") + e.what());
  }
  try {
    VertexMaskSet vertex;
    vertex.dim = doc.at("dim").get<int>();
    vertex.mode = alpha_mode_from_string(doc.at("alpha_mode").get<std::string>());
    vertex.seed = doc.value("seed", std::uint64_t{0});
    const int count = doc.at("K").get<int>();
    if (doc.contains("alphas")) {
      const CVector alphas = complex_vector(doc["alphas"], "alphas");
      vertex.alphas.assign(alphas.data(), alphas.data() + alphas.size());
    }
    for (const json& m : doc.at("vertex_masks")) vertex.masks.push_back(DiagonalMask{complex_vector(m, "vertex_masks")});
    if (vertex.count() != count) throw std::invalid_argument("ensemble JSON: K does not match vertex_masks");

    ModulationSet a = ModulationSet::from_elements(vertex.dim, doc.at("modulation_set").get<std::vector<int>>());
    MaskEnsemble ensemble(std::move(vertex), std::move(a));

    const json& aux = doc.value("auxiliary_masks", json::array());
    if (!aux.empty()) {
      if (aux.size() != ensemble.auxiliary().size()) {
        throw std::invalid_argument("ensemble JSON: expected " + std::to_string(ensemble.auxiliary().size()) +
                                    " auxiliary masks, found " + std::to_string(aux.size()));
      }
      for (std::size_t i = 0; i < aux.size(); ++i) {
        const json& entry = aux[i];
        const int kp = entry.contains("k'") ? entry["k'"].get<int>() : entry.at("kp").get<int>();
        const AuxiliaryIndex idx{entry.at("k").get<int>(), kp, entry.at("r").get<int>(), entry.at("a").get<int>()};
        if (!(idx == ensemble.auxiliary()[i])) {
          throw std::invalid_argument("ensemble JSON: auxiliary mask " + std::to_string(i) + " is out of canonical order");
        }
        const CVector diag = complex_vector(entry.at("diag"), "auxiliary diag");
        const CVector expected = ensemble.auxiliary_mask(i).diag;
        if (diag.size() != expected.size() ||
            (diag - expected).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + expected.cwiseAbs().maxCoeff())) {
          throw std::invalid_argument("ensemble JSON: auxiliary mask " + std::to_string(i) +
                                      " disagrees with its vertex masks");
        }
      }
    }
    return ensemble;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("ensemble JSON: ") + e.what());
  }
}

void write_measurements_csv(std::ostream& os, const MeasurementSet& meas) {
  os << "kind,k,kp,a,r,m,value\n";
  for (int k = 0; k < meas.count(); ++k) {
    for (int m = 0; m < meas.dim(); ++m) os << "vertex," << k << ",,,," << m << ',' << format_double(meas.vertex(k, m)) << '\n';
  }
  const auto& mods = meas.modulations();
  for (int k = 0; k < meas.count(); ++k) {
    for (int kp = 0; kp <= k; ++kp) {
      for (std::size_t ai = 0; ai < mods.size(); ++ai) {
        for (int r = 0; r < 3; ++r) {
          for (int m = 0; m < meas.dim(); ++m) {
            os << "edge," << k << ',' << kp << ',' << mods[ai] << ',' << r << ',' << m << ','
               << format_double(meas.edge(k, kp, static_cast<int>(ai), r, m)) << '\n';
          }
        }
      }
    }
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

int parse_int(const std::string& s, int lineno) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw std::invalid_argument("measurement CSV line " + std::to_string(lineno) + ": bad integer '" + s + "'");
  }
}

double parse_double(const std::string& s, int lineno) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw std::invalid_argument("CSV line " + std::to_string(lineno) + ": bad number '" + s + "'");
  }
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

MeasurementSet read_measurements_csv(std::istream& is, const MaskEnsemble& ensemble) {
  const auto mods = ensemble.modulations().elements();
  MeasurementSet meas(ensemble.dim(), ensemble.count(), std::vector<int>(mods.begin(), mods.end()));
  std::vector<char> seen_vertex(meas.vertex_values().size(), 0);
  std::vector<char> seen_edge(meas.edge_values().size(), 0);

  std::string line;
  int lineno = 0;
  if (!std::getline(is, line) || strip_cr(line) != "kind,k,kp,a,r,m,value") {
    throw std::invalid_argument("measurement CSV: missing header 'kind,k,kp,a,r,m,value'");
  }
  ++lineno;
  const int dim = ensemble.dim();
  while (std::getline(is, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) throw std::invalid_argument("measurement CSV line " + std::to_string(lineno) + ": expected 7 fields");
    const int k = parse_int(f[1], lineno);
    const int m = parse_int(f[5], lineno);
    const double value = parse_double(f[6], lineno);
    if (k < 0 || k >= ensemble.count() || m < 0 || m >= dim) {
      throw std::invalid_argument("measurement CSV line " + std::to_string(lineno) + ": index out of range");
    }
    if (f[0] == "vertex") {
      const auto off = static_cast<std::size_t>(k) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(m);
      if (seen_vertex[off]++) throw std::invalid_argument("measurement CSV line " + std::to_string(lineno) + ": duplicate vertex row");
      meas.vertex(k, m) = value;
    } else if (f[0] == "edge") {
      const int kp = parse_int(f[2], lineno);
      const int a = parse_int(f[3], lineno);
      const int r = parse_int(f[4], lineno);
      const int ai = ensemble.modulations().index_of(a);
      if (kp < 0 || kp > k || ai < 0 || r < 0 || r > 2) {
        throw std::invalid_argument("measurement CSV line " + std::to_string(lineno) + ": edge tuple not in the ensemble");
      }
      double* slot = &meas.edge(k, kp, ai, r, m);
      const auto off = static_cast<std::size_t>(slot - meas.edge_values().data());
      if (seen_edge[off]++) throw std::invalid_argument("measurement CSV line " + std::to_string(lineno) + ": duplicate edge row");
      *slot = value;
    } else {
      throw std::invalid_argument("measurement CSV line " + std::to_string(lineno) + ": unknown kind '" + f[0] + "'");
    }
  }
  if (std::find(seen_vertex.begin(), seen_vertex.end(), 0) != seen_vertex.end() ||
      std::find(seen_edge.begin(), seen_edge.end(), 0) != seen_edge.end()) {
    throw std::invalid_argument("measurement CSV: missing measurement tuples for the ensemble");
  }
  return meas;
}

void write_signal_csv(std::ostream& os, const SignalInstance& x) {
  os << "m,re,im\n";
  for (int m = 0; m < x.dim(); ++m) {
    os << m << ',' << format_double(x.values[m].real()) << ',' << format_double(x.values[m].imag()) << '\n';
  }
}

SignalInstance read_signal_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || strip_cr(line) != "m,re,im") throw std::invalid_argument("signal CSV: missing header 'm,re,im'");
  std::map<int, Complex> values;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 3) throw std::invalid_argument("signal CSV line " + std::to_string(lineno) + ": expected 3 fields");
    values[parse_int(f[0], lineno)] = Complex(parse_double(f[1], lineno), parse_double(f[2], lineno));
  }
  SignalInstance x{CVector(static_cast<Eigen::Index>(values.size()))};
  int expected = 0;
  for (const auto& [m, v] : values) {
    if (m != expected++) throw std::invalid_argument("signal CSV: indices must be 0..M-1");
    x.values[m] = v;
  }
  return x;
}

std::string diagnostics_to_json(const RecoveryResult& result) {
  json doc{{"surviving_vertices", result.surviving_vertices},
           {"final_gap", result.final_gap},
           {"pruning_iterations", result.pruning_iterations},
           {"success", result.success}};
  if (!result.success) {
    doc["failed_stage"] = result.failed_stage;
    doc["message"] = result.message;
  }
  if (!result.flagged_vertices.empty()) doc["flagged_vertices"] = result.flagged_vertices;
  return doc.dump(2);
}

void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "M,sigma2,trial,seed,num_masks,set_size,runtime_ms,rel_error,surviving_vertices,final_gap,success\n";
  for (const auto& r : records) {
    os << r.dim << ',' << format_double(r.sigma2) << ',' << r.trial << ',' << r.seed << ',' << r.num_masks << ','
       << r.set_size << ',' << format_double(r.runtime_ms) << ',' << format_double(r.rel_error) << ','
       << r.surviving_vertices << ',' << format_double(r.final_gap) << ',' << (r.success ? "true" : "false") << '\n';
  }
}

}  // namespace maskpr
