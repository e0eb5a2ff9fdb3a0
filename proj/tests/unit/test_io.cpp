#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include <json.hpp>

#include "maskpr/io.hpp"
#include "maskpr/setgen.hpp"
#include "oracles.hpp"

using namespace maskpr;
using nlohmann::json;

namespace {

MaskEnsemble small_ensemble(AlphaMode mode) {
  return MaskEnsemble(build_vertex_masks(6, 2, mode, 21), symmetrize(6, std::vector<int>{1, 3}));
}

}  // namespace

TEST(EnsembleJson, Layout) {
  const auto ens = small_ensemble(AlphaMode::deterministic);
  const json doc = json::parse(ensemble_to_json(ens));
  EXPECT_EQ(doc.at("dim"), 6);
  EXPECT_EQ(doc.at("K"), 2);
  EXPECT_EQ(doc.at("alpha_mode"), "deterministic");
  EXPECT_EQ(doc.at("modulation_set"), json::array({1, 3, 5}));
  EXPECT_EQ(doc.at("alphas").size(), 2u);
  EXPECT_EQ(doc.at("vertex_masks").size(), 2u);
  EXPECT_EQ(doc.at("vertex_masks")[0].size(), 6u);
  const auto& aux = doc.at("auxiliary_masks");
  ASSERT_EQ(aux.size(), ens.auxiliary().size());
  EXPECT_EQ(aux[0].at("k"), 0);
  EXPECT_EQ(aux[0].at("k'"), 0);
  EXPECT_EQ(aux[0].at("r"), 0);
  EXPECT_EQ(aux[0].at("a"), 1);
  EXPECT_EQ(aux[0].at("diag").size(), 6u);
}

TEST(EnsembleJson, RoundTrip) {
  for (AlphaMode mode : {AlphaMode::deterministic, AlphaMode::random_unit_circle, AlphaMode::gaussian}) {
    const auto ens = small_ensemble(mode);
    for (bool aux : {true, false}) {
      const auto back = ensemble_from_json(ensemble_to_json(ens, aux, 2));
      EXPECT_EQ(back.dim(), ens.dim());
      EXPECT_EQ(back.count(), ens.count());
      EXPECT_EQ(back.modulations(), ens.modulations());
      EXPECT_EQ(back.vertex().mode, mode);
      for (int k = 0; k < ens.count(); ++k) EXPECT_EQ(back.vertex().masks[k].diag, ens.vertex().masks[k].diag);
      EXPECT_EQ(back.vertex().alphas, ens.vertex().alphas);
    }
  }
}

TEST(EnsembleJson, RejectsTamperedAuxiliaryMask) {
  json doc = json::parse(ensemble_to_json(small_ensemble(AlphaMode::gaussian)));
  doc["auxiliary_masks"][3]["diag"][2][0] = 99.0;
  EXPECT_THROW(ensemble_from_json(doc.dump()), std::invalid_argument);
}

TEST(EnsembleJson, RejectsReorderedAuxiliaryMasks) {
  json doc = json::parse(ensemble_to_json(small_ensemble(AlphaMode::gaussian)));
  std::swap(doc["auxiliary_masks"][0], doc["auxiliary_masks"][1]);
  EXPECT_THROW(ensemble_from_json(doc.dump()), std::invalid_argument);
}

TEST(EnsembleJson, RejectsMalformedDocuments) {
  EXPECT_THROW(ensemble_from_json("{"), std::invalid_argument);
  EXPECT_THROW(ensemble_from_json("{\"dim\": 4}"), std::invalid_argument);
  json doc = json::parse(ensemble_to_json(small_ensemble(AlphaMode::gaussian), false));
  doc["K"] = 3;
  EXPECT_THROW(ensemble_from_json(doc.dump()), std::invalid_argument);
}

TEST(MeasurementCsv, RoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  const auto ens = small_ensemble(AlphaMode::gaussian);
  const auto meas = add_noise(measure_all(SignalInstance{oracle::random_complex(6, rng)}, ens), NoiseModel{0.3, 2});
  std::stringstream ss;
  write_measurements_csv(ss, meas);
  const auto back = read_measurements_csv(ss, ens);
  EXPECT_EQ(back.vertex_values(), meas.vertex_values());
  EXPECT_EQ(back.edge_values(), meas.edge_values());
}

TEST(MeasurementCsv, RowFormat) {
  const auto ens = small_ensemble(AlphaMode::deterministic);
  const auto meas = measure_all(SignalInstance{CVector::Ones(6)}, ens);
  std::stringstream ss;
  write_measurements_csv(ss, meas);
  std::string header, first;
  std::getline(ss, header);
  std::getline(ss, first);
  EXPECT_EQ(header, "kind,k,kp,a,r,m,value");
  EXPECT_EQ(first.rfind("vertex,0,,,,0,", 0), 0u) << first;
  std::size_t rows = 1;
  std::string line;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, meas.vertex_values().size() + meas.edge_values().size());
}

TEST(MeasurementCsv, RejectsIncompleteOrDuplicated) {
  const auto ens = small_ensemble(AlphaMode::deterministic);
  const auto meas = measure_all(SignalInstance{CVector::Ones(6)}, ens);
  std::stringstream ss;
  write_measurements_csv(ss, meas);
  const std::string text = ss.str();

  std::istringstream missing(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
  EXPECT_THROW(read_measurements_csv(missing, ens), std::invalid_argument);

  const std::size_t second = text.find('\n') + 1;
  const std::string row = text.substr(second, text.find('\n', second) - second + 1);
  std::istringstream dup(text + row);
  EXPECT_THROW(read_measurements_csv(dup, ens), std::invalid_argument);

  std::istringstream noheader(text.substr(second));
  EXPECT_THROW(read_measurements_csv(noheader, ens), std::invalid_argument);

  std::istringstream badkind("kind,k,kp,a,r,m,value\nfoo,0,,,,0,1\n");
  EXPECT_THROW(read_measurements_csv(badkind, ens), std::invalid_argument);
}

TEST(SignalCsv, RoundTrip) {
  std::mt19937_64 rng(3);
  const SignalInstance x{oracle::random_complex(9, rng)};
  std::stringstream ss;
  write_signal_csv(ss, x);
  EXPECT_EQ(ss.str().rfind("m,re,im\n", 0), 0u);
  EXPECT_EQ(read_signal_csv(ss).values, x.values);
  std::istringstream gap("m,re,im\n0,1,0\n2,1,0\n");
  EXPECT_THROW(read_signal_csv(gap), std::invalid_argument);
}

TEST(Diagnostics, Keys) {
  RecoveryResult res;
  res.surviving_vertices = 90;
  res.final_gap = 0.25;
  res.pruning_iterations = 3;
  res.success = true;
  const json doc = json::parse(diagnostics_to_json(res));
  EXPECT_EQ(doc.at("surviving_vertices"), 90);
  EXPECT_EQ(doc.at("final_gap"), 0.25);
  EXPECT_EQ(doc.at("pruning_iterations"), 3);
  EXPECT_EQ(doc.at("success"), true);
}

TEST(RecordsCsv, HeaderAndRow) {
  TrialRecord r;
  r.dim = 32;
  r.sigma2 = 0.1;
  r.trial = 2;
  r.seed = 77;
  r.num_masks = 183;
  r.set_size = 10;
  r.runtime_ms = 1.5;
  r.rel_error = 0.125;
  r.surviving_vertices = 94;
  r.final_gap = 0.5;
  r.success = true;
  std::stringstream ss;
  write_records_csv(ss, {r});
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  EXPECT_EQ(header, "M,sigma2,trial,seed,num_masks,set_size,runtime_ms,rel_error,surviving_vertices,final_gap,success");
  EXPECT_EQ(row, "32,0.10000000000000001,2,77,183,10,1.5,0.125,94,0.5,true");
}

TEST(FormatDouble, RoundTrips) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, std::uniform_int_distribution<int>(-300, 0)(rng));
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}
