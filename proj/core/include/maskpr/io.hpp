#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "maskpr/bench.hpp"
#include "maskpr/masks.hpp"
#include "maskpr/measure.hpp"
#include "maskpr/recover.hpp"

namespace maskpr {

// Mask-ensemble JSON:
// {dim, K, alpha_mode, seed, modulation_set: [ints], alphas: [[re,im],...],
//  vertex_masks: [[[re,im],...], ...],
//  auxiliary_masks: [{k, k', r, a, diag: [[re,im],...]}, ...]}
std::string ensemble_to_json(const MaskEnsemble& ensemble, bool include_auxiliary = true, int indent = -1);
/// Auxiliary diagonals in the document, if present, are checked against the
/// vertex masks.
MaskEnsemble ensemble_from_json(const std::string& text);

// Measurement CSV: header `kind,k,kp,a,r,m,value`; vertex rows leave kp/a/r empty.
void write_measurements_csv(std::ostream& os, const MeasurementSet& meas);
/// Layout (M, K, A) comes from the ensemble; every tuple must appear exactly once.
MeasurementSet read_measurements_csv(std::istream& is, const MaskEnsemble& ensemble);

// Signal CSV: header `m,re,im`.
void write_signal_csv(std::ostream& os, const SignalInstance& x);
SignalInstance read_signal_csv(std::istream& is);

std::string diagnostics_to_json(const RecoveryResult& result);

// results.csv: M,sigma2,trial,seed,num_masks,set_size,runtime_ms,rel_error,surviving_vertices,final_gap,success
void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records);

/// 17 significant digits, enough to round-trip a double.
std::string format_double(double v);

}  // namespace maskpr
