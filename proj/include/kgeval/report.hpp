#pragma once

#include <json.hpp>

#include "kgeval/candidate_sets.hpp"
#include "kgeval/evaluation.hpp"
#include "kgeval/recommenders.hpp"
#include "kgeval/sampling.hpp"
#include "kgeval/theory.hpp"

namespace kgeval {

using Json = nlohmann::ordered_json;

/// `{strategy: {mrr: {mean, std}, hits1, ..., wall_time_s, speedup, mae_vs_full, ...}}`.
/// With include_timing false, wall_time_s and speedup are written as null so
/// the output is byte-identical across runs.
Json to_json(const EvaluationReport& report, bool include_timing = true);

Json to_json(const EasyNegativeReport& report, const TripleStore& store);
Json to_json(const ComparisonReport& report);
Json to_json(const SamplingLedger& ledger);
Json to_json(const CrRrPoint& point);

/// Sidecar for a saved score matrix.
Json score_sidecar(const ScoreMatrix& x, double build_seconds);

}  // namespace kgeval
