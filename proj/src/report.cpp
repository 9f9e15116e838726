#include "kgeval/report.hpp"

#include <cmath>

namespace kgeval {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json mean_std_json(const MeanStd& m) { return Json{{"mean", m.mean}, {"std", m.std}}; }

}  // namespace

Json to_json(const EvaluationReport& report, bool include_timing) {
  Json out = Json::object();
  for (const auto& s : report.strategies) {
    Json block;
    block["mrr"] = mean_std_json(s.mrr);
    block["hits1"] = mean_std_json(s.hits1);
    block["hits3"] = mean_std_json(s.hits3);
    block["hits10"] = mean_std_json(s.hits10);
    block["wall_time_s"] = include_timing ? number_or_null(s.wall_time_s) : Json(nullptr);
    block["speedup"] =
        include_timing && s.speedup ? number_or_null(*s.speedup) : Json(nullptr);
    if (s.vs_full) {
      block["mae_vs_full"] = number_or_null(s.vs_full->mae);
      block["mape_vs_full"] = number_or_null(s.vs_full->mape);
      block["pearson_vs_full"] = number_or_null(s.vs_full->pearson);
      block["kendall_vs_full"] = number_or_null(s.vs_full->kendall_tau);
    }
    block["runs"] = s.runs.size();
    block["n_queries"] = report.n_queries;
    block["n_s"] = s.strategy == SuiteStrategy::kFull ? Json(nullptr) : Json(report.n_s);
    block["split"] = std::string(to_string(report.split));
    out[std::string(to_string(s.strategy))] = std::move(block);
  }
  return out;
}

Json to_json(const EasyNegativeReport& report, const TripleStore& store) {
  Json false_negatives = Json::array();
  for (const auto& f : report.false_easy_negatives) {
    false_negatives.push_back({
        {"head", store.entities().label(f.triple.head)},
        {"relation", store.relations().label(f.triple.relation)},
        {"tail", store.entities().label(f.triple.tail)},
        {"slot", f.slot == Direction::kHead ? "domain" : "range"},
    });
  }
  return Json{
      {"easy_negatives", report.total},
      {"cells", report.cells},
      {"fraction", report.fraction},
      {"false_easy_negatives", report.false_easy_negatives.size()},
      {"per_column", report.per_column},
      {"false_easy_negative_triples", std::move(false_negatives)},
  };
}

Json to_json(const ComparisonReport& report) {
  return Json{
      {"mae", number_or_null(report.mae)},
      {"mape", number_or_null(report.mape)},
      {"mape_skipped", report.mape_skipped},
      {"pearson", number_or_null(report.pearson)},
      {"kendall_tau", number_or_null(report.kendall_tau)},
      {"speedup", number_or_null(report.speedup)},
  };
}

Json to_json(const SamplingLedger& ledger) {
  return Json{
      {"sampling_events", ledger.events},
      {"sampled_ids", ledger.sampled_ids},
      {"distinct_test_pairs", ledger.distinct_pairs},
      {"per_query_ids", ledger.per_query_ids},
      {"relational_ids", ledger.relational_ids},
      {"reduction", number_or_null(ledger.reduction)},
  };
}

Json to_json(const CrRrPoint& point) {
  return Json{
      {"mode", point.mode == RecallMode::kTest ? "test" : "unseen"},
      {"cr", number_or_null(point.cr)},
      {"rr", number_or_null(point.rr)},
      {"pairs", point.n_pairs},
  };
}

Json score_sidecar(const ScoreMatrix& x, double build_seconds) {
  return Json{
      {"method", std::string(to_string(x.method))},
      {"n_entities", x.n_entities()},
      {"n_relations", x.n_relations},
      {"n_columns", x.n_columns()},
      {"nnz", x.scores.nnz()},
      {"build_time_s", build_seconds},
  };
}

}  // namespace kgeval
