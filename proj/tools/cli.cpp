#include "cli.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "kgeval/candidate_sets.hpp"
#include "kgeval/error.hpp"
#include "kgeval/evaluation.hpp"
#include "kgeval/io.hpp"
#include "kgeval/kg_store.hpp"
#include "kgeval/recommenders.hpp"
#include "kgeval/report.hpp"
#include "kgeval/sampling.hpp"
#include "kgeval/scorers.hpp"
#include "kgeval/sparse_matrix.hpp"
#include "kgeval/synthkg.hpp"
#include "kgeval/theory.hpp"

namespace kgeval::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Common {
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  std::string output;
  bool no_timing = false;
  bool verbose = false;

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("KGEVAL_SEED")) {
      try {
        return std::stoull(env);
      } catch (const std::exception&) {
        throw UsageError(std::string("KGEVAL_SEED is not an integer: ") + env);
      }
    }
    return 0;
  }
};

void add_common(CLI::App* sub, Common& c, const std::string& output_help) {
  sub->add_option("--seed", c.seed, "Master seed (fallback: KGEVAL_SEED, then 0)");
  sub->add_option("--threads", c.threads, "Worker threads; 0 uses every core");
  sub->add_option("--output,-o", c.output, output_help);
  sub->add_flag("--no-timing", c.no_timing, "Write timing fields as null");
  sub->add_flag("--verbose,-v", c.verbose, "Debug logging on stderr");
}

struct DataOptions {
  std::string dir = "kgdata";
  std::string types;
  std::string filter = "all";
};

void add_data(CLI::App* sub, DataOptions& d, bool with_types) {
  sub->add_option("--data,-d", d.dir, "Dataset directory holding train/valid/test TSV files")
      ->capture_default_str();
  if (with_types) {
    sub->add_option("--types", d.types, "Entity type TSV (default: <data>/types.tsv if present)");
  }
  sub->add_option("--filter", d.filter, "Known positives for filtering: all | train-valid")
      ->check(CLI::IsMember({"all", "train-valid"}))
      ->capture_default_str();
}

std::optional<fs::path> find_split_file(const fs::path& dir, const std::string& name) {
  for (const char* suffix : {".tsv", ".tsv.gz", ".txt", ".txt.gz"}) {
    fs::path p = dir / (name + suffix);
    if (fs::exists(p)) return p;
  }
  return std::nullopt;
}

TripleStore load_store(const DataOptions& d) {
  const fs::path dir(d.dir);
  const auto train = find_split_file(dir, "train");
  if (!train) {
    throw IoError("missing dataset file " + (dir / "train.tsv").string() +
                  " (run `kgeval synth` or point --data at a dataset)");
  }
  auto read_optional = [&](const std::string& name) {
    const auto p = find_split_file(dir, name);
    return p ? io::read_text(*p) : std::string();
  };
  StoreOptions options;
  options.filter_scope = d.filter == "all" ? FilterScope::kAllSplits : FilterScope::kTrainValid;
  return parse_triples(io::read_text(*train), read_optional("valid"), read_optional("test"),
                       options);
}

std::optional<TypeAssignment> load_types_for(const TripleStore& store, const DataOptions& d) {
  fs::path p = d.types.empty() ? fs::path(d.dir) / "types.tsv" : fs::path(d.types);
  if (!fs::exists(p)) {
    if (!d.types.empty()) throw IoError("missing type file " + p.string());
    return std::nullopt;
  }
  return load_types(io::read_text(p), store);
}

void emit(const Common& c, std::ostream& out, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    out << text;
  } else {
    io::write_text(c.output, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Method parse_method_or_throw(const std::string& name) {
  const auto m = parse_method(name);
  if (!m) throw UsageError("unknown recommender method '" + name + "'");
  return *m;
}

ScoreMatrix build_scores(const TripleStore& store, const DataOptions& data,
                         const std::string& method_name, const std::string& credit,
                         std::size_t threads) {
  const Method method = parse_method_or_throw(method_name);
  std::optional<TypeAssignment> types;
  if (requires_types(method)) {
    types = load_types_for(store, data);
    if (!types) {
      throw IoError("method " + method_name + " needs entity types: missing " +
                    (fs::path(data.dir) / "types.tsv").string() + " (or pass --types)");
    }
  }
  RecommendOptions options;
  options.threads = threads;
  options.type_credit =
      credit == "occurrence" ? TypeCredit::kOccurrence : TypeCredit::kDistinctEntity;
  return recommend(method, store, types ? &*types : nullptr, options);
}

CLI::Validator method_check() {
  return CLI::Validator(
      [](std::string& name) -> std::string {
        return parse_method(name) ? "" : "unknown recommender method '" + name + "'";
      },
      "METHOD");
}

std::vector<double> read_series(const fs::path& path) {
  std::vector<double> values;
  const std::string text = io::read_text(path);
  const auto lines = io::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty() || line.front() == '#') continue;
    // Accept CSV rows by taking the last field.
    if (auto comma = line.rfind(','); comma != std::string_view::npos) line = line.substr(comma + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(std::string(line), &used);
      values.push_back(v);
    } catch (const std::exception&) {
      if (values.empty() && i == 0) continue;  // header row
      throw ParseError(path.string() + " line " + std::to_string(i + 1) + ": not a number");
    }
  }
  return values;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"kgeval: fast knowledge-graph completion evaluation with relation recommenders",
               "kgeval"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  Common common;
  DataOptions data;

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse a dataset and print statistics");
  add_common(ingest, common, "Write the statistics JSON here instead of stdout");
  add_data(ingest, data, true);

  // synth
  std::string preset = "small";
  SynthConfig synth_overrides;
  std::optional<std::size_t> n_types, per_type, n_relations, per_relation, clusters, active;
  std::optional<double> noise, test_fraction, valid_fraction;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic typed knowledge graph");
  add_common(synth, common, "Output directory (default: kgdata)");
  synth->add_option("--preset", preset, "small | large")->check(CLI::IsMember({"small", "large"}))
      ->capture_default_str();
  synth->add_option("--n-types", n_types, "Number of entity types");
  synth->add_option("--entities-per-type", per_type, "Entities per type");
  synth->add_option("--relations", n_relations, "Number of relations");
  synth->add_option("--triples-per-relation", per_relation, "Triples per relation");
  synth->add_option("--clusters", clusters, "Latent clusters per type");
  synth->add_option("--active-clusters", active, "Head clusters per relation (0 = all)");
  synth->add_option("--noise", noise, "Fraction of signature-violating triples");
  synth->add_option("--test-fraction", test_fraction, "Test share per relation");
  synth->add_option("--valid-fraction", valid_fraction, "Validation share per relation");

  // recommend
  std::string method = "lwd";
  std::string credit = "distinct";
  auto* recommend_cmd = app.add_subcommand("recommend", "Build a relation-recommender score matrix");
  add_common(recommend_cmd, common, "Output prefix (default: <data>/scores_<method>)");
  add_data(recommend_cmd, data, true);
  recommend_cmd->add_option("--method", method, "lwd | lwd-t | pt | dbh | dbh-t | ontosim")
      ->check(method_check())
      ->capture_default_str();
  recommend_cmd->add_option("--type-credit", credit, "DBH-T credit: distinct | occurrence")
      ->check(CLI::IsMember({"distinct", "occurrence"}))
      ->capture_default_str();

  // easy-negatives
  auto* easy = app.add_subcommand("easy-negatives", "Mine zero-score cells and report false ones");
  add_common(easy, common, "Write the report JSON here instead of stdout");
  add_data(easy, data, true);
  easy->add_option("--method", method, "Recommender method")
      ->check(method_check())->capture_default_str();

  // thresholds
  auto* thresholds = app.add_subcommand("thresholds", "Optimize per-column thresholds; CR/RR table");
  add_common(thresholds, common, "Write the table JSON here instead of stdout");
  add_data(thresholds, data, true);
  thresholds->add_option("--method", method, "Recommender method")
      ->check(method_check())->capture_default_str();
  thresholds->add_option("--type-credit", credit, "DBH-T credit: distinct | occurrence")
      ->check(CLI::IsMember({"distinct", "occurrence"}));

  // train
  TrainConfig train_config;
  std::string model_name = "distmult";
  std::string format = "text";
  auto* train_cmd = app.add_subcommand("train", "Train a TransE / DistMult / ComplEx model");
  add_common(train_cmd, common, "Model directory (default: <data>/model)");
  add_data(train_cmd, data, false);
  train_cmd->add_option("--model", model_name, "transe | distmult | complex")
      ->check(CLI::IsMember({"transe", "distmult", "complex"}))
      ->capture_default_str();
  train_cmd->add_option("--dim", train_config.dim, "Embedding dimension")->capture_default_str();
  train_cmd->add_option("--epochs", train_config.epochs, "Epochs")->capture_default_str();
  train_cmd->add_option("--lr", train_config.learning_rate, "Adagrad learning rate")
      ->capture_default_str();
  train_cmd->add_option("--negatives", train_config.negatives, "Negatives per positive")
      ->capture_default_str();
  train_cmd->add_option("--margin", train_config.margin, "TransE margin")->capture_default_str();
  train_cmd->add_option("--l2", train_config.l2, "Squared-norm penalty")->capture_default_str();
  train_cmd->add_option("--batch-size", train_config.batch_size, "Mini-batch size")
      ->capture_default_str();
  train_cmd->add_option("--format", format, "text | binary")
      ->check(CLI::IsMember({"text", "binary"}))
      ->capture_default_str();

  // eval
  std::string model_dir;
  std::string scorer_name = "model";
  std::string strategies_arg = "full,random,static,probabilistic";
  std::optional<double> fraction;
  std::optional<std::size_t> ns;
  std::size_t n_seeds = 1;
  std::string split_name = "test";
  bool no_seen = false;
  std::string ranks_csv, ledger_path;
  auto* eval = app.add_subcommand("eval", "Full and sampled filtered ranking evaluation");
  add_common(eval, common, "Write the report JSON here instead of stdout");
  add_data(eval, data, true);
  eval->add_option("--model-dir", model_dir, "Trained model directory (default: <data>/model)");
  eval->add_option("--scorer", scorer_name, "model | random")
      ->check(CLI::IsMember({"model", "random"}))
      ->capture_default_str();
  eval->add_option("--strategies", strategies_arg, "Comma list of full,random,static,prob")
      ->capture_default_str();
  auto* fraction_opt = eval->add_option("--fraction", fraction, "Sample fraction of |E| (default 0.1)");
  eval->add_option("--ns", ns, "Absolute sample size")->excludes(fraction_opt);
  eval->add_option("--seeds", n_seeds, "Number of sampling seeds")->capture_default_str();
  eval->add_option("--method", method, "Recommender for static/probabilistic sampling")
      ->check(method_check())
      ->capture_default_str();
  eval->add_option("--split", split_name, "test | valid")
      ->check(CLI::IsMember({"test", "valid"}))
      ->capture_default_str();
  eval->add_flag("--no-seen", no_seen, "Do not union train-seen entities into static sets");
  eval->add_option("--ranks-csv", ranks_csv, "Write per-query ranks of the first run per strategy");
  eval->add_option("--ledger", ledger_path, "Write the sampling ledger JSON");

  // theory
  RankingScenario scenario;
  std::size_t trials = 100000;
  auto* theory = app.add_subcommand("theory", "Closed-form and Monte-Carlo rank-gain check");
  add_common(theory, common, "Write the row JSON here instead of stdout");
  theory->add_option("--n-entities", scenario.n_entities, "|E|")->required();
  theory->add_option("--n-above", scenario.n_above, "Entities outranking the answer")->required();
  theory->add_option("--range", scenario.range_size, "Range size")->required();
  theory->add_option("--ns", scenario.n_s, "Sample size")->required();
  theory->add_option("--trials", trials, "Monte-Carlo trials")->capture_default_str();

  // compare
  std::string estimates_path, truth_path;
  std::optional<double> full_time, estimator_time;
  auto* compare_cmd = app.add_subcommand("compare", "Compare an estimated metric series with the truth");
  add_common(compare_cmd, common, "Write the report JSON here instead of stdout");
  compare_cmd->add_option("--estimates", estimates_path, "One value per line")->required();
  compare_cmd->add_option("--truth", truth_path, "One value per line")->required();
  compare_cmd->add_option("--full-time", full_time, "Full evaluation seconds");
  compare_cmd->add_option("--estimator-time", estimator_time, "Estimator seconds");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::kUsage);
  }

  if (common.verbose) spdlog::set_level(spdlog::level::debug);

  try {
    const std::size_t threads = common.threads;

    if (ingest->parsed()) {
      const TripleStore store = load_store(data);
      const auto types = load_types_for(store, data);
      Json stats{
          {"entities", store.num_entities()},
          {"relations", store.num_relations()},
          {"train", store.train().size()},
          {"valid", store.valid().size()},
          {"test", store.test().size()},
          {"distinct_test_pairs", distinct_test_pairs(store)},
          {"types", types ? Json(types->num_types()) : Json(nullptr)},
      };
      emit(common, out, dump(stats));
      return 0;
    }

    if (synth->parsed()) {
      SynthConfig config = *synth_preset(preset);
      if (n_types) config.n_types = *n_types;
      if (per_type) config.entities_per_type = *per_type;
      if (n_relations) config.n_relations = *n_relations;
      if (per_relation) config.triples_per_relation = *per_relation;
      if (clusters) config.clusters_per_type = *clusters;
      if (active) config.active_clusters = *active;
      if (noise) config.noise_fraction = *noise;
      if (test_fraction) config.test_fraction = *test_fraction;
      if (valid_fraction) config.valid_fraction = *valid_fraction;
      config.seed = common.resolved_seed();
      const SynthKg kg = generate(config);
      const fs::path dir = common.output.empty() ? fs::path("kgdata") : fs::path(common.output);
      io::write_text(dir / "train.tsv", kg.train_tsv);
      io::write_text(dir / "valid.tsv", kg.valid_tsv);
      io::write_text(dir / "test.tsv", kg.test_tsv);
      io::write_text(dir / "types.tsv", kg.types_tsv);
      Json signatures = Json::array();
      for (const auto& [h, t] : kg.signatures) signatures.push_back({h, t});
      Json summary{
          {"preset", preset},
          {"seed", config.seed},
          {"n_types", config.n_types},
          {"entities_per_type", config.entities_per_type},
          {"relations", config.n_relations},
          {"triples_per_relation", config.triples_per_relation},
          {"clusters_per_type", config.clusters_per_type},
          {"active_clusters", config.active_clusters},
          {"noise_fraction", config.noise_fraction},
          {"test_fraction", config.test_fraction},
          {"valid_fraction", config.valid_fraction},
          {"signatures", signatures},
          {"entities", kg.store.num_entities()},
          {"train", kg.store.train().size()},
          {"valid", kg.store.valid().size()},
          {"test", kg.store.test().size()},
      };
      io::write_text(dir / "synth.json", dump(summary));
      out << dump(summary);
      return 0;
    }

    if (recommend_cmd->parsed()) {
      const TripleStore store = load_store(data);
      const auto start = Clock::now();
      const ScoreMatrix x = build_scores(store, data, method, credit, threads);
      const double elapsed = seconds_since(start);
      const std::string prefix = common.output.empty()
                                     ? (fs::path(data.dir) / ("scores_" + method)).string()
                                     : common.output;
      save(prefix + ".kgsm", x.scores);
      Json sidecar = score_sidecar(x, elapsed);
      if (common.no_timing) sidecar["build_time_s"] = nullptr;
      io::write_text(prefix + ".json", dump(sidecar));
      out << dump(sidecar);
      return 0;
    }

    if (easy->parsed()) {
      const TripleStore store = load_store(data);
      const ScoreMatrix x = build_scores(store, data, method, credit, threads);
      Json report = to_json(mine_easy_negatives(x, store), store);
      report["method"] = std::string(to_string(x.method));
      emit(common, out, dump(report));
      return 0;
    }

    if (thresholds->parsed()) {
      const TripleStore store = load_store(data);
      const ScoreMatrix x = build_scores(store, data, method, credit, threads);
      const auto cuts = optimize_thresholds(x, default_threshold_positives(store));
      const CandidateSets narrow = materialize(x, cuts, store, false);
      const CandidateSets with_seen = materialize(x, cuts, store, true);
      const std::size_t n_rel = store.num_relations();
      Json columns = Json::array();
      for (std::size_t j = 0; j < cuts.size(); ++j) {
        columns.push_back({
            {"column", j},
            {"relation", store.relations().label(static_cast<RelationId>(j % n_rel))},
            {"slot", j < n_rel ? "domain" : "range"},
            {"threshold", cuts[j] == kEmptySetThreshold ? Json(nullptr) : Json(cuts[j])},
            {"set_size", narrow.sets[j].size()},
            {"set_size_with_seen", with_seen.sets[j].size()},
        });
      }
      auto summary = [&](const CandidateSets& sets) {
        return Json{{"test", to_json(candidate_recall(sets, store, RecallMode::kTest))},
                    {"unseen", to_json(candidate_recall(sets, store, RecallMode::kUnseen))},
                    {"rr", reduction_rate(sets)}};
      };
      Json table{
          {"method", std::string(to_string(x.method))},
          {"positives_split", store.valid().empty() ? "train" : "valid"},
          {"without_seen", summary(narrow)},
          {"with_seen", summary(with_seen)},
          {"columns", columns},
      };
      emit(common, out, dump(table));
      return 0;
    }

    if (train_cmd->parsed()) {
      const TripleStore store = load_store(data);
      train_config.kind = *parse_model_kind(model_name);
      train_config.seed = common.resolved_seed();
      double final_loss = 0.0;
      train_config.on_epoch = [&](std::size_t epoch, double loss, const EmbeddingModel&) {
        final_loss = loss;
        spdlog::info("epoch {} loss {:.6f}", epoch, loss);
      };
      const auto start = Clock::now();
      const EmbeddingModel model = train(store, train_config);
      const double elapsed = seconds_since(start);
      const fs::path dir =
          common.output.empty() ? fs::path(data.dir) / "model" : fs::path(common.output);
      save_embeddings(model, dir / "entities.emb", dir / "relations.emb",
                      format == "binary" ? EmbeddingFormat::kBinary : EmbeddingFormat::kText);
      Json meta{
          {"model", model_name},
          {"dim", model.dim()},
          {"epochs", train_config.epochs},
          {"seed", train_config.seed},
          {"format", format},
          {"final_loss", final_loss},
          {"train_time_s", common.no_timing ? Json(nullptr) : Json(elapsed)},
      };
      io::write_text(dir / "model.json", dump(meta));
      out << dump(meta);
      return 0;
    }

    if (eval->parsed()) {
      const TripleStore store = load_store(data);
      SuiteConfig config;
      for (std::string_view name : io::split(strategies_arg, ',')) {
        const auto s = parse_suite_strategy(name);
        if (!s) throw UsageError("unknown strategy '" + std::string(name) + "'");
        if (std::find(config.strategies.begin(), config.strategies.end(), *s) ==
            config.strategies.end()) {
          config.strategies.push_back(*s);
        }
      }
      if (ns) {
        config.sample_size = SampleSize::absolute(*ns);
      } else {
        config.sample_size = SampleSize::fraction(fraction.value_or(0.1));
      }
      if (n_seeds == 0) throw UsageError("--seeds must be at least 1");
      config.seeds.clear();
      const std::uint64_t base_seed = common.resolved_seed();
      for (std::size_t i = 0; i < n_seeds; ++i) config.seeds.push_back(base_seed + i);
      config.eval.threads = threads;
      config.eval.split = split_name == "valid" ? Split::kValid : Split::kTest;

      std::unique_ptr<Scorer> scorer;
      if (scorer_name == "random") {
        scorer = std::make_unique<RandomScorer>(store.num_entities(), store.num_relations(),
                                                base_seed);
      } else {
        const fs::path dir = model_dir.empty() ? fs::path(data.dir) / "model" : fs::path(model_dir);
        const fs::path meta_path = dir / "model.json";
        if (!fs::exists(meta_path)) {
          throw IoError("missing trained model " + meta_path.string() +
                        " (run `kgeval train` first, or pass --scorer random)");
        }
        const Json meta = Json::parse(io::read_text(meta_path));
        const auto kind = parse_model_kind(meta.at("model").get<std::string>());
        if (!kind) throw ParseError(meta_path.string() + ": unknown model kind");
        scorer = std::make_unique<EmbeddingModel>(
            load_embeddings(dir / "entities.emb", dir / "relations.emb", *kind, &store));
      }

      auto uses = [&](SuiteStrategy s) {
        return std::find(config.strategies.begin(), config.strategies.end(), s) !=
               config.strategies.end();
      };
      std::optional<ScoreMatrix> x;
      std::optional<CandidateSets> sets;
      if (uses(SuiteStrategy::kStatic) || uses(SuiteStrategy::kProbabilistic)) {
        x = build_scores(store, data, method, credit, threads);
        config.recommender = &*x;
        if (uses(SuiteStrategy::kStatic)) {
          sets = optimized_candidate_sets(*x, store, !no_seen);
          config.candidates = &*sets;
        }
      }
      const EvaluationReport report = evaluate_suite(*scorer, store, config);
      emit(common, out, dump(to_json(report, !common.no_timing)));

      if (!ranks_csv.empty()) {
        std::string csv;
        for (const auto& s : report.strategies) {
          const std::string block = records_to_csv(s.records, store);
          if (csv.empty()) {
            csv = "strategy," + block.substr(0, block.find('\n') + 1);
          }
          std::istringstream lines(block.substr(block.find('\n') + 1));
          for (std::string line; std::getline(lines, line);) {
            csv += std::string(to_string(s.strategy)) + "," + line + "\n";
          }
        }
        io::write_text(ranks_csv, csv);
      }
      if (!ledger_path.empty()) {
        const auto plan = sample_uniform(store.num_entities(), store.num_relations(), report.n_s,
                                         base_seed);
        io::write_text(ledger_path, dump(to_json(sampling_ledger(plan, store))));
      }
      return 0;
    }

    if (theory->parsed()) {
      const double closed = expected_gain(scenario);
      const MonteCarloGain mc = monte_carlo_gain(scenario, trials, common.resolved_seed(), threads);
      const bool agrees = std::abs(mc.mean_gain - closed) <= 4.0 * mc.std_error ||
                          mc.mean_gain == closed;
      Json row{
          {"n_entities", scenario.n_entities},
          {"n_above", scenario.n_above},
          {"range", scenario.range_size},
          {"n_s", scenario.n_s},
          {"expected_demotions_uniform", expected_demotions_uniform(scenario)},
          {"expected_demotions_range", expected_demotions_range(scenario)},
          {"expected_gain", closed},
          {"monte_carlo",
           {{"mean_gain", mc.mean_gain},
            {"std_error", mc.std_error},
            {"half_width_95", mc.half_width},
            {"trials", mc.trials}}},
          {"agrees_within_4_sigma", agrees},
      };
      emit(common, out, dump(row));
      return 0;
    }

    if (compare_cmd->parsed()) {
      const auto estimates = read_series(estimates_path);
      const auto truth = read_series(truth_path);
      emit(common, out, dump(to_json(compare(estimates, truth, full_time, estimator_time))));
      return 0;
    }
  } catch (const Error& e) {
    err << "kgeval: error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const Json::exception& e) {
    err << "kgeval: error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::kParse);
  } catch (const fs::filesystem_error& e) {
    err << "kgeval: error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::kIo);
  }
  err << app.help();
  return static_cast<int>(ErrorKind::kUsage);
}

}  // namespace kgeval::cli
