#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgeval/kg_store.hpp"

namespace kgeval {

/// Scores candidates for a query; higher is more plausible. For kTail the
/// anchor is the head and candidates fill the tail slot, for kHead the anchor
/// is the tail and candidates fill the head slot. Implementations must be
/// pure and safe to call concurrently.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual std::size_t num_entities() const = 0;
  virtual std::size_t num_relations() const = 0;

  virtual void score(EntityId anchor, RelationId relation, Direction direction,
                     std::span<const EntityId> candidates, std::span<double> out) const = 0;

  /// Scores every entity; out.size() must equal num_entities().
  virtual void score_all(EntityId anchor, RelationId relation, Direction direction,
                         std::span<double> out) const;

  std::vector<double> score(EntityId anchor, RelationId relation, Direction direction,
                            std::span<const EntityId> candidates) const;
};

enum class ModelKind { kTransE, kDistMult, kComplEx };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);

/// TransE -||h + r - t||, DistMult <h, r, t>, ComplEx Re<h, r, conj(t)>.
/// ComplEx rows hold d real parts followed by d imaginary parts.
class EmbeddingModel final : public Scorer {
 public:
  EmbeddingModel(ModelKind kind, std::size_t n_entities, std::size_t n_relations,
                 std::size_t dim);

  /// Xavier-uniform initialization keyed on `seed`.
  static EmbeddingModel random(ModelKind kind, std::size_t n_entities, std::size_t n_relations,
                               std::size_t dim, std::uint64_t seed);

  ModelKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  /// Reals per row: dim, or 2 * dim for ComplEx.
  std::size_t width() const noexcept { return width_; }
  std::size_t num_entities() const override { return n_entities_; }
  std::size_t num_relations() const override { return n_relations_; }

  std::span<const double> entity(EntityId e) const;
  std::span<double> entity(EntityId e);
  std::span<const double> relation(RelationId r) const;
  std::span<double> relation(RelationId r);
  std::span<const double> entity_data() const noexcept { return entities_; }
  std::span<const double> relation_data() const noexcept { return relations_; }

  double score_triple(EntityId head, RelationId relation, EntityId tail) const;

  void score(EntityId anchor, RelationId relation, Direction direction,
             std::span<const EntityId> candidates, std::span<double> out) const override;
  void score_all(EntityId anchor, RelationId relation, Direction direction,
                 std::span<double> out) const override;
  using Scorer::score;

  friend bool operator==(const EmbeddingModel& a, const EmbeddingModel& b);

 private:
  void check_ids(EntityId anchor, RelationId relation) const;
  /// Folds anchor and relation into a query vector so each candidate costs one pass.
  void query_vector(EntityId anchor, RelationId relation, Direction direction,
                    std::span<double> q) const;
  double candidate_score(std::span<const double> q, std::span<const double> c) const;

  ModelKind kind_;
  std::size_t n_entities_;
  std::size_t n_relations_;
  std::size_t dim_;
  std::size_t width_;
  std::vector<double> entities_;
  std::vector<double> relations_;
};

/// Uniform [0, 1) scores hashed from (seed, query, candidate). No ties in practice.
class RandomScorer final : public Scorer {
 public:
  RandomScorer(std::size_t n_entities, std::size_t n_relations, std::uint64_t seed)
      : n_entities_(n_entities), n_relations_(n_relations), seed_(seed) {}

  std::size_t num_entities() const override { return n_entities_; }
  std::size_t num_relations() const override { return n_relations_; }
  void score(EntityId anchor, RelationId relation, Direction direction,
             std::span<const EntityId> candidates, std::span<double> out) const override;
  using Scorer::score;

 private:
  std::size_t n_entities_;
  std::size_t n_relations_;
  std::uint64_t seed_;
};

/// Every candidate gets the same score.
class ConstantScorer final : public Scorer {
 public:
  ConstantScorer(std::size_t n_entities, std::size_t n_relations, double value = 0.0)
      : n_entities_(n_entities), n_relations_(n_relations), value_(value) {}

  std::size_t num_entities() const override { return n_entities_; }
  std::size_t num_relations() const override { return n_relations_; }
  void score(EntityId, RelationId, Direction, std::span<const EntityId>,
             std::span<double> out) const override;
  using Scorer::score;

 private:
  std::size_t n_entities_;
  std::size_t n_relations_;
  double value_;
};

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct TrainConfig {
  ModelKind kind = ModelKind::kDistMult;
  std::size_t dim = 32;
  std::size_t epochs = 50;
  double learning_rate = 0.1;
  std::size_t negatives = 8;
  double margin = 1.0;            // TransE only
  double l2 = 1e-4;               // per-occurrence squared-norm penalty
  std::size_t batch_size = 128;
  std::uint64_t seed = 0;
  /// Called after each epoch with the epoch number (1-based) and mean loss.
  std::function<void(std::size_t, double, const EmbeddingModel&)> on_epoch;
};

/// One positive triple with its corruptions.
struct TrainingExample {
  Triple positive;
  std::vector<Triple> negatives;
};

/// Sparse gradient over the rows one example touches.
struct Gradient {
  std::unordered_map<EntityId, std::vector<double>> entities;
  std::unordered_map<RelationId, std::vector<double>> relations;
};

/// Margin ranking loss (TransE) or logistic loss (DistMult, ComplEx) plus
/// the squared-norm penalty on every triple in the example.
double example_loss(const EmbeddingModel& model, const TrainingExample& example,
                    const TrainConfig& config);

/// Adds d(loss)/d(params) into `gradient` and returns the loss.
double accumulate_gradient(const EmbeddingModel& model, const TrainingExample& example,
                           const TrainConfig& config, Gradient& gradient);

/// Adagrad over mini-batches with uniform head/tail corruption. Deterministic
/// under config.seed. Throws NumericError on a non-finite loss.
EmbeddingModel train(const TripleStore& store, const TrainConfig& config);

// ---------------------------------------------------------------------------
// Embedding files
// ---------------------------------------------------------------------------

enum class EmbeddingFormat { kText, kBinary };

/// Text: `<count> <dim> <kind>` header, then one row of reals per id.
/// Binary: "KGEM", u32 version, u64 count, u64 dim, u32 kind, f64 rows.
void save_embeddings(const EmbeddingModel& model, const std::filesystem::path& entity_file,
                     const std::filesystem::path& relation_file, EmbeddingFormat format);

/// Format is detected per file. When `store` is given, row counts must match it.
EmbeddingModel load_embeddings(const std::filesystem::path& entity_file,
                               const std::filesystem::path& relation_file, ModelKind kind,
                               const TripleStore* store = nullptr);

}  // namespace kgeval
