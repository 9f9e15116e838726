#include "kgeval/scorers.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "kgeval/error.hpp"
#include "kgeval/io.hpp"
#include "kgeval/rng.hpp"

namespace kgeval {

void Scorer::score_all(EntityId anchor, RelationId relation, Direction direction,
                       std::span<double> out) const {
  std::vector<EntityId> all(num_entities());
  std::iota(all.begin(), all.end(), 0u);
  score(anchor, relation, direction, all, out);
}

std::vector<double> Scorer::score(EntityId anchor, RelationId relation, Direction direction,
                                  std::span<const EntityId> candidates) const {
  std::vector<double> out(candidates.size());
  score(anchor, relation, direction, candidates, out);
  return out;
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kTransE: return "transe";
    case ModelKind::kDistMult: return "distmult";
    case ModelKind::kComplEx: return "complex";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (auto kind : {ModelKind::kTransE, ModelKind::kDistMult, ModelKind::kComplEx}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

EmbeddingModel::EmbeddingModel(ModelKind kind, std::size_t n_entities, std::size_t n_relations,
                               std::size_t dim)
    : kind_(kind),
      n_entities_(n_entities),
      n_relations_(n_relations),
      dim_(dim),
      width_(kind == ModelKind::kComplEx ? 2 * dim : dim),
      entities_(n_entities * width_, 0.0),
      relations_(n_relations * width_, 0.0) {
  if (dim == 0) throw ConsistencyError("embedding dimension must be positive");
}

EmbeddingModel EmbeddingModel::random(ModelKind kind, std::size_t n_entities,
                                      std::size_t n_relations, std::size_t dim,
                                      std::uint64_t seed) {
  EmbeddingModel model(kind, n_entities, n_relations, dim);
  auto fill = [&](std::vector<double>& data, std::size_t rows, std::uint64_t stream) {
    const double bound =
        std::sqrt(6.0 / static_cast<double>(rows + model.width_));
    CounterRng rng(derive_key(seed, stream));
    for (double& v : data) v = (2.0 * rng.uniform() - 1.0) * bound;
  };
  fill(model.entities_, n_entities, 1);
  fill(model.relations_, n_relations, 2);
  return model;
}

std::span<const double> EmbeddingModel::entity(EntityId e) const {
  return std::span(entities_).subspan(static_cast<std::size_t>(e) * width_, width_);
}
std::span<double> EmbeddingModel::entity(EntityId e) {
  return std::span(entities_).subspan(static_cast<std::size_t>(e) * width_, width_);
}
std::span<const double> EmbeddingModel::relation(RelationId r) const {
  return std::span(relations_).subspan(static_cast<std::size_t>(r) * width_, width_);
}
std::span<double> EmbeddingModel::relation(RelationId r) {
  return std::span(relations_).subspan(static_cast<std::size_t>(r) * width_, width_);
}

bool operator==(const EmbeddingModel& a, const EmbeddingModel& b) {
  return a.kind_ == b.kind_ && a.dim_ == b.dim_ && a.n_entities_ == b.n_entities_ &&
         a.n_relations_ == b.n_relations_ && a.entities_ == b.entities_ &&
         a.relations_ == b.relations_;
}

void EmbeddingModel::check_ids(EntityId anchor, RelationId relation) const {
  if (anchor >= n_entities_ || relation >= n_relations_) {
    throw ConsistencyError("query (" + std::to_string(anchor) + ", " +
                           std::to_string(relation) + ") outside the model's " +
                           std::to_string(n_entities_) + " entities / " +
                           std::to_string(n_relations_) + " relations");
  }
}

double EmbeddingModel::score_triple(EntityId head, RelationId relation, EntityId tail) const {
  const EntityId one[] = {tail};
  double out = 0.0;
  score(head, relation, Direction::kTail, one, std::span(&out, 1));
  return out;
}

void EmbeddingModel::query_vector(EntityId anchor, RelationId relation, Direction direction,
                                  std::span<double> q) const {
  const auto a = entity(anchor);
  const auto r = this->relation(relation);
  const std::size_t d = dim_;
  switch (kind_) {
    case ModelKind::kTransE:
      // tail: -||(h + r) - c||, head: -||c - (t - r)||
      for (std::size_t k = 0; k < d; ++k) {
        q[k] = direction == Direction::kTail ? a[k] + r[k] : a[k] - r[k];
      }
      break;
    case ModelKind::kDistMult:
      for (std::size_t k = 0; k < d; ++k) q[k] = a[k] * r[k];
      break;
    case ModelKind::kComplEx:
      for (std::size_t k = 0; k < d; ++k) {
        const double ar = a[k], ai = a[d + k], rr = r[k], ri = r[d + k];
        if (direction == Direction::kTail) {
          // Re(h r conj(c)) = Re(hr) cr + Im(hr) ci
          q[k] = ar * rr - ai * ri;
          q[d + k] = ar * ri + ai * rr;
        } else {
          // Re(c r conj(t)) = cr Re(r conj t) - ci Im(r conj t)
          q[k] = rr * ar + ri * ai;
          q[d + k] = -(ri * ar - rr * ai);
        }
      }
      break;
  }
}

double EmbeddingModel::candidate_score(std::span<const double> q,
                                       std::span<const double> c) const {
  double acc = 0.0;
  if (kind_ == ModelKind::kTransE) {
    for (std::size_t k = 0; k < width_; ++k) {
      const double diff = q[k] - c[k];
      acc += diff * diff;
    }
    return -std::sqrt(acc);
  }
  for (std::size_t k = 0; k < width_; ++k) acc += q[k] * c[k];
  return acc;
}

void EmbeddingModel::score(EntityId anchor, RelationId relation, Direction direction,
                           std::span<const EntityId> candidates, std::span<double> out) const {
  check_ids(anchor, relation);
  if (out.size() != candidates.size()) {
    throw ConsistencyError("score output size does not match candidate count");
  }
  std::vector<double> q(width_);
  query_vector(anchor, relation, direction, q);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i] >= n_entities_) {
      throw ConsistencyError("candidate " + std::to_string(candidates[i]) + " out of range");
    }
    out[i] = candidate_score(q, entity(candidates[i]));
  }
}

void EmbeddingModel::score_all(EntityId anchor, RelationId relation, Direction direction,
                               std::span<double> out) const {
  check_ids(anchor, relation);
  if (out.size() != n_entities_) {
    throw ConsistencyError("score_all output must hold one score per entity");
  }
  std::vector<double> q(width_);
  query_vector(anchor, relation, direction, q);
  for (EntityId e = 0; e < n_entities_; ++e) out[e] = candidate_score(q, entity(e));
}

void RandomScorer::score(EntityId anchor, RelationId relation, Direction direction,
                         std::span<const EntityId> candidates, std::span<double> out) const {
  const std::uint64_t query =
      derive_key(seed_, (static_cast<std::uint64_t>(anchor) << 32) | relation,
                 direction == Direction::kHead ? 1 : 2);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out[i] = static_cast<double>(mix64(query ^ mix64(candidates[i] + 1)) >> 11) * 0x1.0p-53;
  }
}

void ConstantScorer::score(EntityId, RelationId, Direction, std::span<const EntityId>,
                           std::span<double> out) const {
  std::fill(out.begin(), out.end(), value_);
}

// ---------------------------------------------------------------------------
// Embedding files
// ---------------------------------------------------------------------------

namespace {

constexpr char kEmbeddingMagic[4] = {'K', 'G', 'E', 'M'};
constexpr std::uint32_t kEmbeddingVersion = 1;

struct Table {
  std::size_t count = 0;
  std::size_t dim = 0;
  ModelKind kind = ModelKind::kDistMult;
  std::vector<double> values;
};

std::size_t row_width(ModelKind kind, std::size_t dim) {
  return kind == ModelKind::kComplEx ? 2 * dim : dim;
}

void write_table(const std::filesystem::path& path, ModelKind kind, std::size_t count,
                 std::size_t dim, std::span<const double> values, EmbeddingFormat format) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const std::size_t width = row_width(kind, dim);
  if (format == EmbeddingFormat::kBinary) {
    const std::uint64_t c = count, d = dim;
    const auto k = static_cast<std::uint32_t>(kind);
    out.write(kEmbeddingMagic, 4);
    out.write(reinterpret_cast<const char*>(&kEmbeddingVersion), 4);
    out.write(reinterpret_cast<const char*>(&c), 8);
    out.write(reinterpret_cast<const char*>(&d), 8);
    out.write(reinterpret_cast<const char*>(&k), 4);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size_bytes()));
  } else {
    std::ostringstream text;
    text.precision(17);
    text << count << ' ' << dim << ' ' << to_string(kind) << '\n';
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t k = 0; k < width; ++k) {
        if (k) text << ' ';
        text << values[i * width + k];
      }
      text << '\n';
    }
    const std::string s = text.str();
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  if (!out) throw IoError("write failed for " + path.string());
}

Table read_table(const std::filesystem::path& path) {
  const std::string data = io::read_text(path);
  Table table;
  if (data.size() >= 4 && std::memcmp(data.data(), kEmbeddingMagic, 4) == 0) {
    constexpr std::size_t kHeader = 4 + 4 + 8 + 8 + 4;
    if (data.size() < kHeader) throw ParseError(path.string() + ": truncated header");
    std::uint32_t version = 0, kind = 0;
    std::uint64_t count = 0, dim = 0;
    std::memcpy(&version, data.data() + 4, 4);
    std::memcpy(&count, data.data() + 8, 8);
    std::memcpy(&dim, data.data() + 16, 8);
    std::memcpy(&kind, data.data() + 24, 4);
    if (version != kEmbeddingVersion) throw ParseError(path.string() + ": unsupported version");
    if (kind > 2) throw ParseError(path.string() + ": unknown model kind");
    table.count = count;
    table.dim = dim;
    table.kind = static_cast<ModelKind>(kind);
    const std::size_t n = count * row_width(table.kind, dim);
    if (data.size() != kHeader + n * sizeof(double)) {
      throw ParseError(path.string() + ": payload size does not match header");
    }
    table.values.resize(n);
    std::memcpy(table.values.data(), data.data() + kHeader, n * sizeof(double));
    return table;
  }

  std::istringstream in(data);
  std::string kind_name;
  if (!(in >> table.count >> table.dim >> kind_name)) {
    throw ParseError(path.string() + ": expected header '<count> <dim> <kind>'");
  }
  const auto kind = parse_model_kind(kind_name);
  if (!kind) throw ParseError(path.string() + ": unknown model kind '" + kind_name + "'");
  table.kind = *kind;
  const std::size_t n = table.count * row_width(table.kind, table.dim);
  table.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> table.values[i])) {
      throw ParseError(path.string() + ": expected " + std::to_string(n) + " values, got " +
                       std::to_string(i));
    }
  }
  std::string extra;
  if (in >> extra) throw ParseError(path.string() + ": trailing data after last row");
  return table;
}

}  // namespace

void save_embeddings(const EmbeddingModel& model, const std::filesystem::path& entity_file,
                     const std::filesystem::path& relation_file, EmbeddingFormat format) {
  write_table(entity_file, model.kind(), model.num_entities(), model.dim(), model.entity_data(),
              format);
  write_table(relation_file, model.kind(), model.num_relations(), model.dim(),
              model.relation_data(), format);
}

EmbeddingModel load_embeddings(const std::filesystem::path& entity_file,
                               const std::filesystem::path& relation_file, ModelKind kind,
                               const TripleStore* store) {
  const Table ent = read_table(entity_file);
  const Table rel = read_table(relation_file);
  if (ent.kind != kind || rel.kind != kind) {
    throw ConsistencyError("embedding files hold " + std::string(to_string(ent.kind)) + "/" +
                           std::string(to_string(rel.kind)) + ", expected " +
                           std::string(to_string(kind)));
  }
  if (ent.dim != rel.dim) {
    throw ConsistencyError("entity dim " + std::to_string(ent.dim) + " != relation dim " +
                           std::to_string(rel.dim));
  }
  if (store != nullptr) {
    if (ent.count != store->num_entities()) {
      throw ConsistencyError(entity_file.string() + " has " + std::to_string(ent.count) +
                             " rows, store has " + std::to_string(store->num_entities()) +
                             " entities");
    }
    if (rel.count != store->num_relations()) {
      throw ConsistencyError(relation_file.string() + " has " + std::to_string(rel.count) +
                             " rows, store has " + std::to_string(store->num_relations()) +
                             " relations");
    }
  }
  EmbeddingModel model(kind, ent.count, rel.count, ent.dim);
  if (ent.count > 0) std::copy(ent.values.begin(), ent.values.end(), model.entity(0).data());
  if (rel.count > 0) std::copy(rel.values.begin(), rel.values.end(), model.relation(0).data());
  for (double v : ent.values) {
    if (!std::isfinite(v)) throw NumericError(entity_file.string() + ": non-finite value");
  }
  for (double v : rel.values) {
    if (!std::isfinite(v)) throw NumericError(relation_file.string() + ": non-finite value");
  }
  return model;
}

}  // namespace kgeval
