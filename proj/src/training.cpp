#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kgeval/error.hpp"
#include "kgeval/rng.hpp"
#include "kgeval/scorers.hpp"

namespace kgeval {

namespace {

constexpr double kNormFloor = 1e-12;

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }
double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double squared_norm(std::span<const double> v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

/// TransE distance ||h + r - t||.
double transe_distance(const EmbeddingModel& m, const Triple& t) {
  const auto h = m.entity(t.head), r = m.relation(t.relation), tl = m.entity(t.tail);
  double acc = 0.0;
  for (std::size_t k = 0; k < m.width(); ++k) {
    const double v = h[k] + r[k] - tl[k];
    acc += v * v;
  }
  return std::sqrt(acc);
}

double regularizer(const EmbeddingModel& m, const Triple& t) {
  return squared_norm(m.entity(t.head)) + squared_norm(m.relation(t.relation)) +
         squared_norm(m.entity(t.tail));
}

std::vector<double>& slot(std::unordered_map<std::uint32_t, std::vector<double>>& rows,
                          std::uint32_t id, std::size_t width) {
  auto& row = rows[id];
  if (row.empty()) row.assign(width, 0.0);
  return row;
}

/// Adds scale * d(score)/d(params) of one triple; TransE uses the distance.
void add_triple_gradient(const EmbeddingModel& m, const Triple& t, double scale,
                         Gradient& g) {
  const std::size_t w = m.width();
  const auto h = m.entity(t.head), r = m.relation(t.relation), tl = m.entity(t.tail);
  // Map nodes are stable, so the references survive later insertions.
  auto& gh = slot(g.entities, t.head, w);
  auto& gr = slot(g.relations, t.relation, w);
  auto& gt = slot(g.entities, t.tail, w);
  switch (m.kind()) {
    case ModelKind::kTransE: {
      const double dist = std::max(transe_distance(m, t), kNormFloor);
      for (std::size_t k = 0; k < w; ++k) {
        const double u = scale * (h[k] + r[k] - tl[k]) / dist;
        gh[k] += u;
        gr[k] += u;
        gt[k] -= u;
      }
      break;
    }
    case ModelKind::kDistMult:
      for (std::size_t k = 0; k < w; ++k) {
        gh[k] += scale * r[k] * tl[k];
        gr[k] += scale * h[k] * tl[k];
        gt[k] += scale * h[k] * r[k];
      }
      break;
    case ModelKind::kComplEx: {
      const std::size_t d = m.dim();
      for (std::size_t k = 0; k < d; ++k) {
        const double hr = h[k], hi = h[d + k], rr = r[k], ri = r[d + k], tr = tl[k],
                     ti = tl[d + k];
        gh[k] += scale * (rr * tr + ri * ti);
        gh[d + k] += scale * (rr * ti - ri * tr);
        gr[k] += scale * (hr * tr + hi * ti);
        gr[d + k] += scale * (hr * ti - hi * tr);
        gt[k] += scale * (hr * rr - hi * ri);
        gt[d + k] += scale * (hi * rr + hr * ri);
      }
      break;
    }
  }
}

void add_regularizer_gradient(const EmbeddingModel& m, const Triple& t, double l2,
                              Gradient& g) {
  if (l2 == 0.0) return;
  const std::size_t w = m.width();
  auto add = [&](auto& rows, std::uint32_t id, std::span<const double> v) {
    auto& row = slot(rows, id, w);
    for (std::size_t k = 0; k < w; ++k) row[k] += 2.0 * l2 * v[k];
  };
  add(g.entities, t.head, m.entity(t.head));
  add(g.relations, t.relation, m.relation(t.relation));
  add(g.entities, t.tail, m.entity(t.tail));
}

}  // namespace

double example_loss(const EmbeddingModel& model, const TrainingExample& example,
                    const TrainConfig& config) {
  double loss = 0.0;
  if (model.kind() == ModelKind::kTransE) {
    const double pos = transe_distance(model, example.positive);
    for (const Triple& neg : example.negatives) {
      loss += std::max(0.0, config.margin + pos - transe_distance(model, neg));
    }
  } else {
    const auto& p = example.positive;
    loss += softplus(-model.score_triple(p.head, p.relation, p.tail));
    for (const Triple& neg : example.negatives) {
      loss += softplus(model.score_triple(neg.head, neg.relation, neg.tail));
    }
  }
  loss += config.l2 * regularizer(model, example.positive);
  for (const Triple& neg : example.negatives) loss += config.l2 * regularizer(model, neg);
  return loss;
}

double accumulate_gradient(const EmbeddingModel& model, const TrainingExample& example,
                           const TrainConfig& config, Gradient& gradient) {
  double loss = 0.0;
  const Triple& p = example.positive;
  if (model.kind() == ModelKind::kTransE) {
    const double pos = transe_distance(model, p);
    for (const Triple& neg : example.negatives) {
      const double violation = config.margin + pos - transe_distance(model, neg);
      if (violation <= 0.0) continue;
      loss += violation;
      add_triple_gradient(model, p, 1.0, gradient);
      add_triple_gradient(model, neg, -1.0, gradient);
    }
  } else {
    const double s = model.score_triple(p.head, p.relation, p.tail);
    loss += softplus(-s);
    add_triple_gradient(model, p, -sigmoid(-s), gradient);
    for (const Triple& neg : example.negatives) {
      const double sn = model.score_triple(neg.head, neg.relation, neg.tail);
      loss += softplus(sn);
      add_triple_gradient(model, neg, sigmoid(sn), gradient);
    }
  }
  loss += config.l2 * regularizer(model, p);
  add_regularizer_gradient(model, p, config.l2, gradient);
  for (const Triple& neg : example.negatives) {
    loss += config.l2 * regularizer(model, neg);
    add_regularizer_gradient(model, neg, config.l2, gradient);
  }
  return loss;
}

EmbeddingModel train(const TripleStore& store, const TrainConfig& config) {
  if (store.train().empty()) throw ConsistencyError("cannot train on an empty train split");
  if (config.dim == 0 || config.batch_size == 0 || config.negatives == 0 ||
      !(config.learning_rate > 0.0) || !(config.margin > 0.0) || config.l2 < 0.0) {
    throw UsageError("training hyperparameters must be positive");
  }
  EmbeddingModel model = EmbeddingModel::random(config.kind, store.num_entities(),
                                                store.num_relations(), config.dim, config.seed);
  const std::size_t w = model.width();
  std::vector<double> entity_acc(store.num_entities() * w, 0.0);
  std::vector<double> relation_acc(store.num_relations() * w, 0.0);

  const auto train_triples = store.train();
  std::vector<std::uint32_t> order(train_triples.size());
  std::iota(order.begin(), order.end(), 0u);
  const auto n_entities = store.num_entities();

  auto apply = [&](std::span<double> params, std::span<double> acc,
                   const std::vector<double>& g) {
    for (std::size_t k = 0; k < w; ++k) {
      acc[k] += g[k] * g[k];
      params[k] -= config.learning_rate * g[k] / (std::sqrt(acc[k]) + 1e-10);
    }
  };

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    CounterRng rng(derive_key(config.seed, 0x7472616e, epoch));
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0, batch = 0; start < order.size();
         start += config.batch_size, ++batch) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      Gradient gradient;
      double batch_loss = 0.0;
      TrainingExample example;
      for (std::size_t i = start; i < end; ++i) {
        example.positive = train_triples[order[i]];
        example.negatives.clear();
        for (std::size_t n = 0; n < config.negatives; ++n) {
          Triple neg = example.positive;
          const auto replacement = static_cast<EntityId>(rng.below(n_entities));
          if (rng() & 1) {
            neg.head = replacement;
          } else {
            neg.tail = replacement;
          }
          example.negatives.push_back(neg);
        }
        batch_loss += accumulate_gradient(model, example, config, gradient);
      }
      if (!std::isfinite(batch_loss)) {
        throw NumericError("non-finite training loss " + std::to_string(batch_loss) +
                           " at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch) + " (lr " +
                           std::to_string(config.learning_rate) + ")");
      }
      epoch_loss += batch_loss;
      for (auto& [e, g] : gradient.entities) {
        apply(model.entity(e), std::span(entity_acc).subspan(std::size_t{e} * w, w), g);
        if (config.kind == ModelKind::kTransE) {
          auto row = model.entity(e);
          const double norm = std::sqrt(squared_norm(row));
          if (norm > 1.0) {
            for (double& v : row) v /= norm;
          }
        }
      }
      for (auto& [r, g] : gradient.relations) {
        apply(model.relation(r), std::span(relation_acc).subspan(std::size_t{r} * w, w), g);
      }
    }
    const double mean_loss = epoch_loss / static_cast<double>(order.size());
    spdlog::debug("epoch {}: mean loss {:.6f}", epoch, mean_loss);
    if (config.on_epoch) config.on_epoch(epoch, mean_loss, model);
  }
  return model;
}

}  // namespace kgeval
