#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hiercut/classifier.hpp"
#include "hiercut/taxonomy.hpp"

namespace hiercut {

struct TrainConfig {
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  double base_lr = 0.02;
  double lambda = 0.5;
  double beta = 0.1;
  std::uint64_t seed = 0;
  double tau = kDefaultTau;
  std::optional<std::size_t> shots;

  void validate() const;
};

struct TrainRecord {
  std::size_t iteration = 0;
  double lr = 0.0;
  std::size_t cut_size = 0;
  double dtl = 0.0;
  double ncl = 0.0;
  double total = 0.0;
};

struct TrainLog {
  std::vector<TrainRecord> records;
  std::uint64_t params_digest = 0;
};

struct TrainResult {
  PromptParams params;
  TrainLog log;
};

/// base_lr * (1 + cos(pi * step / total_steps)) / 2.
double cosine_lr(std::size_t step, std::size_t total_steps, double base_lr);

/// First `shots` samples of each leaf, in file order.
std::vector<std::size_t> select_shots(const SampleSet& data, std::size_t shots);

/// Plain minibatch gradient descent on (A, c) from the identity prompt.
/// Each iteration draws one treecut for the whole batch and steps along the
/// gradient of DTL + lambda * NCL. Batches come from a per-epoch shuffle
/// seeded by (seed, epoch); identical inputs give bit-identical results.
TrainResult train(const TrainConfig& config, const TaxonomyTree& tree, const EmbeddingTable& emb,
                  const SampleSet& data);

/// FNV-1a over the bit patterns of tau, A (row-major) and c.
std::uint64_t params_digest(const PromptParams& params);

}  // namespace hiercut
