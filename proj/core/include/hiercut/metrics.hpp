#pragma once

#include <cstdint>
#include <vector>

#include "hiercut/classifier.hpp"
#include "hiercut/taxonomy.hpp"

namespace hiercut {

inline const std::vector<double> kDefaultMtaBetas{0.1, 0.3, 0.5, 0.7, 0.9};
inline constexpr std::size_t kDefaultCutsPerBeta = 5;

struct CutResult {
  double beta = 0.0;
  std::size_t cut_size = 0;
  double accuracy = 0.0;
};

struct BetaSummary {
  double beta = 0.0;
  double mta = 0.0;              // mean over this beta's cuts
  std::size_t cuts = 0;
  bool shortfall = false;        // fewer than T distinct cuts were found
};

struct MetricsReport {
  double leaf_acc = 0.0;
  double hca = 0.0;
  double mta = 0.0;              // pooled over every cut actually drawn
  std::vector<BetaSummary> per_beta;
  std::vector<CutResult> cuts;
  std::uint64_t seed = 0;
  std::size_t cuts_per_beta = 0;
  std::size_t samples = 0;
};

double leaf_accuracy(const TaxonomyTree& tree, const PromptParams& params,
                     const EmbeddingTable& emb, const SampleSet& data);

/// A sample counts only if its leaf prediction is right and, for every
/// ancestor n of its leaf, the prediction among Chd(n) stays on the
/// root-to-leaf path.
double hca(const TaxonomyTree& tree, const PromptParams& params, const EmbeddingTable& emb,
           const SampleSet& data);

/// Accuracy under one label set, scoring each sample against the member on
/// its root-to-leaf path. Samples with no such member count as wrong.
double label_set_accuracy(const TaxonomyTree& tree, const PromptParams& params,
                          const EmbeddingTable& emb, const SampleSet& data,
                          const LabelSet& labels);

/// Leaf accuracy, HCA and MTA. For beta index k the cuts come from
/// sample_distinct seeded with seed ^ (k + 1).
MetricsReport evaluate(const TaxonomyTree& tree, const PromptParams& params,
                       const EmbeddingTable& emb, const SampleSet& data,
                       const std::vector<double>& betas = kDefaultMtaBetas,
                       std::size_t cuts_per_beta = kDefaultCutsPerBeta, std::uint64_t seed = 0);

}  // namespace hiercut
