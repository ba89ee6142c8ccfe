#include "hiercut/metrics.hpp"

#include <string>

#include "hiercut/error.hpp"
#include "hiercut/rng.hpp"
#include "hiercut/treecut.hpp"

namespace hiercut {

namespace {

// Cosines of every sample against every node, computed once per evaluation.
std::vector<Eigen::VectorXd> score_all(const TaxonomyTree& tree, const PromptParams& params,
                                       const EmbeddingTable& emb, const SampleSet& data) {
  if (data.size() == 0) throw Error(ErrorCode::EmptyData, "no evaluation samples");
  if (data.dim() != emb.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "sample and embedding dimensions differ");
  }
  data.validate(tree);
  const CosineScorer scorer(params, emb);
  std::vector<Eigen::VectorXd> scores;
  scores.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    scores.push_back(scorer.cosines(data.features.row(static_cast<Eigen::Index>(i)).transpose()));
  }
  return scores;
}

double fraction(std::size_t hits, std::size_t total) {
  return static_cast<double>(hits) / static_cast<double>(total);
}

std::size_t count_correct(const TaxonomyTree& tree, const SampleSet& data,
                          const std::vector<Eigen::VectorXd>& scores, const LabelSet& labels) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto target = target_in(tree, data.leaves[i], labels);
    if (target && CosineScorer::argmax(scores[i], labels) == *target) ++hits;
  }
  return hits;
}

std::size_t count_consistent(const TaxonomyTree& tree, const SampleSet& data,
                             const std::vector<Eigen::VectorXd>& scores) {
  const LabelSet leaf_set = leaf_label_set(tree);
  std::vector<LabelSet> child_sets(tree.size());
  for (NodeId n : tree.internal_nodes()) child_sets[n] = node_label_set(tree, n);

  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const NodeId leaf = data.leaves[i];
    if (CosineScorer::argmax(scores[i], leaf_set) != leaf) continue;
    bool ok = true;
    for (NodeId child = leaf, n = tree.parent(leaf); n != kNoNode; child = n, n = tree.parent(n)) {
      // The only member of Chd(n) on the root-to-leaf path is `child`.
      if (CosineScorer::argmax(scores[i], child_sets[n]) != child) {
        ok = false;
        break;
      }
    }
    if (ok) ++hits;
  }
  return hits;
}

}  // namespace

double leaf_accuracy(const TaxonomyTree& tree, const PromptParams& params,
                     const EmbeddingTable& emb, const SampleSet& data) {
  const auto scores = score_all(tree, params, emb, data);
  return fraction(count_correct(tree, data, scores, leaf_label_set(tree)), data.size());
}

double hca(const TaxonomyTree& tree, const PromptParams& params, const EmbeddingTable& emb,
           const SampleSet& data) {
  const auto scores = score_all(tree, params, emb, data);
  return fraction(count_consistent(tree, data, scores), data.size());
}

double label_set_accuracy(const TaxonomyTree& tree, const PromptParams& params,
                          const EmbeddingTable& emb, const SampleSet& data,
                          const LabelSet& labels) {
  const auto scores = score_all(tree, params, emb, data);
  return fraction(count_correct(tree, data, scores, labels), data.size());
}

MetricsReport evaluate(const TaxonomyTree& tree, const PromptParams& params,
                       const EmbeddingTable& emb, const SampleSet& data,
                       const std::vector<double>& betas, std::size_t cuts_per_beta,
                       std::uint64_t seed) {
  if (betas.empty()) throw Error(ErrorCode::InvalidArgument, "at least one dropout rate is required");
  if (cuts_per_beta == 0) throw Error(ErrorCode::InvalidArgument, "T must be at least 1");

  const auto scores = score_all(tree, params, emb, data);
  MetricsReport report;
  report.seed = seed;
  report.cuts_per_beta = cuts_per_beta;
  report.samples = data.size();
  report.leaf_acc = fraction(count_correct(tree, data, scores, leaf_label_set(tree)), data.size());
  report.hca = fraction(count_consistent(tree, data, scores), data.size());

  // Pool integer hit counts and divide once, so equal per-cut accuracies
  // average to exactly that accuracy.
  const MatrixBundle bundle = build_matrices(tree);
  std::size_t pooled_hits = 0;
  for (std::size_t k = 0; k < betas.size(); ++k) {
    Rng64 rng(derive_seed(seed, k + 1));
    const DistinctCuts drawn = sample_distinct(tree, bundle, betas[k], cuts_per_beta, rng);
    std::size_t beta_hits = 0;
    for (const LabelSet& cut : drawn.cuts) {
      const std::size_t hits = count_correct(tree, data, scores, cut);
      report.cuts.push_back({betas[k], cut.size(), fraction(hits, data.size())});
      beta_hits += hits;
    }
    pooled_hits += beta_hits;
    report.per_beta.push_back({betas[k], fraction(beta_hits, drawn.cuts.size() * data.size()),
                               drawn.cuts.size(), drawn.shortfall});
  }
  report.mta = fraction(pooled_hits, report.cuts.size() * data.size());
  return report;
}

}  // namespace hiercut
