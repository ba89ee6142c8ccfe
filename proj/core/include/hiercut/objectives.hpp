#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>

#include "hiercut/classifier.hpp"
#include "hiercut/taxonomy.hpp"

namespace hiercut {

/// A batch-mean loss and its gradient with respect to the prompt (A, c).
struct LossValue {
  double value = 0.0;
  Eigen::MatrixXd grad_A;
  Eigen::VectorXd grad_c;
  std::size_t n_contributing = 0;

  static LossValue zero(Eigen::Index dim);
};

/// Mean cross-entropy over the samples whose leaf projects onto a member of
/// `labels` (see target_in); other samples are skipped. Singleton label sets
/// give zero loss.
LossValue ce_loss_and_grad(const SampleSet& batch, const LabelSet& labels,
                           const PromptParams& params, const EmbeddingTable& emb,
                           const TaxonomyTree& tree);

/// Node-centric loss: the cross-entropy over Chd(n), averaged over every
/// internal node n. Nodes with no in-subtree samples or a single child add
/// zero but still count in the average.
LossValue ncl_loss_and_grad(const SampleSet& batch, const TaxonomyTree& tree,
                            const PromptParams& params, const EmbeddingTable& emb);

/// Dynamic treecut loss for one sampled cut. Throws NotTreecut when `cut`
/// is not an antichain covering every leaf.
LossValue dtl_loss_and_grad(const SampleSet& batch, const LabelSet& cut,
                            const PromptParams& params, const EmbeddingTable& emb,
                            const TaxonomyTree& tree);

/// dtl + lambda * ncl, value and gradients.
LossValue combine_losses(const LossValue& dtl, const LossValue& ncl, double lambda);

LossValue total_loss_and_grad(const SampleSet& batch, const LabelSet& cut, double lambda,
                              const PromptParams& params, const EmbeddingTable& emb,
                              const TaxonomyTree& tree);

struct FiniteDiffOptions {
  double step = 1e-5;
  /// Above this many parameters a random subset of `sample_entries` is checked.
  std::size_t max_full_entries = 4096;
  std::size_t sample_entries = 256;
  std::uint64_t seed = 0;
};

/// Largest |analytic - numeric| / max(1, |numeric|) over the checked entries
/// of A and c, using central differences of total_loss_and_grad.
double finite_diff_check(const SampleSet& batch, const LabelSet& cut, double lambda,
                         const PromptParams& params, const EmbeddingTable& emb,
                         const TaxonomyTree& tree, const FiniteDiffOptions& options = {});

}  // namespace hiercut
