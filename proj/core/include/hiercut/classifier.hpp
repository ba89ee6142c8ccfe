#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "hiercut/taxonomy.hpp"

namespace hiercut {

/// Frozen per-node class embeddings, one row per tree node. The root row is
/// unused and left zero; every other row is non-zero.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(const TaxonomyTree& tree, Eigen::MatrixXd rows);

  Eigen::Index dim() const noexcept { return rows_.cols(); }
  Eigen::Index size() const noexcept { return rows_.rows(); }
  auto row(NodeId n) const { return rows_.row(static_cast<Eigen::Index>(n)); }
  const Eigen::MatrixXd& rows() const noexcept { return rows_; }

 private:
  Eigen::MatrixXd rows_;
};

/// Learnable surrogate prompt: class weight w_y = A e_y + c.
struct PromptParams {
  Eigen::MatrixXd A;
  Eigen::VectorXd c;
  double tau = 0.07;

  static PromptParams identity(Eigen::Index dim, double tau);
  Eigen::Index dim() const noexcept { return c.size(); }
  /// Throws on non-positive tau, non-finite entries or inconsistent shapes.
  void validate() const;
};

inline constexpr double kDefaultTau = 0.07;

/// Labelled visual features; one row of `features` per sample.
struct SampleSet {
  std::vector<std::string> ids;
  std::vector<NodeId> leaves;
  Eigen::MatrixXd features;

  std::size_t size() const noexcept { return leaves.size(); }
  Eigen::Index dim() const noexcept { return features.cols(); }
  /// Checks leaf labels, shapes and non-zero features against the tree.
  void validate(const TaxonomyTree& tree) const;
  /// Rows `rows` of this set, in the given order.
  SampleSet subset(std::span<const std::size_t> rows) const;
};

/// |labels| x d matrix of class weights, one row per member in order.
Eigen::MatrixXd node_weights(const PromptParams& params, const EmbeddingTable& emb,
                             const LabelSet& labels);

/// Cosine-softmax posterior over the label set.
Eigen::VectorXd posterior(const PromptParams& params, const Eigen::Ref<const Eigen::VectorXd>& v,
                          const LabelSet& labels, const EmbeddingTable& emb);

/// Highest-posterior label; ties go to the smallest node id.
NodeId predict(const PromptParams& params, const Eigen::Ref<const Eigen::VectorXd>& v,
               const LabelSet& labels, const EmbeddingTable& emb);

/// Caches unit-norm weights for every node so that many label sets can be
/// scored against one feature without recomputing A e + c. Scores are
/// cosines; the temperature does not change the argmax.
class CosineScorer {
 public:
  CosineScorer(const PromptParams& params, const EmbeddingTable& emb);

  /// Cosine of v against every node (root entry is 0).
  Eigen::VectorXd cosines(const Eigen::Ref<const Eigen::VectorXd>& v) const;

  static NodeId argmax(const Eigen::VectorXd& cosines, const LabelSet& labels);

 private:
  Eigen::MatrixXd unit_weights_;
};

}  // namespace hiercut
