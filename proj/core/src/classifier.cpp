#include "hiercut/classifier.hpp"

#include <cmath>
#include <string>

#include "hiercut/error.hpp"

namespace hiercut {

namespace {

// Plain sequential dot product. Every cosine in the library goes through
// this so that predictions agree bit-for-bit between code paths.
double seq_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Eigen::VectorXd unit(const Eigen::VectorXd& x, const char* what) {
  const double n = std::sqrt(seq_dot(x, x));
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::ZeroVector, std::string(what) + " has zero or non-finite norm");
  }
  return x / n;
}

Eigen::VectorXd unit_weight(const PromptParams& params, const EmbeddingTable& emb, NodeId n) {
  Eigen::VectorXd w = params.A * emb.row(n).transpose() + params.c;
  return unit(w, "class weight");
}

void check_dims(const PromptParams& params, const EmbeddingTable& emb, Eigen::Index feature_dim) {
  if (params.dim() != emb.dim() || feature_dim != emb.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimensions disagree: params " + std::to_string(params.dim()) + ", embeddings " +
                    std::to_string(emb.dim()) + ", feature " + std::to_string(feature_dim));
  }
}

void check_labels(const LabelSet& labels, const EmbeddingTable& emb) {
  for (NodeId m : labels.members()) {
    if (static_cast<Eigen::Index>(m) >= emb.size()) {
      throw Error(ErrorCode::MissingLabel, "label " + std::to_string(m) + " has no embedding");
    }
  }
}

Eigen::VectorXd label_cosines(const PromptParams& params, const Eigen::VectorXd& v,
                              const LabelSet& labels, const EmbeddingTable& emb) {
  check_dims(params, emb, v.size());
  check_labels(labels, emb);
  if (labels.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "classification needs at least two labels");
  }
  const Eigen::VectorXd vhat = unit(v, "feature");
  Eigen::VectorXd cos(static_cast<Eigen::Index>(labels.size()));
  Eigen::Index k = 0;
  for (NodeId m : labels.members()) cos[k++] = seq_dot(unit_weight(params, emb, m), vhat);
  return cos;
}

}  // namespace

EmbeddingTable::EmbeddingTable(const TaxonomyTree& tree, Eigen::MatrixXd rows)
    : rows_(std::move(rows)) {
  if (rows_.rows() != static_cast<Eigen::Index>(tree.size())) {
    throw Error(ErrorCode::DimensionMismatch, "embedding table needs one row per tree node");
  }
  if (rows_.cols() == 0) throw Error(ErrorCode::DimensionMismatch, "embedding dimension is 0");
  if (!rows_.allFinite()) throw Error(ErrorCode::NonFinite, "embedding table has non-finite entries");
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (n == tree.root()) continue;
    if (rows_.row(static_cast<Eigen::Index>(n)).squaredNorm() == 0.0) {
      throw Error(ErrorCode::ZeroVector, "embedding of '" + tree.name(n) + "' is all zero");
    }
  }
}

PromptParams PromptParams::identity(Eigen::Index dim, double tau) {
  PromptParams p{Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim), tau};
  p.validate();
  return p;
}

void PromptParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::InvalidArgument, "temperature must be positive and finite");
  }
  if (A.rows() != c.size() || A.cols() != c.size() || c.size() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "prompt matrix must be d x d with offset of length d");
  }
  if (!A.allFinite() || !c.allFinite()) {
    throw Error(ErrorCode::NonFinite, "prompt parameters contain non-finite values");
  }
}

void SampleSet::validate(const TaxonomyTree& tree) const {
  if (ids.size() != leaves.size() || features.rows() != static_cast<Eigen::Index>(leaves.size())) {
    throw Error(ErrorCode::DimensionMismatch, "sample ids, labels and features differ in count");
  }
  if (!features.allFinite()) throw Error(ErrorCode::NonFinite, "sample features are not finite");
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (!tree.is_leaf(leaves[i])) {
      throw Error(ErrorCode::NotLeaf, "sample '" + ids[i] + "' is labelled with internal node '" +
                                          tree.name(leaves[i]) + "'");
    }
    if (features.row(static_cast<Eigen::Index>(i)).squaredNorm() == 0.0) {
      throw Error(ErrorCode::ZeroVector, "sample '" + ids[i] + "' has an all-zero feature");
    }
  }
}

SampleSet SampleSet::subset(std::span<const std::size_t> rows) const {
  SampleSet out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.ids.push_back(ids.at(rows[k]));
    out.leaves.push_back(leaves.at(rows[k]));
    out.features.row(static_cast<Eigen::Index>(k)) =
        features.row(static_cast<Eigen::Index>(rows[k]));
  }
  return out;
}

Eigen::MatrixXd node_weights(const PromptParams& params, const EmbeddingTable& emb,
                             const LabelSet& labels) {
  check_dims(params, emb, emb.dim());
  check_labels(labels, emb);
  Eigen::MatrixXd w(static_cast<Eigen::Index>(labels.size()), emb.dim());
  Eigen::Index k = 0;
  for (NodeId m : labels.members()) {
    w.row(k++) = (params.A * emb.row(m).transpose() + params.c).transpose();
  }
  return w;
}

Eigen::VectorXd posterior(const PromptParams& params, const Eigen::Ref<const Eigen::VectorXd>& v,
                          const LabelSet& labels, const EmbeddingTable& emb) {
  Eigen::VectorXd s = label_cosines(params, v, labels, emb) / params.tau;
  s.array() -= s.maxCoeff();
  s = s.array().exp();
  return s / s.sum();
}

NodeId predict(const PromptParams& params, const Eigen::Ref<const Eigen::VectorXd>& v,
               const LabelSet& labels, const EmbeddingTable& emb) {
  const Eigen::VectorXd cos = label_cosines(params, v, labels, emb);
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < cos.size(); ++k) {
    if (cos[k] > cos[best]) best = k;
  }
  return labels.members()[static_cast<std::size_t>(best)];
}

CosineScorer::CosineScorer(const PromptParams& params, const EmbeddingTable& emb) {
  params.validate();
  check_dims(params, emb, emb.dim());
  unit_weights_ = Eigen::MatrixXd::Zero(emb.size(), emb.dim());
  // Row 0 is the root, which has no class weight.
  for (Eigen::Index n = 1; n < emb.size(); ++n) {
    unit_weights_.row(n) = unit_weight(params, emb, static_cast<NodeId>(n)).transpose();
  }
}

Eigen::VectorXd CosineScorer::cosines(const Eigen::Ref<const Eigen::VectorXd>& v) const {
  if (v.size() != unit_weights_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "feature dimension does not match the scorer");
  }
  const Eigen::VectorXd vhat = unit(v, "feature");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(unit_weights_.rows());
  for (Eigen::Index n = 1; n < unit_weights_.rows(); ++n) {
    out[n] = seq_dot(unit_weights_.row(n).transpose(), vhat);
  }
  return out;
}

NodeId CosineScorer::argmax(const Eigen::VectorXd& cosines, const LabelSet& labels) {
  auto members = labels.members();
  if (members.empty()) throw Error(ErrorCode::InvalidArgument, "empty label set");
  NodeId best = members.front();
  for (NodeId m : members) {
    if (cosines[static_cast<Eigen::Index>(m)] > cosines[static_cast<Eigen::Index>(best)]) best = m;
  }
  return best;
}

}  // namespace hiercut
