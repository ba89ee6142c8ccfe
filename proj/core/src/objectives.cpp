#include "hiercut/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hiercut/error.hpp"
#include "hiercut/rng.hpp"

namespace hiercut {

LossValue LossValue::zero(Eigen::Index dim) {
  return {0.0, Eigen::MatrixXd::Zero(dim, dim), Eigen::VectorXd::Zero(dim), 0};
}

namespace {

void require_batch(const SampleSet& batch) {
  if (batch.size() == 0) throw Error(ErrorCode::EmptyData, "empty batch");
}

}  // namespace

LossValue ce_loss_and_grad(const SampleSet& batch, const LabelSet& labels,
                           const PromptParams& params, const EmbeddingTable& emb,
                           const TaxonomyTree& tree) {
  require_batch(batch);
  params.validate();
  const Eigen::Index d = params.dim();
  if (emb.dim() != d || batch.dim() != d) {
    throw Error(ErrorCode::DimensionMismatch, "batch, embeddings and params disagree on dimension");
  }
  if (labels.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty label set");

  LossValue out = LossValue::zero(d);
  const auto members = labels.members();
  const auto n_labels = static_cast<Eigen::Index>(members.size());

  if (n_labels == 1) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (target_in(tree, batch.leaves[i], labels)) ++out.n_contributing;
    }
    return out;
  }

  Eigen::MatrixXd emb_rows(n_labels, d);
  Eigen::MatrixXd unit_w(n_labels, d);
  Eigen::VectorXd norm_w(n_labels);
  for (Eigen::Index k = 0; k < n_labels; ++k) {
    emb_rows.row(k) = emb.row(members[static_cast<std::size_t>(k)]);
    Eigen::VectorXd w = params.A * emb_rows.row(k).transpose() + params.c;
    norm_w[k] = w.norm();
    if (!(norm_w[k] > 0.0)) {
      throw Error(ErrorCode::ZeroVector,
                  "class weight of '" + tree.name(members[static_cast<std::size_t>(k)]) + "' is zero");
    }
    unit_w.row(k) = w.transpose() / norm_w[k];
  }

  Eigen::MatrixXd grad_w = Eigen::MatrixXd::Zero(n_labels, d);
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto target = target_in(tree, batch.leaves[i], labels);
    if (!target) continue;
    const Eigen::Index t = std::lower_bound(members.begin(), members.end(), *target) - members.begin();

    Eigen::VectorXd v = batch.features.row(static_cast<Eigen::Index>(i)).transpose();
    const double vn = v.norm();
    if (!(vn > 0.0)) throw Error(ErrorCode::ZeroVector, "sample '" + batch.ids[i] + "' is zero");
    v /= vn;

    const Eigen::VectorXd cos = unit_w * v;
    const Eigen::VectorXd s = cos / params.tau;
    const double smax = s.maxCoeff();
    const double lse = smax + std::log((s.array() - smax).exp().sum());
    total += lse - s[t];

    Eigen::VectorXd g = (s.array() - lse).exp().matrix();
    g[t] -= 1.0;
    for (Eigen::Index k = 0; k < n_labels; ++k) {
      const double scale = g[k] / (params.tau * norm_w[k]);
      grad_w.row(k) += scale * (v.transpose() - cos[k] * unit_w.row(k));
    }
    ++out.n_contributing;
  }

  if (out.n_contributing == 0) return out;
  const double inv = 1.0 / static_cast<double>(out.n_contributing);
  out.value = total * inv;
  grad_w *= inv;
  out.grad_A = grad_w.transpose() * emb_rows;
  out.grad_c = grad_w.colwise().sum().transpose();
  return out;
}

LossValue ncl_loss_and_grad(const SampleSet& batch, const TaxonomyTree& tree,
                            const PromptParams& params, const EmbeddingTable& emb) {
  require_batch(batch);
  const auto internal = tree.internal_nodes();
  if (internal.empty()) throw Error(ErrorCode::InvalidArgument, "tree has no internal nodes");

  LossValue out = LossValue::zero(params.dim());
  for (NodeId n : internal) {
    const LabelSet children = node_label_set(tree, n);
    if (children.size() < 2) continue;
    LossValue term = ce_loss_and_grad(batch, children, params, emb, tree);
    out.value += term.value;
    out.grad_A += term.grad_A;
    out.grad_c += term.grad_c;
  }
  const double inv = 1.0 / static_cast<double>(internal.size());
  out.value *= inv;
  out.grad_A *= inv;
  out.grad_c *= inv;

  // Every sample lies under the root, so it reaches at least one node term
  // unless the root has a single child and the sample's subtree is a chain.
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (NodeId cur = tree.parent(batch.leaves[i]); cur != kNoNode; cur = tree.parent(cur)) {
      if (tree.children(cur).size() >= 2) {
        ++out.n_contributing;
        break;
      }
    }
  }
  return out;
}

LossValue dtl_loss_and_grad(const SampleSet& batch, const LabelSet& cut,
                            const PromptParams& params, const EmbeddingTable& emb,
                            const TaxonomyTree& tree) {
  validate_treecut(tree, cut);
  return ce_loss_and_grad(batch, cut, params, emb, tree);
}

LossValue combine_losses(const LossValue& dtl, const LossValue& ncl, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be a finite non-negative number");
  }
  LossValue out;
  out.value = dtl.value + lambda * ncl.value;
  out.grad_A = dtl.grad_A + lambda * ncl.grad_A;
  out.grad_c = dtl.grad_c + lambda * ncl.grad_c;
  out.n_contributing = std::max(dtl.n_contributing, ncl.n_contributing);
  return out;
}

LossValue total_loss_and_grad(const SampleSet& batch, const LabelSet& cut, double lambda,
                              const PromptParams& params, const EmbeddingTable& emb,
                              const TaxonomyTree& tree) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be non-negative");
  return combine_losses(dtl_loss_and_grad(batch, cut, params, emb, tree),
                        ncl_loss_and_grad(batch, tree, params, emb), lambda);
}

double finite_diff_check(const SampleSet& batch, const LabelSet& cut, double lambda,
                         const PromptParams& params, const EmbeddingTable& emb,
                         const TaxonomyTree& tree, const FiniteDiffOptions& options) {
  const LossValue analytic = total_loss_and_grad(batch, cut, lambda, params, emb, tree);
  const Eigen::Index d = params.dim();
  const std::size_t n_entries = static_cast<std::size_t>(d * d + d);

  // Entry e < d*d addresses A(e / d, e % d); the rest address c.
  std::vector<std::size_t> entries;
  if (n_entries <= options.max_full_entries) {
    entries.resize(n_entries);
    for (std::size_t e = 0; e < n_entries; ++e) entries[e] = e;
  } else {
    Rng64 rng(options.seed);
    for (std::size_t k = 0; k < options.sample_entries; ++k) entries.push_back(rng.next_below(n_entries));
  }

  auto loss_at = [&](std::size_t e, double delta) {
    PromptParams p = params;
    const auto de = static_cast<Eigen::Index>(e);
    if (de < d * d) {
      p.A(de / d, de % d) += delta;
    } else {
      p.c(de - d * d) += delta;
    }
    return total_loss_and_grad(batch, cut, lambda, p, emb, tree).value;
  };

  double worst = 0.0;
  for (std::size_t e : entries) {
    const double numeric = (loss_at(e, options.step) - loss_at(e, -options.step)) / (2.0 * options.step);
    const auto de = static_cast<Eigen::Index>(e);
    const double exact = de < d * d ? analytic.grad_A(de / d, de % d) : analytic.grad_c(de - d * d);
    worst = std::max(worst, std::abs(exact - numeric) / std::max(1.0, std::abs(numeric)));
  }
  return worst;
}

}  // namespace hiercut
