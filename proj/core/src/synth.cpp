#include "hiercut/synth.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "hiercut/error.hpp"
#include "hiercut/rng.hpp"

namespace hiercut {

namespace {

std::string padded(std::size_t k, std::size_t width) {
  std::string s = std::to_string(k);
  return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

SampleSet draw_samples(const TaxonomyTree& tree, const EmbeddingTable& emb, std::size_t per_leaf,
                       double noise, Rng64 rng, std::string_view prefix) {
  SampleSet data;
  const auto leaves = tree.leaves();
  const std::size_t n = leaves.size() * per_leaf;
  data.features.resize(static_cast<Eigen::Index>(n), emb.dim());
  std::size_t row = 0;
  for (NodeId leaf : leaves) {
    for (std::size_t k = 0; k < per_leaf; ++k, ++row) {
      data.ids.push_back(std::string(prefix) + padded(row, 6));
      data.leaves.push_back(leaf);
      for (Eigen::Index j = 0; j < emb.dim(); ++j) {
        data.features(static_cast<Eigen::Index>(row), j) = emb.row(leaf)[j] + noise * rng.next_gaussian();
      }
    }
  }
  return data;
}

}  // namespace

TaxonomyTree balanced_tree(std::size_t leaves, std::size_t depth) {
  if (leaves < 2) throw Error(ErrorCode::InvalidArgument, "need at least two leaves");
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be at least 1");

  struct Pending {
    NodeId id;
    std::size_t count;
    std::size_t levels;
  };
  std::vector<std::string> names{"root"};
  std::vector<NodeId> parents{kNoNode};
  std::vector<std::size_t> level_of{0};
  std::vector<std::size_t> per_level(depth + 1, 0);
  std::size_t leaf_count = 0;
  const std::size_t leaf_width = std::to_string(leaves - 1).size();

  std::deque<Pending> queue{{0, leaves, depth}};
  while (!queue.empty()) {
    const Pending cur = queue.front();
    queue.pop_front();
    std::size_t branches = cur.count;
    if (cur.levels > 1) {
      const double b = std::round(std::pow(static_cast<double>(cur.count), 1.0 / static_cast<double>(cur.levels)));
      branches = std::min(cur.count, std::max<std::size_t>(2, static_cast<std::size_t>(b)));
    }
    const std::size_t level = level_of[cur.id] + 1;
    for (std::size_t k = 0; k < branches; ++k) {
      const std::size_t part = cur.count / branches + (k < cur.count % branches ? 1 : 0);
      const NodeId id = names.size();
      parents.push_back(cur.id);
      level_of.push_back(level);
      if (part == 1) {
        names.push_back("c" + padded(leaf_count++, leaf_width));
      } else {
        names.push_back("g" + std::to_string(level) + "_" + std::to_string(per_level[level]++));
        queue.push_back({id, part, cur.levels - 1});
      }
    }
  }
  return TaxonomyTree::from_parents(std::move(names), std::move(parents));
}

SynthFixture generate_synthetic(const SynthConfig& config) {
  if (config.dim < static_cast<Eigen::Index>(config.leaves)) {
    throw Error(ErrorCode::InvalidArgument, "dim " + std::to_string(config.dim) + " < leaves " +
                                                std::to_string(config.leaves) +
                                                ": orthogonal leaf embeddings impossible");
  }
  if (!(config.noise >= 0.0) || !std::isfinite(config.noise)) {
    throw Error(ErrorCode::InvalidArgument, "noise must be finite and non-negative");
  }
  TaxonomyTree tree = balanced_tree(config.leaves, config.depth);
  const auto leaves = tree.leaves();
  const auto n_leaves = static_cast<Eigen::Index>(leaves.size());

  Rng64 basis_rng(derive_seed(config.seed, 1));
  Eigen::MatrixXd gauss(config.dim, n_leaves);
  for (Eigen::Index c = 0; c < n_leaves; ++c) {
    for (Eigen::Index r = 0; r < config.dim; ++r) gauss(r, c) = basis_rng.next_gaussian();
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  const Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(config.dim, n_leaves);

  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(tree.size()), config.dim);
  for (Eigen::Index k = 0; k < n_leaves; ++k) {
    rows.row(static_cast<Eigen::Index>(leaves[static_cast<std::size_t>(k)])) = basis.col(k).transpose();
  }
  Rng64 internal_rng(derive_seed(config.seed, 4));
  for (NodeId n : tree.internal_nodes()) {
    if (n == tree.root()) continue;
    if (config.internal == InternalEmbedding::Random) {
      Eigen::RowVectorXd r(config.dim);
      for (Eigen::Index j = 0; j < config.dim; ++j) r[j] = internal_rng.next_gaussian();
      rows.row(static_cast<Eigen::Index>(n)) = r / r.norm();
      continue;
    }
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(config.dim);
    const auto under = tree.leaves_under(n);
    for (NodeId leaf : under) mean += rows.row(static_cast<Eigen::Index>(leaf));
    mean /= static_cast<double>(under.size());
    rows.row(static_cast<Eigen::Index>(n)) = mean / mean.norm();
  }
  EmbeddingTable emb(tree, std::move(rows));

  SampleSet train = draw_samples(tree, emb, config.train_per_leaf, config.noise,
                                 Rng64(derive_seed(config.seed, 2)), "train");
  SampleSet test = draw_samples(tree, emb, config.test_per_leaf, config.noise,
                                Rng64(derive_seed(config.seed, 3)), "test");
  return {std::move(tree), std::move(emb), std::move(train), std::move(test)};
}

}  // namespace hiercut
