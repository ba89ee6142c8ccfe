#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "hiercut/classifier.hpp"
#include "hiercut/rng.hpp"
#include "hiercut/taxonomy.hpp"
#include "hiercut/treecut.hpp"

namespace hiercut::testing {

// n0 -> {n1, n6}; n1 -> {n2, n3}; n2 -> {n4, n5}.
inline constexpr const char* kT6Document =
    "n0\t-\n"
    "n1\tn0\n"
    "n2\tn1\n"
    "n3\tn1\n"
    "n4\tn2\n"
    "n5\tn2\n"
    "n6\tn0\n";

inline TaxonomyTree t6() { return load_tree(kT6Document); }

inline TaxonomyTree star(std::size_t leaves) {
  std::vector<std::string> names{"root"};
  std::vector<NodeId> parents{kNoNode};
  for (std::size_t i = 0; i < leaves; ++i) {
    names.push_back("leaf" + std::to_string(i));
    parents.push_back(0);
  }
  return TaxonomyTree::from_parents(names, parents);
}

/// Random tree with parent[i] uniform in [0, i), redrawn until it has at
/// least two leaves and at most max_internal internal nodes.
inline TaxonomyTree random_tree(Rng64& rng, std::size_t max_nodes, std::size_t max_internal) {
  while (true) {
    const std::size_t n = 3 + rng.next_below(max_nodes - 2);
    std::vector<std::string> names;
    std::vector<NodeId> parents{kNoNode};
    for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    for (std::size_t i = 1; i < n; ++i) {
      // Bias towards recent nodes now and then to get deeper trees.
      parents.push_back(rng.next_below(2) == 0 ? rng.next_below(i) : i - 1 - rng.next_below(std::min<std::size_t>(i, 3)));
    }
    TaxonomyTree tree = TaxonomyTree::from_parents(names, parents);
    if (tree.leaves().size() >= 2 && tree.internal_nodes().size() <= max_internal) return tree;
  }
}

/// Orthonormal-ish random unit embeddings for every non-root node.
inline EmbeddingTable random_embeddings(const TaxonomyTree& tree, Eigen::Index dim, Rng64& rng) {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(tree.size()), dim);
  for (Eigen::Index n = 1; n < rows.rows(); ++n) {
    for (Eigen::Index j = 0; j < dim; ++j) rows(n, j) = rng.next_gaussian();
    rows.row(n).normalize();
  }
  return EmbeddingTable(tree, std::move(rows));
}

/// One-hot embeddings: node n gets basis vector n-1 (dim >= size-1).
inline EmbeddingTable one_hot_embeddings(const TaxonomyTree& tree, Eigen::Index dim) {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(tree.size()), dim);
  for (Eigen::Index n = 1; n < rows.rows(); ++n) rows(n, n - 1) = 1.0;
  return EmbeddingTable(tree, std::move(rows));
}

inline SampleSet random_samples(const TaxonomyTree& tree, const EmbeddingTable& emb,
                                std::size_t count, double noise, Rng64& rng) {
  SampleSet s;
  s.features.resize(static_cast<Eigen::Index>(count), emb.dim());
  const auto leaves = tree.leaves();
  for (std::size_t i = 0; i < count; ++i) {
    const NodeId leaf = leaves[rng.next_below(leaves.size())];
    s.ids.push_back("s" + std::to_string(i));
    s.leaves.push_back(leaf);
    for (Eigen::Index j = 0; j < emb.dim(); ++j) {
      s.features(static_cast<Eigen::Index>(i), j) = emb.row(leaf)[j] + noise * rng.next_gaussian();
    }
  }
  return s;
}

inline PromptParams random_params(Eigen::Index dim, double spread, double tau, Rng64& rng) {
  PromptParams p = PromptParams::identity(dim, tau);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) p.A(r, c) += spread * rng.next_gaussian();
    p.c[r] = spread * rng.next_gaussian();
  }
  return p;
}

using MemberSet = std::vector<NodeId>;

inline std::set<MemberSet> members_of(const std::vector<LabelSet>& sets) {
  std::set<MemberSet> out;
  for (const auto& s : sets) out.insert(MemberSet(s.members().begin(), s.members().end()));
  return out;
}

/// Treecuts by definition: every subset of non-root nodes that meets each
/// root-to-leaf path exactly once. Exponential in the node count.
inline std::set<MemberSet> treecuts_by_definition(const TaxonomyTree& tree) {
  const std::size_t labels = tree.size() - 1;
  std::set<MemberSet> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << labels); ++mask) {
    MemberSet members;
    for (std::size_t j = 0; j < labels; ++j) {
      if (mask >> j & 1U) members.push_back(j + 1);
    }
    bool ok = true;
    for (NodeId leaf : tree.leaves()) {
      std::size_t hits = 0;
      for (NodeId cur = leaf; cur != tree.root(); cur = tree.parent(cur)) {
        hits += std::binary_search(members.begin(), members.end(), cur) ? 1 : 0;
      }
      if (hits != 1) {
        ok = false;
        break;
      }
    }
    if (ok) out.insert(members);
  }
  return out;
}

/// Image of correct_flags + blocked_mask over every raw flag vector with the
/// root kept.
inline std::set<MemberSet> pipeline_image(const TaxonomyTree& tree, const MatrixBundle& bundle) {
  const std::size_t k = bundle.num_internal();
  std::set<MemberSet> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (k - 1)); ++bits) {
    KeepFlags flags{std::vector<std::uint8_t>(k, 1), false};
    for (std::size_t i = 1; i < k; ++i) flags.keep[i] = (bits >> (i - 1)) & 1U;
    const auto mask = blocked_mask(correct_flags(flags, bundle), bundle);
    const LabelSet cut = labels_from_mask(tree, bundle, mask);
    out.insert(MemberSet(cut.members().begin(), cut.members().end()));
  }
  return out;
}

}  // namespace hiercut::testing
