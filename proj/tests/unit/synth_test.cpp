#include "hiercut/synth.hpp"

#include <gtest/gtest.h>

#include "hiercut/error.hpp"
#include "hiercut/formats.hpp"
#include "hiercut/metrics.hpp"

namespace hiercut {
namespace {

TEST(BalancedTree, DeskShape) {
  const auto tree = balanced_tree(27, 3);
  EXPECT_EQ(tree.leaves().size(), 27u);
  EXPECT_EQ(tree.internal_nodes().size(), 13u);
  EXPECT_EQ(tree.max_depth(), 3u);
  for (NodeId n : tree.internal_nodes()) EXPECT_EQ(tree.children(n).size(), 3u);
  for (NodeId l : tree.leaves()) EXPECT_EQ(tree.depth(l), 3u);
}

TEST(BalancedTree, OtherShapes) {
  for (std::size_t leaves : {2u, 5u, 10u, 31u}) {
    for (std::size_t depth : {1u, 2u, 4u}) {
      const auto tree = balanced_tree(leaves, depth);
      EXPECT_EQ(tree.leaves().size(), leaves);
      EXPECT_LE(tree.max_depth(), depth);
      for (NodeId n : tree.internal_nodes()) EXPECT_GE(tree.children(n).size(), 1u);
    }
  }
  EXPECT_EQ(balanced_tree(6, 1).max_depth(), 1u);
  EXPECT_THROW(balanced_tree(1, 2), Error);
  EXPECT_THROW(balanced_tree(4, 0), Error);
}

TEST(Synth, LeafEmbeddingsAreOrthonormal) {
  SynthConfig cfg;
  cfg.leaves = 9;
  cfg.depth = 2;
  cfg.dim = 12;
  const auto fx = generate_synthetic(cfg);
  const auto leaves = fx.tree.leaves();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (std::size_t j = 0; j < leaves.size(); ++j) {
      EXPECT_NEAR(fx.emb.row(leaves[i]).dot(fx.emb.row(leaves[j])), i == j ? 1.0 : 0.0, 1e-12);
    }
  }
  // Internal nodes sit at the normalised mean of their leaves.
  for (NodeId n : fx.tree.internal_nodes()) {
    if (n == fx.tree.root()) continue;
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(12);
    for (NodeId l : fx.tree.leaves_under(n)) mean += fx.emb.row(l);
    EXPECT_LE((mean.normalized() - fx.emb.row(n)).norm(), 1e-12);
  }
}

TEST(Synth, NoiselessFixtureIsPerfect) {
  SynthConfig cfg;
  cfg.leaves = 4;
  cfg.depth = 2;
  cfg.dim = 8;
  cfg.noise = 0.0;
  cfg.train_per_leaf = 3;
  cfg.test_per_leaf = 3;
  const auto fx = generate_synthetic(cfg);
  const auto id = PromptParams::identity(8, kDefaultTau);
  EXPECT_EQ(leaf_accuracy(fx.tree, id, fx.emb, fx.test), 1.0);
  EXPECT_EQ(hca(fx.tree, id, fx.emb, fx.test), 1.0);
}

TEST(Synth, HeavyNoiseIsChance) {
  SynthConfig cfg;
  cfg.leaves = 8;
  cfg.depth = 2;
  cfg.dim = 16;
  cfg.noise = 100.0;
  cfg.train_per_leaf = 1;
  cfg.test_per_leaf = 250;
  const auto fx = generate_synthetic(cfg);
  ASSERT_GE(fx.test.size(), 1000u);
  const double acc = leaf_accuracy(fx.tree, PromptParams::identity(16, kDefaultTau), fx.emb, fx.test);
  EXPECT_NEAR(acc, 1.0 / 8.0, 0.1);
}

TEST(Synth, SeedRepeatIsByteIdentical) {
  SynthConfig cfg;
  cfg.leaves = 6;
  cfg.dim = 10;
  cfg.seed = 17;
  const auto a = generate_synthetic(cfg);
  const auto b = generate_synthetic(cfg);
  EXPECT_EQ(dump_tree(a.tree), dump_tree(b.tree));
  EXPECT_EQ(dump_embeddings(a.emb, a.tree), dump_embeddings(b.emb, b.tree));
  EXPECT_EQ(dump_samples(a.train, a.tree), dump_samples(b.train, b.tree));
  EXPECT_EQ(dump_samples(a.test, a.tree), dump_samples(b.test, b.tree));
  cfg.seed = 18;
  EXPECT_NE(dump_samples(generate_synthetic(cfg).train, a.tree), dump_samples(a.train, a.tree));
}

TEST(Synth, RandomInternalEmbeddingsAreUnitAndUnrelated) {
  SynthConfig cfg;
  cfg.leaves = 4;
  cfg.depth = 2;
  cfg.dim = 32;
  cfg.internal = InternalEmbedding::Random;
  const auto fx = generate_synthetic(cfg);
  for (NodeId n : fx.tree.internal_nodes()) {
    if (n == fx.tree.root()) continue;
    EXPECT_NEAR(fx.emb.row(n).norm(), 1.0, 1e-12);
  }
}

TEST(Synth, DimensionTooSmall) {
  SynthConfig cfg;
  cfg.leaves = 10;
  cfg.dim = 9;
  try {
    generate_synthetic(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

}  // namespace
}  // namespace hiercut
