#pragma once

#include <cstdint>

#include "hiercut/classifier.hpp"
#include "hiercut/taxonomy.hpp"

namespace hiercut {

/// How internal-node embeddings are placed.
enum class InternalEmbedding {
  Mean,    // normalised mean of the descendant leaf embeddings
  Random,  // independent random unit vectors, unrelated to the leaves
};

struct SynthConfig {
  std::size_t leaves = 27;
  std::size_t depth = 3;
  Eigen::Index dim = 64;
  std::size_t train_per_leaf = 30;
  std::size_t test_per_leaf = 30;
  double noise = 0.6;
  std::uint64_t seed = 0;
  InternalEmbedding internal = InternalEmbedding::Mean;
};

struct SynthFixture {
  TaxonomyTree tree;
  EmbeddingTable emb;
  SampleSet train;
  SampleSet test;
};

/// Balanced tree with `leaves` leaves and at most `depth` levels below the
/// root. Node order is breadth-first.
TaxonomyTree balanced_tree(std::size_t leaves, std::size_t depth);

/// Desk-scale fixture: random orthonormal leaf embeddings, internal nodes at
/// the normalised mean of their leaves (or random, see InternalEmbedding), and
/// samples at their leaf embedding plus isotropic Gaussian noise.
/// Deterministic in the config.
SynthFixture generate_synthetic(const SynthConfig& config);

}  // namespace hiercut
