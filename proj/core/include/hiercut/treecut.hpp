#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hiercut/rng.hpp"
#include "hiercut/taxonomy.hpp"

namespace hiercut {

/// Dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::int8_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::int8_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const std::int8_t> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int8_t> data_;
};

/// Precomputed masks for matrix-form treecut sampling over a fixed tree.
///
/// Rows index internal nodes (internal_order), columns index candidate labels
/// (label_order = every node except the root).
///   dependency(i, j) = 1  iff internal j is internal i or one of its ancestors
///   block(i, j)      = 1  iff label j is internal i or one of its ancestors
///                    = 0  iff label j lies strictly below internal i
///                    = -1 otherwise
///   block_pruned     = 1 - |block|
struct MatrixBundle {
  IntMatrix dependency;
  std::vector<int> dependency_row_sums;
  IntMatrix block;
  IntMatrix block_pruned;
  std::vector<NodeId> internal_order;
  std::vector<NodeId> label_order;

  std::size_t num_internal() const noexcept { return internal_order.size(); }
  std::size_t num_labels() const noexcept { return label_order.size(); }
};

/// Per-internal-node keep flags (1 = node kept and expanded).
struct KeepFlags {
  std::vector<std::uint8_t> keep;
  bool corrected = false;
};

MatrixBundle build_matrices(const TaxonomyTree& tree);

/// Zeroes every flag whose internal ancestors are not all kept:
/// keep <- keep * [D keep == D 1].
KeepFlags correct_flags(const KeepFlags& flags, const MatrixBundle& bundle);

/// Blocked-label counts b = pos(B)^T p + Bbar^T (1 - p); b_j == 0 iff label j
/// is a leaf of the pruned tree. Only the +1 entries of B contribute for kept
/// nodes: the -1 entries are clipped to zero.
std::vector<int> blocked_mask(const KeepFlags& corrected, const MatrixBundle& bundle);

/// Labels with a zero blocked count, as a treecut label set.
LabelSet labels_from_mask(const TaxonomyTree& tree, const MatrixBundle& bundle,
                          std::span<const int> mask);

/// Draws one treecut. Each non-root internal node, in internal_order, is kept
/// iff a uniform draw is >= dropout, so dropout 0 keeps everything (leaf label
/// set) and dropout 1 prunes everything below the root (Chd(root)).
LabelSet sample_treecut(const TaxonomyTree& tree, const MatrixBundle& bundle, double dropout,
                        Rng64& rng);

/// Raw (uncorrected) flag draw used by sample_treecut; exposed for tests.
KeepFlags draw_keep_flags(const MatrixBundle& bundle, double dropout, Rng64& rng);

struct DistinctCuts {
  std::vector<LabelSet> cuts;  // first-appearance order
  std::size_t draws = 0;
  bool shortfall = false;      // fewer than requested before the draw cap
};

/// Up to `count` pairwise distinct treecuts by rejection, capped at
/// 100 * count draws.
DistinctCuts sample_distinct(const TaxonomyTree& tree, const MatrixBundle& bundle, double dropout,
                             std::size_t count, Rng64& rng);

inline constexpr std::size_t kMaxEnumerableInternal = 20;

/// Every treecut of the tree by direct recursion (a node is either cut or
/// expanded). Sorted lexicographically by member list. Intended as an
/// oracle; throws TooLarge beyond kMaxEnumerableInternal internal nodes.
std::vector<LabelSet> enumerate_treecuts(const TaxonomyTree& tree);

}  // namespace hiercut
