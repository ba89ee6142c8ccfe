#include "hiercut/treecut.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "hiercut/error.hpp"

namespace hiercut {

namespace {

void check_dropout(double dropout) {
  if (!(dropout >= 0.0 && dropout <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "dropout rate " + std::to_string(dropout) + " outside [0,1]");
  }
}

}  // namespace

MatrixBundle build_matrices(const TaxonomyTree& tree) {
  MatrixBundle m;
  auto internal = tree.internal_nodes();
  m.internal_order.assign(internal.begin(), internal.end());
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (n != tree.root()) m.label_order.push_back(n);
  }

  const std::size_t k = m.num_internal();
  const std::size_t l = m.num_labels();
  m.dependency = IntMatrix(k, k);
  m.dependency_row_sums.assign(k, 0);
  m.block = IntMatrix(k, l);
  m.block_pruned = IntMatrix(k, l);

  for (std::size_t i = 0; i < k; ++i) {
    const NodeId ni = m.internal_order[i];
    for (std::size_t j = 0; j < k; ++j) {
      if (tree.is_ancestor_or_self(m.internal_order[j], ni)) {
        m.dependency(i, j) = 1;
        ++m.dependency_row_sums[i];
      }
    }
    for (std::size_t j = 0; j < l; ++j) {
      const NodeId nj = m.label_order[j];
      std::int8_t v = -1;
      if (tree.is_ancestor_or_self(nj, ni)) {
        v = 1;
      } else if (tree.is_ancestor(ni, nj)) {
        v = 0;
      }
      m.block(i, j) = v;
      m.block_pruned(i, j) = static_cast<std::int8_t>(1 - (v < 0 ? -v : v));
    }
  }
  return m;
}

KeepFlags correct_flags(const KeepFlags& flags, const MatrixBundle& bundle) {
  const std::size_t k = bundle.num_internal();
  if (flags.keep.size() != k) {
    throw Error(ErrorCode::DimensionMismatch, "keep flags have " +
                                                  std::to_string(flags.keep.size()) +
                                                  " entries, tree has " + std::to_string(k) +
                                                  " internal nodes");
  }
  if (k > 0 && flags.keep[0] == 0) {
    throw Error(ErrorCode::InvalidArgument, "the root keep flag must be 1");
  }
  KeepFlags out{std::vector<std::uint8_t>(k, 0), true};
  for (std::size_t i = 0; i < k; ++i) {
    int dp = 0;
    auto row = bundle.dependency.row(i);
    for (std::size_t j = 0; j < k; ++j) dp += row[j] * flags.keep[j];
    out.keep[i] = (flags.keep[i] != 0 && dp == bundle.dependency_row_sums[i]) ? 1 : 0;
  }
  return out;
}

std::vector<int> blocked_mask(const KeepFlags& corrected, const MatrixBundle& bundle) {
  const std::size_t k = bundle.num_internal();
  const std::size_t l = bundle.num_labels();
  if (corrected.keep.size() != k) {
    throw Error(ErrorCode::DimensionMismatch, "keep flags have " +
                                                  std::to_string(corrected.keep.size()) +
                                                  " entries, tree has " + std::to_string(k) +
                                                  " internal nodes");
  }
  std::vector<int> b(l, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (corrected.keep[i] != 0) {
      auto row = bundle.block.row(i);
      for (std::size_t j = 0; j < l; ++j) b[j] += std::max<int>(row[j], 0);
    } else {
      auto row = bundle.block_pruned.row(i);
      for (std::size_t j = 0; j < l; ++j) b[j] += row[j];
    }
  }
  return b;
}

LabelSet labels_from_mask(const TaxonomyTree& tree, const MatrixBundle& bundle,
                          std::span<const int> mask) {
  if (mask.size() != bundle.num_labels()) {
    throw Error(ErrorCode::DimensionMismatch, "mask length does not match label count");
  }
  std::vector<NodeId> members;
  for (std::size_t j = 0; j < mask.size(); ++j) {
    if (mask[j] == 0) members.push_back(bundle.label_order[j]);
  }
  return LabelSet(tree, std::move(members), LabelSetKind::Treecut);
}

KeepFlags draw_keep_flags(const MatrixBundle& bundle, double dropout, Rng64& rng) {
  check_dropout(dropout);
  KeepFlags flags{std::vector<std::uint8_t>(bundle.num_internal(), 1), false};
  // internal_order[0] is the root, which is always kept and consumes no draw.
  for (std::size_t i = 1; i < flags.keep.size(); ++i) {
    flags.keep[i] = rng.next_unit() >= dropout ? 1 : 0;
  }
  return flags;
}

LabelSet sample_treecut(const TaxonomyTree& tree, const MatrixBundle& bundle, double dropout,
                        Rng64& rng) {
  KeepFlags flags = draw_keep_flags(bundle, dropout, rng);
  KeepFlags fixed = correct_flags(flags, bundle);
  return labels_from_mask(tree, bundle, blocked_mask(fixed, bundle));
}

DistinctCuts sample_distinct(const TaxonomyTree& tree, const MatrixBundle& bundle, double dropout,
                             std::size_t count, Rng64& rng) {
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "cut count must be at least 1");
  check_dropout(dropout);
  DistinctCuts out;
  const std::size_t cap = 100 * count;
  while (out.cuts.size() < count && out.draws < cap) {
    LabelSet cut = sample_treecut(tree, bundle, dropout, rng);
    ++out.draws;
    bool fresh = std::none_of(out.cuts.begin(), out.cuts.end(),
                              [&](const LabelSet& c) { return c.same_members(cut); });
    if (fresh) out.cuts.push_back(std::move(cut));
  }
  out.shortfall = out.cuts.size() < count;
  return out;
}

namespace {

using Cut = std::vector<NodeId>;

std::vector<Cut> cuts_below(const TaxonomyTree& tree, NodeId n, bool may_stop) {
  std::vector<Cut> out;
  if (may_stop) out.push_back({n});
  if (tree.is_leaf(n)) return out;

  std::vector<Cut> partial{{}};
  for (NodeId child : tree.children(n)) {
    std::vector<Cut> sub = cuts_below(tree, child, true);
    std::vector<Cut> next;
    next.reserve(partial.size() * sub.size());
    for (const Cut& p : partial) {
      for (const Cut& s : sub) {
        Cut c = p;
        c.insert(c.end(), s.begin(), s.end());
        next.push_back(std::move(c));
      }
    }
    partial = std::move(next);
  }
  out.insert(out.end(), partial.begin(), partial.end());
  return out;
}

}  // namespace

std::vector<LabelSet> enumerate_treecuts(const TaxonomyTree& tree) {
  if (tree.internal_nodes().size() > kMaxEnumerableInternal) {
    throw Error(ErrorCode::TooLarge, std::to_string(tree.internal_nodes().size()) +
                                         " internal nodes exceed the enumeration limit of " +
                                         std::to_string(kMaxEnumerableInternal));
  }
  std::set<Cut> unique;
  for (Cut& c : cuts_below(tree, tree.root(), false)) {
    std::sort(c.begin(), c.end());
    unique.insert(std::move(c));
  }
  std::vector<LabelSet> out;
  out.reserve(unique.size());
  for (const Cut& c : unique) out.emplace_back(tree, c, LabelSetKind::Treecut);
  return out;
}

}  // namespace hiercut
