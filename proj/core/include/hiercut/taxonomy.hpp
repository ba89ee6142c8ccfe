#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hiercut {

using NodeId = std::size_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

/// Immutable rooted class hierarchy. Node ids are positions in file order,
/// which is required to be topological (every parent precedes its children),
/// so the root is always node 0.
class TaxonomyTree {
 public:
  struct Record {
    std::string name;
    std::optional<std::string> parent;
  };

  /// Builds and validates a tree from (name, parent-name) records in order.
  static TaxonomyTree from_records(std::span<const Record> records);

  /// Builds from names and parent indices (kNoNode for the root). Parent
  /// indices may be arbitrary; cycles, unreachable nodes and non-topological
  /// order are all rejected.
  static TaxonomyTree from_parents(std::vector<std::string> names,
                                   std::vector<NodeId> parents);

  std::size_t size() const noexcept { return names_.size(); }
  NodeId root() const noexcept { return 0; }

  const std::string& name(NodeId n) const;
  std::optional<NodeId> find(std::string_view name) const;
  /// Like find() but throws MissingLabel.
  NodeId at(std::string_view name) const;

  NodeId parent(NodeId n) const;
  std::span<const NodeId> children(NodeId n) const;
  std::size_t depth(NodeId n) const;
  bool is_leaf(NodeId n) const;
  bool is_internal(NodeId n) const { return !is_leaf(n); }

  /// True iff a is a strict ancestor of n.
  bool is_ancestor(NodeId a, NodeId n) const;
  /// True iff a == n or a is a strict ancestor of n.
  bool is_ancestor_or_self(NodeId a, NodeId n) const {
    return a == n || is_ancestor(a, n);
  }

  /// Parent first, root last; empty for the root.
  std::vector<NodeId> ancestors(NodeId n) const;

  /// Leaves and internal nodes in ascending id order.
  std::span<const NodeId> leaves() const noexcept { return leaves_; }
  std::span<const NodeId> internal_nodes() const noexcept { return internal_; }

  std::size_t max_depth() const noexcept { return max_depth_; }

  /// Leaves under n (n itself when it is a leaf), ascending.
  std::vector<NodeId> leaves_under(NodeId n) const;

 private:
  TaxonomyTree() = default;
  void check(NodeId n) const;

  std::vector<std::string> names_;
  std::vector<NodeId> parent_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::size_t> depth_;
  // Pre/post DFS order stamps; a is an ancestor-or-self of n iff
  // enter_[a] <= enter_[n] && exit_[n] <= exit_[a].
  std::vector<std::size_t> enter_;
  std::vector<std::size_t> exit_;
  std::vector<NodeId> leaves_;
  std::vector<NodeId> internal_;
  std::unordered_map<std::string, NodeId> index_;
  std::size_t max_depth_ = 0;
};

enum class LabelSetKind { Leaf, NodeCentric, Treecut, Custom };

/// An ordered classification vocabulary over tree nodes. Members are kept in
/// ascending node-id order; the root is never a member.
class LabelSet {
 public:
  LabelSet() = default;
  /// Sorts and deduplicates members. Throws if the root is included.
  LabelSet(const TaxonomyTree& tree, std::vector<NodeId> members,
           LabelSetKind kind = LabelSetKind::Custom, NodeId anchor = kNoNode);

  std::span<const NodeId> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  LabelSetKind kind() const noexcept { return kind_; }
  /// The parent node for node-centric sets, kNoNode otherwise.
  NodeId anchor() const noexcept { return anchor_; }
  bool contains(NodeId n) const;

  /// Member equality, ignoring kind.
  bool same_members(const LabelSet& other) const { return members_ == other.members_; }
  friend bool operator<(const LabelSet& a, const LabelSet& b) { return a.members_ < b.members_; }

 private:
  std::vector<NodeId> members_;
  LabelSetKind kind_ = LabelSetKind::Custom;
  NodeId anchor_ = kNoNode;
};

LabelSet leaf_label_set(const TaxonomyTree& tree);

/// Y_n = Chd(n). Throws NotInternal for leaves.
LabelSet node_label_set(const TaxonomyTree& tree, NodeId n);

/// The unique member of labels that is leaf or one of its ancestors.
/// Throws NotLeaf if leaf is not a leaf and Antichain if two members qualify.
std::optional<NodeId> target_in(const TaxonomyTree& tree, NodeId leaf, const LabelSet& labels);

/// Checks the antichain and full-cover invariants; throws NotTreecut.
void validate_treecut(const TaxonomyTree& tree, const LabelSet& labels);

/// Parses the tab-separated tree document (`name<TAB>parent`, `-` for root).
TaxonomyTree load_tree(std::string_view document);
std::string dump_tree(const TaxonomyTree& tree);

}  // namespace hiercut
