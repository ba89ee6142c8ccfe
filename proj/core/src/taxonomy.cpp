#include "hiercut/taxonomy.hpp"

#include <algorithm>
#include <sstream>

#include "hiercut/error.hpp"

namespace hiercut {

namespace {

void check_name(std::string_view name, std::size_t line) {
  if (name.empty()) {
    throw Error(ErrorCode::Parse, "empty node name at record " + std::to_string(line));
  }
  if (name.find_first_of("\t\r\n") != std::string_view::npos) {
    throw Error(ErrorCode::Parse, "node name contains a control separator at record " +
                                      std::to_string(line));
  }
}

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

TaxonomyTree TaxonomyTree::from_records(std::span<const Record> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyDocument, "tree has no nodes");

  std::vector<std::string> names;
  std::vector<NodeId> parents;
  std::unordered_map<std::string, NodeId> seen;
  names.reserve(records.size());
  parents.reserve(records.size());

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    check_name(rec.name, i + 1);
    if (seen.contains(rec.name)) {
      throw Error(ErrorCode::DuplicateName, "duplicate node name '" + rec.name + "'");
    }
    NodeId parent = kNoNode;
    if (rec.parent) {
      if (*rec.parent == rec.name) {
        throw Error(ErrorCode::Cycle, "node '" + rec.name + "' is its own parent");
      }
      auto it = seen.find(*rec.parent);
      if (it == seen.end()) {
        throw Error(ErrorCode::BadParent, "parent '" + *rec.parent + "' of '" + rec.name +
                                              "' is missing or appears later");
      }
      parent = it->second;
    }
    seen.emplace(rec.name, i);
    names.push_back(rec.name);
    parents.push_back(parent);
  }
  return from_parents(std::move(names), std::move(parents));
}

TaxonomyTree TaxonomyTree::from_parents(std::vector<std::string> names,
                                        std::vector<NodeId> parents) {
  const std::size_t n = names.size();
  if (n == 0) throw Error(ErrorCode::EmptyDocument, "tree has no nodes");
  if (parents.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "names and parents differ in length");
  }

  TaxonomyTree t;
  for (std::size_t i = 0; i < n; ++i) {
    check_name(names[i], i + 1);
    if (!t.index_.emplace(names[i], i).second) {
      throw Error(ErrorCode::DuplicateName, "duplicate node name '" + names[i] + "'");
    }
  }

  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (parents[i] == kNoNode) {
      ++roots;
    } else if (parents[i] >= n) {
      throw Error(ErrorCode::BadParent, "parent index out of range for '" + names[i] + "'");
    }
  }
  if (roots == 0) throw Error(ErrorCode::NoRoot, "no root node (every node has a parent)");
  if (roots > 1) throw Error(ErrorCode::MultipleRoots, std::to_string(roots) + " root nodes");

  // A walk longer than n parent hops must revisit a node.
  for (std::size_t i = 0; i < n; ++i) {
    NodeId cur = i;
    for (std::size_t hops = 0; cur != kNoNode; ++hops) {
      if (hops > n) throw Error(ErrorCode::Cycle, "cycle through '" + names[i] + "'");
      cur = parents[cur];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (parents[i] != kNoNode && parents[i] > i) {
      throw Error(ErrorCode::BadParent,
                  "parent of '" + names[i] + "' appears after it (order must be topological)");
    }
  }
  if (n == 1) throw Error(ErrorCode::RootOnly, "root-only tree has no leaves");

  t.names_ = std::move(names);
  t.parent_ = std::move(parents);
  t.children_.assign(n, {});
  t.depth_.assign(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    t.children_[t.parent_[i]].push_back(i);
    t.depth_[i] = t.depth_[t.parent_[i]] + 1;
    t.max_depth_ = std::max(t.max_depth_, t.depth_[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    (t.children_[i].empty() ? t.leaves_ : t.internal_).push_back(i);
  }

  t.enter_.assign(n, 0);
  t.exit_.assign(n, 0);
  std::size_t clock = 0;
  std::vector<std::pair<NodeId, std::size_t>> stack{{0, 0}};
  t.enter_[0] = clock++;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < t.children_[node].size()) {
      NodeId child = t.children_[node][next++];
      t.enter_[child] = clock++;
      stack.emplace_back(child, 0);
    } else {
      t.exit_[node] = clock++;
      stack.pop_back();
    }
  }
  return t;
}

void TaxonomyTree::check(NodeId n) const {
  if (n >= names_.size()) {
    throw Error(ErrorCode::OutOfRange, "node index " + std::to_string(n) + " out of range");
  }
}

const std::string& TaxonomyTree::name(NodeId n) const {
  check(n);
  return names_[n];
}

std::optional<NodeId> TaxonomyTree::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId TaxonomyTree::at(std::string_view name) const {
  auto id = find(name);
  if (!id) throw Error(ErrorCode::MissingLabel, "unknown node '" + std::string(name) + "'");
  return *id;
}

NodeId TaxonomyTree::parent(NodeId n) const {
  check(n);
  return parent_[n];
}

std::span<const NodeId> TaxonomyTree::children(NodeId n) const {
  check(n);
  return children_[n];
}

std::size_t TaxonomyTree::depth(NodeId n) const {
  check(n);
  return depth_[n];
}

bool TaxonomyTree::is_leaf(NodeId n) const {
  check(n);
  return children_[n].empty();
}

bool TaxonomyTree::is_ancestor(NodeId a, NodeId n) const {
  check(a);
  check(n);
  return a != n && enter_[a] <= enter_[n] && exit_[n] <= exit_[a];
}

std::vector<NodeId> TaxonomyTree::ancestors(NodeId n) const {
  check(n);
  std::vector<NodeId> out;
  out.reserve(depth_[n]);
  for (NodeId cur = parent_[n]; cur != kNoNode; cur = parent_[cur]) out.push_back(cur);
  return out;
}

std::vector<NodeId> TaxonomyTree::leaves_under(NodeId n) const {
  check(n);
  std::vector<NodeId> out;
  for (NodeId leaf : leaves_) {
    if (enter_[n] <= enter_[leaf] && exit_[leaf] <= exit_[n]) out.push_back(leaf);
  }
  return out;
}

LabelSet::LabelSet(const TaxonomyTree& tree, std::vector<NodeId> members, LabelSetKind kind,
                   NodeId anchor)
    : members_(std::move(members)), kind_(kind), anchor_(anchor) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (NodeId m : members_) {
    if (m >= tree.size()) {
      throw Error(ErrorCode::OutOfRange, "label member " + std::to_string(m) + " out of range");
    }
    if (m == tree.root()) throw Error(ErrorCode::InvalidArgument, "the root cannot be a label");
  }
}

bool LabelSet::contains(NodeId n) const {
  return std::binary_search(members_.begin(), members_.end(), n);
}

LabelSet leaf_label_set(const TaxonomyTree& tree) {
  auto leaves = tree.leaves();
  return LabelSet(tree, {leaves.begin(), leaves.end()}, LabelSetKind::Leaf);
}

LabelSet node_label_set(const TaxonomyTree& tree, NodeId n) {
  if (tree.is_leaf(n)) {
    throw Error(ErrorCode::NotInternal, "node '" + tree.name(n) + "' is a leaf");
  }
  auto kids = tree.children(n);
  return LabelSet(tree, {kids.begin(), kids.end()}, LabelSetKind::NodeCentric, n);
}

std::optional<NodeId> target_in(const TaxonomyTree& tree, NodeId leaf, const LabelSet& labels) {
  if (!tree.is_leaf(leaf)) {
    throw Error(ErrorCode::NotLeaf, "node '" + tree.name(leaf) + "' is not a leaf");
  }
  std::optional<NodeId> found;
  for (NodeId cur = leaf; cur != kNoNode; cur = tree.parent(cur)) {
    if (!labels.contains(cur)) continue;
    if (found) {
      throw Error(ErrorCode::Antichain, "labels '" + tree.name(*found) + "' and '" +
                                            tree.name(cur) + "' are on one root path");
    }
    found = cur;
  }
  return found;
}

void validate_treecut(const TaxonomyTree& tree, const LabelSet& labels) {
  for (NodeId leaf : tree.leaves()) {
    std::size_t hits = 0;
    for (NodeId cur = leaf; cur != kNoNode; cur = tree.parent(cur)) {
      hits += labels.contains(cur) ? 1 : 0;
    }
    if (hits != 1) {
      throw Error(ErrorCode::NotTreecut,
                  "leaf '" + tree.name(leaf) + "' is covered by " + std::to_string(hits) +
                      " labels (treecuts need exactly one)");
    }
  }
  // Full cover plus single hits rules out members that are no leaf's
  // ancestor, which cannot exist in a tree, so the check above suffices.
}

TaxonomyTree load_tree(std::string_view document) {
  std::vector<TaxonomyTree::Record> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= document.size()) {
    std::size_t end = document.find('\n', pos);
    if (end == std::string_view::npos) end = document.size();
    std::string_view line = trim_cr(document.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
      throw Error(ErrorCode::Parse,
                  "line " + std::to_string(line_no) + ": expected name<TAB>parent");
    }
    TaxonomyTree::Record rec;
    rec.name = std::string(line.substr(0, tab));
    std::string_view parent = line.substr(tab + 1);
    if (parent.empty()) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": empty parent field");
    }
    if (parent != "-") rec.parent = std::string(parent);
    records.push_back(std::move(rec));
  }
  return TaxonomyTree::from_records(records);
}

std::string dump_tree(const TaxonomyTree& tree) {
  std::ostringstream out;
  for (NodeId n = 0; n < tree.size(); ++n) {
    out << tree.name(n) << '\t';
    if (n == tree.root()) {
      out << '-';
    } else {
      out << tree.name(tree.parent(n));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace hiercut
