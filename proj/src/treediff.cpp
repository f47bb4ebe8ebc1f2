#include "mutapath/treediff.hpp"

#include <algorithm>
#include <cassert>
#include <memory>
#include <utility>

namespace mutapath {
namespace {

// Larger than any reachable distance; forbids matching nodes of different
// kinds without risking overflow in the DP sums.
constexpr int kForbid = 1 << 29;

// Postorder flattening of one tree. lmd is the classic "leftmost leaf
// descendant" array; keyroots are the highest node for each distinct lmd.
struct Flat {
  std::vector<const Node*> post;
  std::vector<int> lmd;
  std::vector<int> parent;
  std::vector<int> pre_to_post;  // postorder ids in preorder sequence
  std::vector<int> keyroots;

  int size() const { return static_cast<int>(post.size()); }

  void clear() {
    post.clear();
    lmd.clear();
    parent.clear();
    pre_to_post.clear();
    keyroots.clear();
  }
};

int flatten_rec(const Node* n, Flat& f) {
  std::size_t pre_slot = f.pre_to_post.size();
  f.pre_to_post.push_back(-1);
  int first_lmd = -1;
  int first_child = static_cast<int>(f.post.size());
  std::vector<int> child_ids;
  child_ids.reserve(n->children().size());
  for (const NodePtr& c : n->children()) {
    int id = flatten_rec(c.get(), f);
    child_ids.push_back(id);
  }
  if (!child_ids.empty()) first_lmd = f.lmd[first_child];
  int my = static_cast<int>(f.post.size());
  f.post.push_back(n);
  f.lmd.push_back(first_lmd == -1 ? my : first_lmd);
  f.parent.push_back(-1);
  for (int id : child_ids) f.parent[id] = my;
  f.pre_to_post[pre_slot] = my;
  return my;
}

void flatten(const Node* root, Flat& f) {
  f.clear();
  if (!root) return;
  flatten_rec(root, f);
  std::vector<int> highest(f.size(), -1);
  for (int i = 0; i < f.size(); ++i) highest[f.lmd[i]] = i;
  for (int i = 0; i < f.size(); ++i) {
    if (highest[f.lmd[i]] == i) f.keyroots.push_back(i);
  }
}

int relabel_cost(const Node* x, const Node* y) {
  if (x->kind() != y->kind()) return kForbid;
  return x->label() == y->label() ? 0 : 1;
}

// Fills the forest-distance band for subtree pair (i, j) and records tree
// distances for every whole-subtree prefix pair inside the band. fd rows are
// (i-li+2) x (j-lj+2) with index 0 meaning the empty prefix.
void forest_dist(const Flat& A, const Flat& B, int i, int j, std::vector<int>& td,
                 std::vector<int>& fd) {
  const int m = B.size();
  const int li = A.lmd[i], lj = B.lmd[j];
  const int w = j - lj + 2;
  fd.resize(static_cast<std::size_t>(i - li + 2) * w);
  auto FD = [&](int x, int y) -> int& { return fd[static_cast<std::size_t>(x) * w + y]; };
  FD(0, 0) = 0;
  for (int di = li; di <= i; ++di) FD(di - li + 1, 0) = FD(di - li, 0) + 1;
  for (int dj = lj; dj <= j; ++dj) FD(0, dj - lj + 1) = FD(0, dj - lj) + 1;
  for (int di = li; di <= i; ++di) {
    for (int dj = lj; dj <= j; ++dj) {
      const int x = di - li + 1, y = dj - lj + 1;
      const int del = FD(x - 1, y) + 1;
      const int ins = FD(x, y - 1) + 1;
      int best;
      if (A.lmd[di] == li && B.lmd[dj] == lj) {
        const int match = FD(x - 1, y - 1) + relabel_cost(A.post[di], B.post[dj]);
        best = std::min({del, ins, match});
        td[static_cast<std::size_t>(di) * m + dj] = best;
      } else {
        const int sub =
            FD(A.lmd[di] - li, B.lmd[dj] - lj) + td[static_cast<std::size_t>(di) * m + dj];
        best = std::min({del, ins, sub});
      }
      FD(x, y) = best;
    }
  }
}

// Walks the DP back from the root pair and returns the optimal mapping as
// (a postorder id, b postorder id) pairs. Matched nodes always share a kind.
std::vector<std::pair<int, int>> extract_mapping(const Flat& A, const Flat& B,
                                                 std::vector<int>& td) {
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::pair<int, int>> stack{{A.size() - 1, B.size() - 1}};
  std::vector<int> fd;
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    const int li = A.lmd[i], lj = B.lmd[j];
    const int w = j - lj + 2;
    forest_dist(A, B, i, j, td, fd);
    int di = i, dj = j;
    while (di >= li || dj >= lj) {
      const int x = di >= li ? di - li + 1 : 0;
      const int y = dj >= lj ? dj - lj + 1 : 0;
      auto FD = [&](int a_, int b_) { return fd[static_cast<std::size_t>(a_) * w + b_]; };
      if (di >= li && FD(x, y) == FD(x - 1, y) + 1) {
        --di;
      } else if (dj >= lj && FD(x, y) == FD(x, y - 1) + 1) {
        --dj;
      } else if (A.lmd[di] == li && B.lmd[dj] == lj) {
        assert(A.post[di]->kind() == B.post[dj]->kind());
        pairs.emplace_back(di, dj);
        --di;
        --dj;
      } else {
        assert(FD(x, y) == FD(A.lmd[di] - li, B.lmd[dj] - lj) +
                               td[static_cast<std::size_t>(di) * m + dj]);
        stack.emplace_back(di, dj);
        di = A.lmd[di] - 1;
        dj = B.lmd[dj] - 1;
      }
    }
  }
  return pairs;
}

// Mutable working tree used for script generation and replay. A synthetic
// holder node keeps the forest of top-level trees; op sites index through it.
struct WNode {
  NodeKind kind = NodeKind::Program;
  std::string label;
  int b_id = -1;
  WNode* parent = nullptr;
  std::vector<std::unique_ptr<WNode>> ch;
};

std::unique_ptr<WNode> build_work(const Node* n, std::vector<WNode*>* by_post) {
  auto w = std::make_unique<WNode>();
  w->kind = n->kind();
  w->label = n->label();
  for (const NodePtr& c : n->children()) {
    auto cw = build_work(c.get(), by_post);
    cw->parent = w.get();
    w->ch.push_back(std::move(cw));
  }
  if (by_post) by_post->push_back(w.get());
  return w;
}

int index_in_parent(const WNode* w) {
  const auto& sibs = w->parent->ch;
  for (std::size_t i = 0; i < sibs.size(); ++i) {
    if (sibs[i].get() == w) return static_cast<int>(i);
  }
  assert(false);
  return -1;
}

std::vector<int> path_of(const WNode* w, const WNode* holder) {
  std::vector<int> path;
  while (w != holder) {
    path.push_back(index_in_parent(w));
    w = w->parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

void splice_out(WNode* w) {
  WNode* p = w->parent;
  int at = index_in_parent(w);
  std::vector<std::unique_ptr<WNode>> grab;
  grab.swap(w->ch);
  for (auto& g : grab) g->parent = p;
  auto it = p->ch.begin() + at;
  it = p->ch.erase(it);
  p->ch.insert(it, std::make_move_iterator(grab.begin()), std::make_move_iterator(grab.end()));
}

WNode* first_unmatched(WNode* w, const WNode* holder) {
  if (w != holder && w->b_id < 0) return w;
  for (auto& c : w->ch) {
    if (WNode* hit = first_unmatched(c.get(), holder)) return hit;
  }
  return nullptr;
}

NodePtr freeze(const WNode* w) {
  std::vector<NodePtr> children;
  children.reserve(w->ch.size());
  for (const auto& c : w->ch) children.push_back(freeze(c.get()));
  return Node::make(w->kind, w->label, std::move(children));
}

bool work_equals(const WNode* w, const Node* n) {
  if (w->kind != n->kind() || w->label != n->label()) return false;
  if (w->ch.size() != n->children().size()) return false;
  for (std::size_t i = 0; i < w->ch.size(); ++i) {
    if (!work_equals(w->ch[i].get(), n->child(i).get())) return false;
  }
  return true;
}

// Turns the optimal mapping into a sequential script: relabels first (paths
// are stable while the structure is untouched), then deletes of unmatched
// source nodes, then inserts of unmatched target nodes in target preorder.
std::vector<EditOp> build_script(const Ast& a, const Ast& b, const Flat& A, const Flat& B,
                                 const std::vector<std::pair<int, int>>& mapping) {
  std::vector<EditOp> ops;
  WNode holder;
  holder.b_id = -2;
  std::vector<WNode*> by_post;
  if (a.root) {
    auto root = build_work(a.root.get(), &by_post);
    root->parent = &holder;
    holder.ch.push_back(std::move(root));
  }

  std::vector<int> a_match(A.size(), -1);
  std::vector<WNode*> by_b(static_cast<std::size_t>(B.size()), nullptr);
  for (auto [ai, bi] : mapping) {
    a_match[ai] = bi;
    by_post[ai]->b_id = bi;
    by_b[bi] = by_post[ai];
  }

  for (int ai = 0; ai < A.size(); ++ai) {
    int bi = a_match[ai];
    if (bi < 0) continue;
    const std::string& want = B.post[bi]->label();
    if (by_post[ai]->label != want) {
      ops.push_back(EditOp{EditOp::Kind::Relabel, path_of(by_post[ai], &holder),
                           by_post[ai]->kind, want, 0});
      by_post[ai]->label = want;
    }
  }

  while (WNode* w = first_unmatched(&holder, &holder)) {
    ops.push_back(EditOp{EditOp::Kind::Delete, path_of(w, &holder), w->kind, "", 0});
    splice_out(w);
  }

  for (int v : B.pre_to_post) {
    if (by_b[v]) continue;
    const int pv = B.parent[v];
    WNode* P = pv < 0 ? &holder : by_b[pv];
    assert(P != nullptr);
    const int lv = B.lmd[v];
    int pos = -1, take = 0;
    for (std::size_t idx = 0; idx < P->ch.size(); ++idx) {
      const int bid = P->ch[idx]->b_id;
      if (bid >= lv && bid < v) {
        if (pos < 0) pos = static_cast<int>(idx);
        ++take;
      }
    }
    if (pos < 0) {
      pos = 0;
      for (const auto& c : P->ch) {
        if (c->b_id < lv) ++pos;
      }
    }
    const Node* bn = B.post[v];
    std::vector<int> site = path_of(P, &holder);
    site.push_back(pos);
    ops.push_back(EditOp{EditOp::Kind::Insert, site, bn->kind(), bn->label(), take});

    auto nw = std::make_unique<WNode>();
    nw->kind = bn->kind();
    nw->label = bn->label();
    nw->b_id = v;
    nw->parent = P;
    for (int t = 0; t < take; ++t) {
      auto c = std::move(P->ch[pos + t]);
      c->parent = nw.get();
      nw->ch.push_back(std::move(c));
    }
    P->ch.erase(P->ch.begin() + pos, P->ch.begin() + pos + take);
    by_b[v] = nw.get();
    P->ch.insert(P->ch.begin() + pos, std::move(nw));
  }

  if (holder.ch.size() != (b.root ? 1u : 0u) ||
      (b.root && !work_equals(holder.ch[0].get(), b.root.get()))) {
    throw std::logic_error("edit script generation failed to reproduce the target tree");
  }
  return ops;
}

struct Workspace {
  Flat a, b;
  std::vector<int> td;
  NodePtr pinned_b;  // keeps the cached flattening of b alive
  Digest pinned_digest;
};

thread_local Workspace tls;

}  // namespace

const char* edit_op_name(EditOp::Kind kind) {
  switch (kind) {
    case EditOp::Kind::Insert: return "insert";
    case EditOp::Kind::Delete: return "delete";
    case EditOp::Kind::Relabel: return "relabel";
  }
  return "?";
}

DiffResult ast_diff(const Ast& a, const Ast& b, const DiffOptions& options) {
  const std::int64_t n = a.root ? a.root->size() : 0;
  const std::int64_t m = b.root ? b.root->size() : 0;
  if (n * m > options.size_limit) throw SizeLimitError(n * m, options.size_limit);

  DiffResult result;
  if (canonical_hash(a) == canonical_hash(b)) {
    if (options.with_script) result.script.emplace();
    return result;
  }
  if (n == 0 || m == 0) {
    result.distance = static_cast<int>(n + m);
  } else {
    flatten(a.root.get(), tls.a);
    // The search diffs a stream of candidate trees against one fixed target,
    // so the target's flattening is cached by digest.
    if (!tls.pinned_b || tls.pinned_digest != b.root->digest()) {
      flatten(b.root.get(), tls.b);
      tls.pinned_b = b.root;
      tls.pinned_digest = b.root->digest();
    }
    Flat& A = tls.a;
    Flat& B = tls.b;
    tls.td.assign(static_cast<std::size_t>(n) * m, 0);
    std::vector<int> fd;
    for (int i : A.keyroots) {
      for (int j : B.keyroots) forest_dist(A, B, i, j, tls.td, fd);
    }
    result.distance = tls.td[static_cast<std::size_t>(n) * m - 1];
  }

  if (options.with_script) {
    Flat A, B;
    flatten(a.root.get(), A);
    flatten(b.root.get(), B);
    std::vector<std::pair<int, int>> mapping;
    if (n > 0 && m > 0) {
      std::vector<int> td(static_cast<std::size_t>(n) * m, 0);
      std::vector<int> fd;
      for (int i : A.keyroots) {
        for (int j : B.keyroots) forest_dist(A, B, i, j, td, fd);
      }
      mapping = extract_mapping(A, B, td);
    }
    result.script = build_script(a, b, A, B, mapping);
    if (static_cast<int>(result.script->size()) != result.distance) {
      throw std::logic_error("edit script length disagrees with computed distance");
    }
  }
  return result;
}

Ast replay(const std::vector<EditOp>& script, const Ast& a) {
  WNode holder;
  holder.b_id = -2;
  if (a.root) {
    auto root = build_work(a.root.get(), nullptr);
    root->parent = &holder;
    holder.ch.push_back(std::move(root));
  }

  auto resolve = [&](const std::vector<int>& site, std::size_t depth) -> WNode* {
    WNode* w = &holder;
    for (std::size_t i = 0; i < depth; ++i) {
      int idx = site[i];
      if (idx < 0 || idx >= static_cast<int>(w->ch.size()))
        throw InvalidScriptError("site leaves the tree");
      w = w->ch[idx].get();
    }
    return w;
  };

  for (const EditOp& op : script) {
    switch (op.kind) {
      case EditOp::Kind::Relabel: {
        if (op.site.empty()) throw InvalidScriptError("relabel at the forest holder");
        WNode* w = resolve(op.site, op.site.size());
        w->label = op.label;
        break;
      }
      case EditOp::Kind::Delete: {
        if (op.site.empty()) throw InvalidScriptError("delete at the forest holder");
        WNode* w = resolve(op.site, op.site.size());
        splice_out(w);
        break;
      }
      case EditOp::Kind::Insert: {
        if (op.site.empty()) throw InvalidScriptError("insert without a position");
        WNode* P = resolve(op.site, op.site.size() - 1);
        const int pos = op.site.back();
        if (pos < 0 || pos > static_cast<int>(P->ch.size()))
          throw InvalidScriptError("insert position out of range");
        if (op.take_count < 0 || pos + op.take_count > static_cast<int>(P->ch.size()))
          throw InvalidScriptError("insert adopts more children than exist");
        auto nw = std::make_unique<WNode>();
        nw->kind = op.node_kind;
        nw->label = op.label;
        nw->parent = P;
        for (int t = 0; t < op.take_count; ++t) {
          auto c = std::move(P->ch[pos + t]);
          c->parent = nw.get();
          nw->ch.push_back(std::move(c));
        }
        P->ch.erase(P->ch.begin() + pos, P->ch.begin() + pos + op.take_count);
        P->ch.insert(P->ch.begin() + pos, std::move(nw));
        break;
      }
    }
  }
  if (holder.ch.size() != 1) throw InvalidScriptError("script does not end in a single tree");
  return Ast{freeze(holder.ch[0].get())};
}

}  // namespace mutapath
