#include "support/ted_oracle.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace testsupport {
namespace {

using mutapath::Node;
using mutapath::NodePtr;

using Forest = std::vector<const Node*>;
using Key = std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>;

std::vector<std::uint64_t> digest_key(const Forest& f) {
  std::vector<std::uint64_t> key;
  key.reserve(f.size() * 2);
  for (const Node* n : f) {
    key.push_back(n->digest().hi);
    key.push_back(n->digest().lo);
  }
  return key;
}

int forest_size(const Forest& f) {
  int total = 0;
  for (const Node* n : f) total += n->size();
  return total;
}

int match_cost(const Node* u, const Node* v) {
  if (u->kind() != v->kind()) return 1 << 20;
  return u->label() == v->label() ? 0 : 1;
}

Forest without_rightmost_root(const Forest& f) {
  Forest out(f.begin(), f.end() - 1);
  for (const NodePtr& c : f.back()->children()) out.push_back(c.get());
  return out;
}

Forest children_forest(const Node* n) {
  Forest out;
  for (const NodePtr& c : n->children()) out.push_back(c.get());
  return out;
}

int dist(const Forest& f, const Forest& g, std::map<Key, int>& memo) {
  if (f.empty()) return forest_size(g);
  if (g.empty()) return forest_size(f);
  const Key key{digest_key(f), digest_key(g)};
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  const Node* u = f.back();
  const Node* v = g.back();
  int best = dist(without_rightmost_root(f), g, memo) + 1;  // delete u
  best = std::min(best, dist(f, without_rightmost_root(g), memo) + 1);  // insert v
  const Forest f_rest(f.begin(), f.end() - 1);
  const Forest g_rest(g.begin(), g.end() - 1);
  best = std::min(best, dist(f_rest, g_rest, memo) + dist(children_forest(u), children_forest(v), memo) +
                            match_cost(u, v));
  memo.emplace(key, best);
  return best;
}

}  // namespace

int ted_oracle(const mutapath::Ast& a, const mutapath::Ast& b) {
  Forest f, g;
  if (a.root) f.push_back(a.root.get());
  if (b.root) g.push_back(b.root.get());
  std::map<Key, int> memo;
  return dist(f, g, memo);
}

}  // namespace testsupport
