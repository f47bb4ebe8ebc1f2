#include "mutapath/search.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace mutapath {
namespace {

std::optional<std::int64_t> parse_int(std::string_view text) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

struct Rec {
  Ast ast;
  int parent;
  MutationApplication app;  // edge leading here; meaningless at the root
  int g;
  int h;
};

struct QEntry {
  std::int64_t f;
  int h;
  std::int64_t seq;
  int rec;
};

struct QLater {
  bool operator()(const QEntry& a, const QEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return a.seq > b.seq;
  }
};

std::vector<MutationApplication> reconstruct(const std::vector<Rec>& arena, int rec) {
  std::vector<MutationApplication> path;
  for (int at = rec; arena[at].parent >= 0; at = arena[at].parent)
    path.push_back(arena[at].app);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::optional<Rational> Rational::parse(std::string_view text) {
  Rational r;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (!num || !den) return std::nullopt;
    r = Rational{*num, *den};
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    auto whole = parse_int(text.substr(0, dot));
    auto frac_digits = frac.empty() ? std::optional<std::int64_t>(0) : parse_int(frac);
    if (!whole || !frac_digits || frac.size() > 9) return std::nullopt;
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    r = Rational{*whole * den + *frac_digits, den};
  } else {
    auto num = parse_int(text);
    if (!num) return std::nullopt;
    r = Rational{*num, 1};
  }
  if (r.num <= 0 || r.den <= 0) return std::nullopt;
  return r;
}

const char* status_name(SearchStatus status) {
  switch (status) {
    case SearchStatus::Full: return "Full";
    case SearchStatus::Partial: return "Partial";
    case SearchStatus::Unreproducible: return "Unreproducible";
  }
  return "?";
}

const char* bug_class_name(BugClass bug_class) {
  switch (bug_class) {
    case BugClass::R: return "R";
    case BugClass::P: return "P";
    case BugClass::U: return "U";
  }
  return "?";
}

BugClass classify(const SearchResult& result) {
  switch (result.status) {
    case SearchStatus::Full: return BugClass::R;
    case SearchStatus::Partial: return BugClass::P;
    case SearchStatus::Unreproducible: return BugClass::U;
  }
  return BugClass::U;
}

SearchResult find_mutation_path(const Ast& fixed, const Ast& buggy, const OperatorSet& opset,
                                const SearchBudget& budget) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  SearchResult result;
  const int d0 = ast_diff(fixed, buggy).distance;
  result.initial_diff = d0;
  if (d0 == 0) {
    result.status = SearchStatus::Full;
    result.remaining_diff = 0;
    result.progress = 1.0;
    result.wall_time_seconds = elapsed();
    return result;
  }

  const CandidatePool pool = build_pool(fixed, buggy);
  const Rational scale = budget.heuristic_scale;
  auto scaled = [&](int h) {
    return (static_cast<std::int64_t>(h) * scale.den + scale.num - 1) / scale.num;
  };

  std::vector<Rec> arena;
  std::priority_queue<QEntry, std::vector<QEntry>, QLater> open;
  // Smallest g at which each state was pushed; also serves as the closed set
  // (a popped entry with a larger g than recorded here is stale).
  std::unordered_map<Digest, int, DigestHash> best_g;

  arena.push_back(Rec{fixed, -1, {}, 0, d0});
  best_g.emplace(canonical_hash(fixed), 0);
  std::int64_t seq = 0;
  open.push(QEntry{scaled(d0), d0, seq++, 0});

  int best_rec = 0;  // smallest h, ties to smaller g, then to creation order
  std::int64_t expansions = 0;
  int goal_rec = -1;

  while (!open.empty()) {
    const QEntry top = open.top();
    open.pop();
    const int cur_idx = top.rec;
    if (best_g.at(canonical_hash(arena[cur_idx].ast)) < arena[cur_idx].g) continue;
    if (arena[cur_idx].h == 0) {
      goal_rec = cur_idx;
      break;
    }
    if (expansions >= budget.max_expansions) break;
    if (elapsed() > budget.time_limit_seconds) break;
    ++expansions;

    const Ast cur_ast = arena[cur_idx].ast;
    const int g2 = arena[cur_idx].g + 1;
    for (MutationApplication& app : enumerate_applications(opset, cur_ast, pool)) {
      Ast succ = apply(cur_ast, app);
      auto [slot, fresh] = best_g.try_emplace(canonical_hash(succ), g2);
      if (!fresh) {
        if (slot->second <= g2) continue;
        slot->second = g2;  // rediscovered strictly cheaper: reopen
      }
      const int h2 = ast_diff(succ, buggy).distance;
      const int idx = static_cast<int>(arena.size());
      arena.push_back(Rec{std::move(succ), cur_idx, std::move(app), g2, h2});
      open.push(QEntry{g2 + scaled(h2), h2, seq++, idx});
      if (h2 < arena[best_rec].h || (h2 == arena[best_rec].h && g2 < arena[best_rec].g))
        best_rec = idx;
    }
    if (static_cast<std::int64_t>(open.size()) > budget.max_frontier) break;
  }

  if (goal_rec >= 0) {
    result.status = SearchStatus::Full;
    result.path = reconstruct(arena, goal_rec);
    result.remaining_diff = 0;
    result.progress = 1.0;
  } else if (arena[best_rec].h < d0) {
    result.status = SearchStatus::Partial;
    result.path = reconstruct(arena, best_rec);
    result.remaining_diff = arena[best_rec].h;
    result.progress = static_cast<double>(d0 - arena[best_rec].h) / static_cast<double>(d0);
  } else {
    result.status = SearchStatus::Unreproducible;
    result.remaining_diff = d0;
    result.progress = 0.0;
  }
  result.expansions = expansions;
  result.wall_time_seconds = elapsed();
  return result;
}

std::optional<int> bfs_oracle(const Ast& fixed, const Ast& buggy, const OperatorSet& opset,
                              int max_depth, std::int64_t state_cap) {
  const Digest target = canonical_hash(buggy);
  if (canonical_hash(fixed) == target) return 0;
  const CandidatePool pool = build_pool(fixed, buggy);

  std::vector<Ast> frontier{fixed};
  std::unordered_set<Digest, DigestHash> seen{canonical_hash(fixed)};
  std::int64_t states = 1;
  for (int depth = 1; depth <= max_depth; ++depth) {
    std::vector<Ast> next;
    for (const Ast& cur : frontier) {
      for (const MutationApplication& app : enumerate_applications(opset, cur, pool)) {
        Ast succ = apply(cur, app);
        const Digest dg = canonical_hash(succ);
        if (dg == target) return depth;
        if (!seen.insert(dg).second) continue;
        if (++states > state_cap)
          throw OracleExhaustedError("exhaustive search exceeded its state cap");
        next.push_back(std::move(succ));
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return std::nullopt;
}

}  // namespace mutapath
