#include "mutapath/corpus.hpp"

#include "mutapath/parser.hpp"

#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "json.hpp"

namespace mutapath {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("cannot read " + path.string());
  return std::move(buf).str();
}

void load_side(const std::filesystem::path& path, std::optional<Ast>& slot, PairSpec& spec) {
  try {
    slot = parse(read_file(path));
  } catch (const std::exception& e) {
    spec.excluded = true;
    if (!spec.exclude_reason.empty()) spec.exclude_reason += "; ";
    spec.exclude_reason += e.what();
  }
}

struct SplitMix {
  std::uint64_t state;

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n); rejection keeps it unbiased.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }
};

PairResult run_pair(const PairSpec& spec, const OperatorSet& opset, const SearchBudget& budget) {
  PairResult r;
  r.id = spec.id;
  r.project = spec.project;
  r.opset = opset.name;
  if (spec.excluded || !spec.fixed || !spec.buggy) {
    r.excluded = true;
    return r;
  }
  try {
    const SearchResult s = find_mutation_path(*spec.fixed, *spec.buggy, opset, budget);
    r.status = classify(s);
    r.k = static_cast<int>(s.path.size());
    r.initial_diff = s.initial_diff;
    r.remaining_diff = s.remaining_diff;
    r.progress = s.progress;
    r.expansions = s.expansions;
    for (const MutationApplication& app : s.path) ++r.operator_usage[operator_name(app.op)];
  } catch (const SizeLimitError&) {
    r = PairResult{};
    r.id = spec.id;
    r.project = spec.project;
    r.opset = opset.name;
    r.excluded = true;
  }
  return r;
}

}  // namespace

CorpusManifest load_manifest(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ManifestError(e.what());
  }
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ManifestError("manifest is not valid JSON: " + path.string());
  if (!doc.is_object() || !doc.contains("project") || !doc["project"].is_string() ||
      !doc.contains("pairs") || !doc["pairs"].is_array())
    throw ManifestError("manifest must be an object with 'project' and 'pairs'");

  CorpusManifest manifest;
  manifest.project = doc["project"].get<std::string>();
  for (const auto& [key, value] : doc.items()) {
    if (key == "project" || key == "pairs") continue;
    if (value.is_string()) manifest.metadata.emplace(key, value.get<std::string>());
  }

  const std::filesystem::path base =
      path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::set<std::string> ids;
  for (const auto& item : doc["pairs"]) {
    if (!item.is_object() || !item.contains("id") || !item["id"].is_string() ||
        !item.contains("fixed") || !item["fixed"].is_string() || !item.contains("buggy") ||
        !item["buggy"].is_string())
      throw ManifestError("each pair needs string fields 'id', 'fixed' and 'buggy'");
    PairSpec spec;
    spec.id = item["id"].get<std::string>();
    if (!ids.insert(spec.id).second) throw ManifestError("duplicate pair id: " + spec.id);
    spec.project = manifest.project;
    spec.fixed_path = base / item["fixed"].get<std::string>();
    spec.buggy_path = base / item["buggy"].get<std::string>();
    load_side(spec.fixed_path, spec.fixed, spec);
    load_side(spec.buggy_path, spec.buggy, spec);
    manifest.pairs.push_back(std::move(spec));
  }
  return manifest;
}

SeededBug seed_bug(const Ast& fixed, int k, std::uint64_t seed, const OperatorSet& opset) {
  SeededBug out{fixed, fixed, {}, seed, 0};
  const CandidatePool pool = build_pool(fixed, fixed);
  SplitMix rng{seed};
  std::unordered_set<Digest, DigestHash> seen{canonical_hash(fixed)};

  Ast cur = fixed;
  for (int step = 0; step < k; ++step) {
    std::vector<MutationApplication> apps = enumerate_applications(opset, cur, pool);
    if (apps.empty() && step == 0)
      throw NoSitesError("no mutation operator applies to this program");
    std::optional<Ast> next;
    while (!apps.empty()) {
      const std::size_t pick = rng.bounded(apps.size());
      Ast candidate = apply(cur, apps[pick]);
      if (seen.insert(canonical_hash(candidate)).second) {
        out.truth_path.push_back(std::move(apps[pick]));
        next = std::move(candidate);
        break;
      }
      apps.erase(apps.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    if (!next) break;  // every remaining application cycles: stop short
    cur = std::move(*next);
    out.k = step + 1;
  }
  out.buggy = std::move(cur);
  return out;
}

std::vector<PairResult> run_corpus(const CorpusManifest& manifest, const OperatorSet& opset,
                                   const SearchBudget& budget, int parallelism) {
  std::vector<PairResult> results(manifest.pairs.size());
  std::atomic<std::size_t> cursor{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= manifest.pairs.size()) return;
      results[i] = run_pair(manifest.pairs[i], opset, budget);
    }
  };
  const int workers = std::max(1, parallelism);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return results;
}

}  // namespace mutapath
