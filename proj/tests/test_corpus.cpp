#include "doctest.h"

#include <string>
#include <vector>

#include "mutapath/corpus.hpp"
#include "mutapath/parser.hpp"
#include "mutapath/printer.hpp"
#include "support/program_gen.hpp"
#include "support/temp_dir.hpp"

using namespace mutapath;
using testsupport::TempDir;

namespace {

const char* kTinyFixed = "int f(int a) { return a + 1; }\n";
const char* kTinyBuggy = "int f(int a) { return a - 1; }\n";

void check_equal(const PairResult& a, const PairResult& b) {
  CHECK(a.id == b.id);
  CHECK(a.project == b.project);
  CHECK(a.opset == b.opset);
  CHECK(a.status == b.status);
  CHECK(a.k == b.k);
  CHECK(a.initial_diff == b.initial_diff);
  CHECK(a.remaining_diff == b.remaining_diff);
  CHECK(a.progress == b.progress);
  CHECK(a.operator_usage == b.operator_usage);
  CHECK(a.expansions == b.expansions);
  CHECK(a.wall_time == b.wall_time);
  CHECK(a.excluded == b.excluded);
}

/// Program text large enough that diffing two of them overflows the default
/// size limit: one function with `stmts` assignments of five nodes each.
std::string huge_program(int stmts, const char* last_value) {
  std::string src = "void f(int a) {\n";
  for (int i = 0; i < stmts - 1; ++i) src += "  a = a + 1;\n";
  src += std::string("  a = a + ") + last_value + ";\n}\n";
  return src;
}

SeededBug seed_with_exact_k(const Ast& fixed, int k, const OperatorSet& opset,
                            std::uint64_t first_seed) {
  for (std::uint64_t seed = first_seed; seed < first_seed + 32; ++seed) {
    SeededBug bug = seed_bug(fixed, k, seed, opset);
    if (bug.k == k) return bug;
  }
  REQUIRE(false);
  return seed_bug(fixed, k, first_seed, opset);
}

}  // namespace

TEST_CASE("manifests load pairs in order with paths relative to the manifest") {
  TempDir dir;
  dir.write("fixed_a.mini", kTinyFixed);
  dir.write("buggy_a.mini", kTinyBuggy);
  dir.write("nested/fixed_b.mini", "void g() { p(); }\n");
  dir.write("nested/buggy_b.mini", "void g() { }\n");
  const auto manifest_path = dir.write("manifest.json", R"({
    "project": "demo",
    "revision": "abc123",
    "weight": 3,
    "pairs": [
      {"id": "a", "fixed": "fixed_a.mini", "buggy": "buggy_a.mini"},
      {"id": "b", "fixed": "nested/fixed_b.mini", "buggy": "nested/buggy_b.mini"}
    ]
  })");

  CorpusManifest m = load_manifest(manifest_path);
  CHECK(m.project == "demo");
  REQUIRE(m.pairs.size() == 2);
  CHECK(m.pairs[0].id == "a");
  CHECK(m.pairs[1].id == "b");
  CHECK(m.pairs[0].project == "demo");
  for (const PairSpec& p : m.pairs) {
    CHECK(!p.excluded);
    REQUIRE(p.fixed.has_value());
    REQUIRE(p.buggy.has_value());
  }
  CHECK(canonical_hash(*m.pairs[0].fixed) == canonical_hash(parse(kTinyFixed)));
  // Extra top-level string fields become metadata; non-strings are ignored.
  CHECK(m.metadata == std::map<std::string, std::string>{{"revision", "abc123"}});
}

TEST_CASE("a pair that does not parse is excluded without failing the load") {
  TempDir dir;
  dir.write("fixed_a.mini", kTinyFixed);
  dir.write("buggy_a.mini", "int f( {");
  dir.write("fixed_b.mini", kTinyFixed);
  dir.write("buggy_b.mini", kTinyBuggy);
  const auto manifest_path = dir.write("manifest.json", R"({
    "project": "demo",
    "pairs": [
      {"id": "a", "fixed": "fixed_a.mini", "buggy": "buggy_a.mini"},
      {"id": "b", "fixed": "fixed_b.mini", "buggy": "missing.mini"},
      {"id": "c", "fixed": "fixed_b.mini", "buggy": "buggy_b.mini"}
    ]
  })");

  CorpusManifest m = load_manifest(manifest_path);
  REQUIRE(m.pairs.size() == 3);
  CHECK(m.pairs[0].excluded);
  CHECK(!m.pairs[0].exclude_reason.empty());
  CHECK(m.pairs[1].excluded);  // unreadable file
  CHECK(!m.pairs[2].excluded);
}

TEST_CASE("malformed manifests are rejected") {
  TempDir dir;
  dir.write("f.mini", kTinyFixed);
  dir.write("b.mini", kTinyBuggy);

  auto invalid = dir.write("invalid.json", "{ not json");
  CHECK_THROWS_AS(load_manifest(invalid), ManifestError);

  auto no_project = dir.write("no_project.json", R"({"pairs": []})");
  CHECK_THROWS_AS(load_manifest(no_project), ManifestError);

  auto bad_pairs = dir.write("bad_pairs.json", R"({"project": "x", "pairs": 7})");
  CHECK_THROWS_AS(load_manifest(bad_pairs), ManifestError);

  auto missing_field = dir.write("missing_field.json", R"({
    "project": "x",
    "pairs": [{"id": "a", "fixed": "f.mini"}]
  })");
  CHECK_THROWS_AS(load_manifest(missing_field), ManifestError);

  auto duplicate = dir.write("duplicate.json", R"({
    "project": "x",
    "pairs": [
      {"id": "a", "fixed": "f.mini", "buggy": "b.mini"},
      {"id": "a", "fixed": "f.mini", "buggy": "b.mini"}
    ]
  })");
  CHECK_THROWS_AS(load_manifest(duplicate), ManifestError);

  CHECK_THROWS_AS(load_manifest(dir.path / "does_not_exist.json"), ManifestError);
}

TEST_CASE("seeded bugs are deterministic and replayable") {
  Ast fixed = testsupport::random_program_sized(0xfeedu, 20, 45);
  SeededBug bug1 = seed_bug(fixed, 2, 42, extended_operators());
  SeededBug bug2 = seed_bug(fixed, 2, 42, extended_operators());
  CHECK(canonical_hash(bug1.buggy) == canonical_hash(bug2.buggy));
  REQUIRE(bug1.truth_path.size() == bug2.truth_path.size());
  for (std::size_t i = 0; i < bug1.truth_path.size(); ++i) {
    CHECK(bug1.truth_path[i].op == bug2.truth_path[i].op);
    CHECK(bug1.truth_path[i].site == bug2.truth_path[i].site);
  }

  CHECK(bug1.k == static_cast<int>(bug1.truth_path.size()));
  Ast replayed = fixed;
  for (const MutationApplication& app : bug1.truth_path) replayed = apply(replayed, app);
  CHECK(canonical_hash(replayed) == canonical_hash(bug1.buggy));

  SeededBug other = seed_bug(fixed, 2, 43, extended_operators());
  // Different seeds should usually walk somewhere else; not guaranteed, but
  // with dozens of applications per step a collision would be suspicious.
  CHECK(canonical_hash(other.buggy) != canonical_hash(bug1.buggy));
}

TEST_CASE("seeding fails cleanly when no operator applies") {
  Ast inert = parse("void f() { }");
  CHECK_THROWS_AS(seed_bug(inert, 3, 7, extended_operators()), NoSitesError);
}

TEST_CASE("seeding stops short when every application would revisit a tree") {
  // Increment direction and sign toggling span only four distinct programs,
  // so a ten-step walk must stop after at most three fresh trees.
  Ast fixed = parse("void f(int a) { a++; }");
  SeededBug bug = seed_bug(fixed, 10, 5, pitest_operators());
  CHECK(bug.k >= 1);
  CHECK(bug.k <= 3);
  CHECK(static_cast<int>(bug.truth_path.size()) == bug.k);
  CHECK(canonical_hash(bug.buggy) != canonical_hash(fixed));
}

TEST_CASE("corpus runs produce ordered, reproducible, parallelism-independent results") {
  TempDir dir;
  std::string manifest_json = R"({"project": "seeded", "pairs": [)";
  const int kPairs = 8;
  for (int i = 0; i < kPairs; ++i) {
    Ast fixed = testsupport::random_program_sized(0xabc000u + static_cast<std::uint64_t>(i),
                                                  15, 40);
    SeededBug bug = seed_with_exact_k(fixed, 1 + i % 2, extended_operators(),
                                      0x5000u + static_cast<std::uint64_t>(i));
    const std::string id = "p" + std::to_string(i);
    dir.write(id + "_fixed.mini", pretty_print(fixed));
    dir.write(id + "_buggy.mini", pretty_print(bug.buggy));
    if (i) manifest_json += ", ";
    manifest_json += R"({"id": ")" + id + R"(", "fixed": ")" + id + R"(_fixed.mini", "buggy": ")" +
                     id + R"(_buggy.mini"})";
  }
  dir.write("broken_buggy.mini", "void f( {");
  dir.write("broken_fixed.mini", kTinyFixed);
  manifest_json += R"(, {"id": "broken", "fixed": "broken_fixed.mini", "buggy": "broken_buggy.mini"})";
  dir.write("huge_fixed.mini", huge_program(500, "1"));
  dir.write("huge_buggy.mini", huge_program(500, "2"));
  manifest_json += R"(, {"id": "huge", "fixed": "huge_fixed.mini", "buggy": "huge_buggy.mini"}]})";
  const auto manifest_path = dir.write("manifest.json", manifest_json);

  CorpusManifest m = load_manifest(manifest_path);
  REQUIRE(m.pairs.size() == kPairs + 2);

  SearchBudget budget;
  std::vector<PairResult> serial = run_corpus(m, extended_operators(), budget, 1);
  std::vector<PairResult> parallel = run_corpus(m, extended_operators(), budget, 8);
  REQUIRE(serial.size() == m.pairs.size());
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CAPTURE(i);
    CHECK(serial[i].id == m.pairs[i].id);  // manifest order
    check_equal(serial[i], parallel[i]);
  }

  for (int i = 0; i < kPairs; ++i) {
    const PairResult& r = serial[static_cast<std::size_t>(i)];
    CAPTURE(i);
    REQUIRE(r.status.has_value());
    CHECK(*r.status == BugClass::R);
    CHECK(r.k <= 1 + i % 2);  // never longer than the seeded chain
    CHECK(r.k >= 1);
    std::int64_t used = 0;
    for (const auto& [op, count] : r.operator_usage) used += count;
    CHECK(used == r.k);
    CHECK(r.remaining_diff == 0);
    CHECK(r.progress == doctest::Approx(1.0));
    CHECK(r.wall_time == 0.0);
    CHECK(r.opset == "extended");
  }

  const PairResult& broken = serial[kPairs];
  CHECK(broken.excluded);
  CHECK(!broken.status.has_value());
  CHECK(broken.k == 0);
  CHECK(broken.opset == "extended");

  const PairResult& huge = serial[kPairs + 1];
  CHECK(huge.excluded);  // the exact diff refuses pairs this large
  CHECK(!huge.status.has_value());
  CHECK(huge.expansions == 0);
}
