#include "doctest.h"

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <vector>

#include "mutapath/ast.hpp"
#include "mutapath/parser.hpp"
#include "mutapath/search.hpp"
#include "support/program_gen.hpp"

using namespace mutapath;

namespace {

Ast replay_path(const Ast& start, const std::vector<MutationApplication>& path) {
  Ast cur = start;
  for (const MutationApplication& app : path) cur = apply(cur, app);
  return cur;
}

std::multiset<std::string> op_names(const std::vector<MutationApplication>& path) {
  std::multiset<std::string> names;
  for (const MutationApplication& app : path) names.insert(operator_name(app.op));
  return names;
}

const Ast& two_op_fixed() {
  static const Ast ast = parse("int f(int a, int b) { return a + a; }");
  return ast;
}

const Ast& two_op_buggy() {
  static const Ast ast = parse("int f(int a, int b) { return a - b; }");
  return ast;
}

}  // namespace

TEST_CASE("rational parsing accepts integers, decimals and fractions") {
  auto two = Rational::parse("2");
  REQUIRE(two.has_value());
  CHECK(two->num == 2);
  CHECK(two->den == 1);
  auto dec = Rational::parse("1.5");
  REQUIRE(dec.has_value());
  CHECK(dec->value() == doctest::Approx(1.5));
  auto frac = Rational::parse("3/2");
  REQUIRE(frac.has_value());
  CHECK(frac->num == 3);
  CHECK(frac->den == 2);
  CHECK(!Rational::parse("0").has_value());
  CHECK(!Rational::parse("-1").has_value());
  CHECK(!Rational::parse("x").has_value());
  CHECK(!Rational::parse("1/0").has_value());
  CHECK(!Rational::parse(".5").has_value());
  CHECK(!Rational::parse("1.0000000001").has_value());
}

TEST_CASE("names for statuses and classes are stable") {
  CHECK(std::string(status_name(SearchStatus::Full)) == "Full");
  CHECK(std::string(status_name(SearchStatus::Partial)) == "Partial");
  CHECK(std::string(status_name(SearchStatus::Unreproducible)) == "Unreproducible");
  CHECK(std::string(bug_class_name(BugClass::R)) == "R");
  CHECK(std::string(bug_class_name(BugClass::P)) == "P");
  CHECK(std::string(bug_class_name(BugClass::U)) == "U");
}

TEST_CASE("classification follows the search status") {
  SearchResult r;
  r.status = SearchStatus::Full;
  CHECK(classify(r) == BugClass::R);
  r.status = SearchStatus::Partial;
  CHECK(classify(r) == BugClass::P);
  r.status = SearchStatus::Unreproducible;
  CHECK(classify(r) == BugClass::U);
}

TEST_CASE("identical programs are fully reproducible with an empty chain") {
  const Ast& fixed = two_op_fixed();
  SearchResult r = find_mutation_path(fixed, fixed, extended_operators());
  CHECK(r.status == SearchStatus::Full);
  CHECK(r.path.empty());
  CHECK(r.initial_diff == 0);
  CHECK(r.remaining_diff == 0);
  CHECK(r.progress == doctest::Approx(1.0));
  CHECK(r.expansions == 0);
}

TEST_CASE("a two-mutation bug is found with the right operators") {
  SearchResult r = find_mutation_path(two_op_fixed(), two_op_buggy(), extended_operators());
  CHECK(r.status == SearchStatus::Full);
  CHECK(r.initial_diff == 2);
  REQUIRE(r.path.size() == 2);
  CHECK(op_names(r.path) == std::multiset<std::string>{"Math", "Rename"});
  CHECK(r.remaining_diff == 0);
  CHECK(r.progress == doctest::Approx(1.0));
  CHECK(canonical_hash(replay_path(two_op_fixed(), r.path)) == canonical_hash(two_op_buggy()));
}

TEST_CASE("an exhausted expansion budget reports the best prefix") {
  SearchBudget tight;
  tight.max_expansions = 1;
  SearchResult r = find_mutation_path(two_op_fixed(), two_op_buggy(), extended_operators(), tight);
  CHECK(r.status == SearchStatus::Partial);
  CHECK(r.expansions == 1);
  REQUIRE(r.path.size() == 1);
  CHECK(r.initial_diff == 2);
  CHECK(r.remaining_diff == 1);
  CHECK(r.progress == doctest::Approx(0.5));
}

TEST_CASE("a bug beyond the operators' reach is partial when part of it matches") {
  // Deleting the g() call is expressible; conjuring an if statement is not.
  Ast fixed = parse("void f() { g(); int a; } void g() { }");
  Ast buggy = parse("void f() { int a; if (a < 1) { a = 2; } } void g() { }");
  SearchResult r = find_mutation_path(fixed, buggy, pitest_operators());
  CHECK(r.status == SearchStatus::Partial);
  REQUIRE(r.path.size() == 1);
  CHECK(std::string(operator_name(r.path[0].op)) == "VoidMethodCalls");

  const Node* if_node = node_at(buggy, std::array{0, 1, 1});
  REQUIRE(if_node != nullptr);
  REQUIRE(if_node->kind() == NodeKind::If);
  CHECK(r.initial_diff == 2 + if_node->size());
  CHECK(r.remaining_diff == if_node->size());
  CHECK(r.progress == doctest::Approx(2.0 / r.initial_diff));
}

TEST_CASE("a bug sharing nothing with the mutation space is unreproducible") {
  Ast fixed = parse("void f() { int a; }");
  Ast buggy = parse("void f() { int a; if (a < 1) { a = 2; } }");
  SearchResult r = find_mutation_path(fixed, buggy, pitest_operators());
  CHECK(r.status == SearchStatus::Unreproducible);
  CHECK(r.path.empty());
  CHECK(r.remaining_diff == r.initial_diff);
  CHECK(r.progress == doctest::Approx(0.0));
  CHECK(classify(r) == BugClass::U);
}

TEST_CASE("search results are deterministic") {
  SearchResult a = find_mutation_path(two_op_fixed(), two_op_buggy(), extended_operators());
  SearchResult b = find_mutation_path(two_op_fixed(), two_op_buggy(), extended_operators());
  CHECK(a.status == b.status);
  CHECK(a.expansions == b.expansions);
  REQUIRE(a.path.size() == b.path.size());
  for (std::size_t i = 0; i < a.path.size(); ++i) {
    CHECK(a.path[i].op == b.path[i].op);
    CHECK(a.path[i].site == b.path[i].site);
    CHECK(a.path[i].expected == b.path[i].expected);
  }
}

TEST_CASE("the exhaustive baseline agrees on small cases") {
  CHECK(bfs_oracle(two_op_fixed(), two_op_fixed(), extended_operators(), 3) == 0);
  CHECK(bfs_oracle(two_op_fixed(), two_op_buggy(), extended_operators(), 3) == 2);
  Ast one_away = parse("int f(int a, int b) { return a * a; }");
  CHECK(bfs_oracle(two_op_fixed(), one_away, extended_operators(), 3) == 1);

  Ast fixed = parse("void f() { int a; }");
  Ast buggy = parse("void f() { int a; if (a < 1) { a = 2; } }");
  CHECK(!bfs_oracle(fixed, buggy, pitest_operators(), 3).has_value());

  CHECK_THROWS_AS(
      bfs_oracle(two_op_fixed(), two_op_buggy(), extended_operators(), 3, /*state_cap=*/5),
      OracleExhaustedError);
}

TEST_CASE("an admissible heuristic scale recovers exact shortest chains") {
  for (std::uint64_t seed : {11u, 23u, 47u}) {
    Ast fixed = testsupport::random_program_sized(seed, 10, 20);
    CandidatePool pool = build_pool(fixed, fixed);
    auto apps1 = enumerate_applications(extended_operators(), fixed, pool);
    REQUIRE(!apps1.empty());
    Ast mid = apply(fixed, apps1[apps1.size() / 3]);
    auto apps2 = enumerate_applications(extended_operators(), mid, pool);
    REQUIRE(!apps2.empty());
    Ast buggy = apply(mid, apps2[apps2.size() / 2]);
    if (canonical_hash(buggy) == canonical_hash(fixed)) continue;

    auto shortest = bfs_oracle(fixed, buggy, extended_operators(), 2);
    REQUIRE(shortest.has_value());

    int max_touched = 1;
    for (const auto& app : enumerate_applications(extended_operators(), fixed,
                                                  build_pool(fixed, buggy)))
      max_touched = std::max(max_touched, app.touched);
    SearchBudget budget;
    budget.heuristic_scale = Rational{max_touched + 4, 1};
    SearchResult r = find_mutation_path(fixed, buggy, extended_operators(), budget);
    CAPTURE(seed);
    CHECK(r.status == SearchStatus::Full);
    CHECK(static_cast<int>(r.path.size()) == *shortest);
    CHECK(canonical_hash(replay_path(fixed, r.path)) == canonical_hash(buggy));
  }
}
