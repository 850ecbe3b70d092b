#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "seqmech/seqmech.hpp"
#include "support/oracles.hpp"

using namespace seqmech;
using testsupport::load_sample;

namespace {

Verdict decide_named(const Environment& env, Notion id) {
  switch (id) {
    case Notion::kWd:
      return decide_sp(env);
    case Notion::kPbe:
      return decide_pbe(env);
    case Notion::kMm:
      return decide_maxmin(env);
    case Notion::kOd:
      return decide_osp(env);
    case Notion::kSod:
      return decide_sosp(env);
  }
  throw InternalError("unhandled notion");
}

}  // namespace

TEST_CASE("frozen verdicts for the three named instances") {
  SECTION("constant choice: everything, in one round") {
    const Environment env = load_sample("env-const.json");
    for (Notion id : all_notions()) {
      const Verdict verdict = decide_named(env, id);
      INFO(notion_name(id));
      CHECK(verdict.implementable);
      CHECK(!verdict.refutation.has_value());
    }
    CHECK(decide_osp(env).rounds == 1);
    CHECK(decide_sosp(env).rounds == 1);
  }

  SECTION("auction: everything, with a forced two-round order") {
    const Environment env = load_sample("env-spa.json");
    for (Notion id : all_notions()) {
      const Verdict verdict = decide_named(env, id);
      INFO(notion_name(id));
      CHECK(verdict.implementable);
    }
    const Verdict osp = decide_osp(env);
    CHECK(osp.rounds == 2);
    REQUIRE(osp.schedule.has_value());
    CHECK(osp.schedule->active_by_round ==
          std::vector<std::vector<PlayerIndex>>{{1}, {0}});
    CHECK(decide_sosp(env).rounds == 2);
  }

  SECTION("xor: pointwise yes, obviously no") {
    const Environment env = load_sample("env-xor.json");
    for (Notion id : {Notion::kWd, Notion::kPbe, Notion::kMm}) {
      INFO(notion_name(id));
      CHECK(decide_named(env, id).implementable);
    }
    for (Notion id : {Notion::kOd, Notion::kSod}) {
      const Verdict verdict = decide_named(env, id);
      INFO(notion_name(id));
      CHECK(!verdict.implementable);
      REQUIRE(verdict.refutation.has_value());
      CHECK(*verdict.refutation ==
            "state (a,a) cannot be separated: fixed point "
            "{(a,a) (a,b) (b,a) (b,b)}; merge forced by player 'p2' at "
            "(a,a) vs (a,b)");
    }
  }
}

TEST_CASE("verdict certificates carry what their route proves") {
  SECTION("positive operator verdict") {
    const Environment env = load_sample("env-spa.json");
    const Verdict verdict = decide_osp(env);
    CHECK(verdict.route == "operator-achievability");
    CHECK(verdict.scope == "all mechanisms");
    CHECK(verdict.table.empty());
    REQUIRE(verdict.synthesis.has_value());
    REQUIRE(verdict.schedule.has_value());
    CHECK(!verdict.fixed_point.has_value());
    CHECK(!verdict.merge.has_value());
    CHECK(!verdict.refutation.has_value());
    // The bundled certificate is independently re-checkable.
    CHECK(check_implements(env, verdict.synthesis->game,
                           verdict.synthesis->strategy));
    CHECK(check_gspc(verdict.synthesis->game, verdict.synthesis->strategy,
                     env.space)
              .ok());
  }

  SECTION("negative operator verdict") {
    const Environment env = load_sample("env-xor.json");
    const Verdict verdict = decide_osp(env);
    CHECK(!verdict.implementable);
    CHECK(!verdict.synthesis.has_value());
    CHECK(!verdict.schedule.has_value());
    REQUIRE(verdict.fixed_point.has_value());
    CHECK(verdict.fixed_point->cell == StateSet::full(env.space));
    REQUIRE(verdict.merge.has_value());
    CHECK(verdict.merge->player == 1);
    CHECK(verdict.merge->honest == env.space.encode({0, 0}));
    CHECK(verdict.merge->deviant == env.space.encode({0, 1}));
  }

  SECTION("inequality verdict carries the full row table") {
    const Environment env = load_sample("env-spa.json");
    for (Notion id : {Notion::kWd, Notion::kPbe, Notion::kMm}) {
      const Verdict verdict = decide_named(env, id);
      INFO(notion_name(id));
      CHECK(verdict.route == "inequality-system");
      CHECK(verdict.table.size() == 4);
      for (const InequalityRow& row : verdict.table) {
        CHECK(row.holds);
      }
    }
    CHECK(decide_pbe(env).scope == "within perfect-recall games");
    CHECK(decide_maxmin(env).scope == "within perfect-recall games");
    CHECK(decide_sp(env).scope == "all mechanisms");
  }
}

TEST_CASE("a tilted prior-weighted system is refused with names") {
  Environment env = load_sample("env-spa.json");
  env.utilities[0][0][static_cast<std::size_t>(
      env.outcome_index("p1-wins-pay-3"))] = Rational(10);
  REQUIRE(env.validate().empty());

  const Verdict verdict = decide_pbe(env);
  CHECK(!verdict.implementable);
  REQUIRE(verdict.refutation.has_value());
  CHECK(*verdict.refutation ==
        "inequality fails: player 'p1' type '1' prefers mimicking type '3'");
  bool found_failing_row = false;
  for (const InequalityRow& row : verdict.table) {
    if (!row.holds) {
      found_failing_row = true;
      CHECK(row.player == 0);
      CHECK(row.honest == 0);
      CHECK(row.deviant == 1);
    }
  }
  CHECK(found_failing_row);
}

TEST_CASE("the belief-weighted verdict refuses to guess a prior") {
  const Environment env = testsupport::make_env(
      {"p1", "p2"}, {{"a", "b"}, {"c", "d"}}, {"x"},
      [](PlayerIndex, TypeIndex, OutcomeIndex) { return Rational(0); },
      [](const std::vector<TypeIndex>&) { return OutcomeIndex{0}; });
  CHECK_THROWS_AS(decide_pbe(env), MissingPriorError);
}

TEST_CASE("the property-driven dispatcher picks the same routes") {
  for (const char* name : {"env-const.json", "env-spa.json", "env-xor.json"}) {
    const Environment env = load_sample(name);
    for (Notion id : all_notions()) {
      const Verdict generic = decide_generic(env, id);
      const Verdict named = decide_named(env, id);
      INFO(name << " " << notion_name(id));
      CHECK(generic.implementable == named.implementable);
      CHECK(generic.route == named.route);
      CHECK(generic.rounds == named.rounds);
    }
  }
}

TEST_CASE("stronger verdicts imply weaker ones") {
  const auto check_env = [](const Environment& env) {
    const bool sosp = decide_sosp(env).implementable;
    const bool osp = decide_osp(env).implementable;
    const bool sp = decide_sp(env).implementable;
    const bool mm = decide_maxmin(env).implementable;
    if (sosp) CHECK(osp);
    if (osp) CHECK(sp);
    if (sp) CHECK(mm);
  };
  for (const char* name : {"env-const.json", "env-spa.json", "env-xor.json"}) {
    check_env(load_sample(name));
  }
  for (std::uint64_t seed = 300; seed < 340; ++seed) {
    INFO("seed " << seed);
    check_env(random_environment(seed));
  }
}
