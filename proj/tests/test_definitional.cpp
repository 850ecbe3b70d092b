#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "seqmech/seqmech.hpp"
#include "support/oracles.hpp"

using namespace seqmech;
using testsupport::load_sample;

TEST_CASE("constant choice passes every notion on its direct mechanism") {
  const Environment env = load_sample("env-const.json");
  const DirectMechanism direct = build_direct_mechanism(env);
  for (Notion id : all_notions()) {
    const DefinitionalResult result =
        check_definitional(id, env, direct.game, direct.strategy);
    INFO(notion_name(id));
    CHECK(result.holds);
    CHECK(result.counterexample.empty());
  }
}

TEST_CASE("the auction's direct mechanism splits the notions") {
  const Environment env = load_sample("env-spa.json");
  const DirectMechanism direct = build_direct_mechanism(env);

  for (Notion id : {Notion::kWd, Notion::kPbe, Notion::kMm}) {
    INFO(notion_name(id));
    CHECK(check_definitional(id, env, direct.game, direct.strategy).holds);
  }

  const DefinitionalResult od =
      check_definitional(Notion::kOd, env, direct.game, direct.strategy);
  CHECK(!od.holds);
  CHECK(od.counterexample ==
        "od: player 'p1' type '3' at label 'announce|p1': worst honest "
        "payoff 0 < payoff 2 reachable via action '1'");

  CHECK(!check_definitional(Notion::kSod, env, direct.game, direct.strategy)
             .holds);
}

TEST_CASE("the synthesized auction game is obviously incentive-proof") {
  const Environment env = load_sample("env-spa.json");
  for (Notion id : {Notion::kOd, Notion::kSod}) {
    const SynthesisResult synth = synthesize_disclosure_game(env, id);
    INFO(notion_name(id));
    CHECK(check_definitional(Notion::kOd, env, synth.game, synth.strategy)
              .holds);
    CHECK(check_definitional(Notion::kSod, env, synth.game, synth.strategy)
              .holds);
    // The stronger property was not bought by weakening the rest.
    for (Notion weaker : {Notion::kWd, Notion::kMm, Notion::kPbe}) {
      CHECK(check_definitional(weaker, env, synth.game, synth.strategy)
                .holds);
    }
  }
}

TEST_CASE("the xor instance keeps its direct mechanism but not obviousness") {
  const Environment env = load_sample("env-xor.json");
  const DirectMechanism direct = build_direct_mechanism(env);
  for (Notion id : {Notion::kWd, Notion::kPbe, Notion::kMm}) {
    INFO(notion_name(id));
    CHECK(check_definitional(id, env, direct.game, direct.strategy).holds);
  }
  for (Notion id : {Notion::kOd, Notion::kSod}) {
    const DefinitionalResult result =
        check_definitional(id, env, direct.game, direct.strategy);
    INFO(notion_name(id));
    CHECK(!result.holds);
    CHECK(!result.counterexample.empty());
  }
}

TEST_CASE("enumeration and reach-set reduction agree") {
  const auto games_for = [](const Environment& env) {
    std::vector<GameDocument> docs;
    const DirectMechanism direct = build_direct_mechanism(env);
    docs.push_back(GameDocument{direct.game, direct.strategy});
    OperatorTable table(env, Notion::kOd);
    if (check_achievable(table).achievable) {
      SynthesisResult synth = synthesize_disclosure_game(env, Notion::kOd);
      docs.push_back(GameDocument{std::move(synth.game),
                                  std::move(synth.strategy)});
    }
    return docs;
  };

  for (const char* name : {"env-const.json", "env-spa.json", "env-xor.json"}) {
    const Environment env = load_sample(name);
    for (const GameDocument& doc : games_for(env)) {
      for (Notion id : all_notions()) {
        const bool full =
            check_definitional(id, env, doc.game, doc.strategy).holds;
        const bool reduced =
            check_reduced(id, env, doc.game, doc.strategy).holds;
        INFO(name << " " << notion_name(id));
        CHECK(full == reduced);
      }
    }
  }

  // Seeded random instances, direct mechanisms only: every player moves at
  // most once along any path, which is the regime the reduction covers.
  for (std::uint64_t seed = 500; seed < 530; ++seed) {
    const Environment env = random_environment(seed);
    const DirectMechanism direct = build_direct_mechanism(env);
    for (Notion id : all_notions()) {
      const bool full =
          check_definitional(id, env, direct.game, direct.strategy).holds;
      const bool reduced =
          check_reduced(id, env, direct.game, direct.strategy).holds;
      INFO("seed " << seed << " " << notion_name(id));
      CHECK(full == reduced);
    }
  }
}

TEST_CASE("revealing everything never hurts a dominance notion") {
  const auto still_holds = [](const Environment& env, const GameTree& game,
                              const StrategyProfile& strategy, Notion id) {
    if (!check_definitional(id, env, game, strategy).holds) return true;
    const GameDocument erased = erase_information(env, game, strategy);
    return check_definitional(id, env, erased.game, erased.strategy).holds;
  };

  const Environment cst = load_sample("env-const.json");
  const DirectMechanism cdirect = build_direct_mechanism(cst);
  for (Notion id : {Notion::kWd, Notion::kOd, Notion::kSod}) {
    CHECK(still_holds(cst, cdirect.game, cdirect.strategy, id));
  }

  const Environment spa = load_sample("env-spa.json");
  const SynthesisResult synth = synthesize_disclosure_game(spa, Notion::kOd);
  for (Notion id : {Notion::kWd, Notion::kOd, Notion::kSod}) {
    CHECK(still_holds(spa, synth.game, synth.strategy, id));
  }
  const DirectMechanism sdirect = build_direct_mechanism(spa);
  for (Notion id : {Notion::kWd, Notion::kOd, Notion::kSod}) {
    CHECK(still_holds(spa, sdirect.game, sdirect.strategy, id));
  }

  for (std::uint64_t seed = 600; seed < 620; ++seed) {
    const Environment env = random_environment(seed);
    const DirectMechanism direct = build_direct_mechanism(env);
    for (Notion id : {Notion::kWd, Notion::kOd, Notion::kSod}) {
      INFO("seed " << seed << " " << notion_name(id));
      CHECK(still_holds(env, direct.game, direct.strategy, id));
    }
  }
}

TEST_CASE("resource limits are enforced, not silently crossed") {
  const Environment env = load_sample("env-spa.json");
  const DirectMechanism direct = build_direct_mechanism(env);

  DefinitionalLimits tiny_mass;
  tiny_mass.max_action_mass = 1;
  CHECK_THROWS_AS(check_definitional(Notion::kOd, env, direct.game,
                                     direct.strategy, tiny_mass),
                  LimitExceededError);

  DefinitionalLimits tiny_visits;
  tiny_visits.max_visits = 1;
  CHECK_THROWS_AS(check_definitional(Notion::kOd, env, direct.game,
                                     direct.strategy, tiny_visits),
                  LimitExceededError);
}
