#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "seqmech/seqmech.hpp"
#include "support/oracles.hpp"

using namespace seqmech;
using testsupport::all_rectangles;
using testsupport::load_sample;
using testsupport::make_env;

namespace {

NotionContext at(const Environment& env, const StateSet& ambient,
                 const StateSet& belief, const StateSet& gamma) {
  return NotionContext{&env, ambient, belief, gamma};
}

NotionContext everywhere(const Environment& env) {
  const StateSet full = StateSet::full(env.space);
  return at(env, full, full, full);
}

}  // namespace

TEST_CASE("constant choice makes every comparison pass") {
  const Environment env = load_sample("env-const.json");
  const StateSet full = StateSet::full(env.space);
  for (Notion id : all_notions()) {
    for (const StateSet& believed : all_rectangles(env.space)) {
      for (StateId theta : full) {
        for (StateId other : full) {
          for (PlayerIndex i = 0; i < env.player_count(); ++i) {
            if (env.space.component(theta, i) ==
                env.space.component(other, i)) {
              continue;
            }
            // Ambient stays full so the states are always inside it; the
            // bundle is the whole space, legal for every notion.
            const NotionContext ctx = at(env, full, believed, full);
            CHECK(eval_notion(id, ctx, theta, other, i));
          }
        }
      }
    }
  }
}

TEST_CASE("auction: the high type is tempted only against the full belief") {
  const Environment env = load_sample("env-spa.json");
  const StateSet full = StateSet::full(env.space);
  const StateId hh = env.space.encode({1, 1});  // (3,3)
  const StateId lh = env.space.encode({0, 1});  // (1,3)

  // Against both opponent types the worst honest payoff 0 loses to the best
  // misreport payoff 2.
  CHECK(!eval_notion(Notion::kOd, everywhere(env), hh, lh, 0));

  // Once the opponent is known to be the high type, min = max = 0.
  const StateSet column = StateSet::rectangle(env.space, {{0, 1}, {1}});
  CHECK(eval_notion(Notion::kOd, at(env, column, column, column), hh, lh, 0));

  // The second player is never tempted at the full set.
  const StateId hl = env.space.encode({1, 0});
  CHECK(eval_notion(Notion::kOd, everywhere(env), hh, hl, 1));
  CHECK(eval_notion(Notion::kOd, everywhere(env), hl, hh, 1));

  // Weak dominance holds for every ordered pair: the rule is truthful.
  for (StateId theta : full) {
    for (StateId other : full) {
      for (PlayerIndex i = 0; i < env.player_count(); ++i) {
        if (env.space.component(theta, i) == env.space.component(other, i)) {
          continue;
        }
        CHECK(eval_notion(Notion::kWd, everywhere(env), theta, other, i));
        CHECK(eval_notion(Notion::kMm, everywhere(env), theta, other, i));
        CHECK(eval_notion(Notion::kPbe, everywhere(env), theta, other, i));
      }
    }
  }
}

TEST_CASE("xor instance: truthful but nowhere obviously so") {
  const Environment env = load_sample("env-xor.json");
  const StateSet full = StateSet::full(env.space);
  for (StateId theta : full) {
    for (StateId other : full) {
      for (PlayerIndex i = 0; i < env.player_count(); ++i) {
        if (env.space.component(theta, i) == env.space.component(other, i)) {
          continue;
        }
        CHECK(eval_notion(Notion::kWd, everywhere(env), theta, other, i));
        CHECK(eval_notion(Notion::kMm, everywhere(env), theta, other, i));
        CHECK(eval_notion(Notion::kPbe, everywhere(env), theta, other, i));
        CHECK(!eval_notion(Notion::kOd, everywhere(env), theta, other, i));
        CHECK(!eval_notion(Notion::kSod, everywhere(env), theta, other, i));
      }
    }
  }
}

TEST_CASE("belief-weighted aggregation uses exact conditional weights") {
  const Environment env = load_sample("env-spa.json");
  // Low type against high misreport: differences are (0-0) and (0-(-2)),
  // each weighted 1/2, so the sum is 1 >= 0.
  const StateId ll = env.space.encode({0, 0});
  const StateId hl = env.space.encode({1, 0});
  CHECK(eval_notion(Notion::kPbe, everywhere(env), ll, hl, 0));

  Environment tilted = load_sample("env-spa.json");
  // Make the high misreport strictly profitable in expectation for the low
  // type: reward the low type when it wins at the high price.
  tilted.utilities[0][0][tilted.outcome_index("p1-wins-pay-3")] = Rational(10);
  CHECK(!eval_notion(Notion::kPbe, everywhere(tilted), ll, hl, 0));
}

TEST_CASE("zero-mass own type holds vacuously under the prior") {
  Environment env = load_sample("env-spa.json");
  std::vector<Rational> prior(4, Rational(0));
  prior[env.space.encode({1, 0})] = Rational(1, 2);
  prior[env.space.encode({1, 1})] = Rational(1, 2);
  env.prior = prior;
  const StateId ll = env.space.encode({0, 0});
  const StateId hl = env.space.encode({1, 0});
  // Player 1's low type has zero marginal: vacuous pass both ways.
  CHECK(eval_notion(Notion::kPbe, everywhere(env), ll, hl, 0));

  Environment no_prior = env;
  no_prior.prior.reset();
  CHECK_THROWS_AS(eval_notion(Notion::kPbe, everywhere(no_prior), ll, hl, 0),
                  MissingPriorError);
}

TEST_CASE("context preconditions are enforced") {
  const Environment env = load_sample("env-spa.json");
  const StateSet full = StateSet::full(env.space);
  const StateId hh = env.space.encode({1, 1});
  const StateId lh = env.space.encode({0, 1});
  const StateSet empty({});

  CHECK_THROWS_AS(eval_notion(Notion::kOd, at(env, empty, full, full), hh, lh, 0),
                  PreconditionError);
  CHECK_THROWS_AS(eval_notion(Notion::kOd, at(env, full, empty, full), hh, lh, 0),
                  PreconditionError);

  const StateSet column = StateSet::rectangle(env.space, {{0, 1}, {1}});
  const StateId hl = env.space.encode({1, 0});
  // hl lies outside the ambient column.
  CHECK_THROWS_AS(
      eval_notion(Notion::kOd, at(env, column, column, column), hh, hl, 0),
      PreconditionError);

  // The strongest notion insists the bundle contain the honest state and
  // stay inside the ambient cell.
  const StateSet other_cell({hl});
  CHECK_THROWS_AS(
      eval_notion(Notion::kSod, at(env, column, column, other_cell), hh, lh, 0),
      PreconditionError);
  CHECK_THROWS_AS(
      eval_notion(Notion::kSod, at(env, column, column, full), hh, lh, 0),
      PreconditionError);
}

TEST_CASE("only the strongest notion reads the bundle") {
  const Environment env = load_sample("env-spa.json");
  const StateSet full = StateSet::full(env.space);
  for (StateId theta : full) {
    for (StateId other : full) {
      for (PlayerIndex i = 0; i < env.player_count(); ++i) {
        if (env.space.component(theta, i) == env.space.component(other, i)) {
          continue;
        }
        for (Notion id :
             {Notion::kPbe, Notion::kWd, Notion::kMm, Notion::kOd}) {
          const bool with_self =
              eval_notion(id, at(env, full, full, StateSet({theta})), theta,
                          other, i);
          const bool with_all =
              eval_notion(id, at(env, full, full, full), theta, other, i);
          CHECK(with_self == with_all);
        }
      }
    }
  }
}

TEST_CASE("the bundle can flip the strongest notion") {
  // One player, three types, outcomes chosen so separating t0 from t1 is
  // fine alone but fails once t2 (with a low payoff under t0's tastes) is
  // bundled with the honest action.
  const Environment env = make_env(
      {"p1"}, {{"t0", "t1", "t2"}}, {"o0", "o1", "o2"},
      [](PlayerIndex, TypeIndex t, OutcomeIndex o) {
        if (t == 0) {
          if (o == 0) return Rational(5);
          if (o == 1) return Rational(3);
          return Rational(2);
        }
        return Rational(0);
      },
      [](const std::vector<TypeIndex>& profile) { return profile[0]; });
  const StateSet full = StateSet::full(env.space);
  const StateId t0 = 0;
  const StateId t1 = 1;
  const StateId t2 = 2;
  CHECK(eval_notion(Notion::kSod, at(env, full, full, StateSet({t0})), t0, t1,
                    0));
  CHECK(!eval_notion(Notion::kSod, at(env, full, full, StateSet({t0, t2})), t0,
                     t1, 0));
}

TEST_CASE("declared properties stay in sync with behavior") {
  SECTION("property table") {
    for (Notion id : all_notions()) {
      const NotionProperties p = properties_of(id);
      CHECK(p.dissectible);
      CHECK(p.normal);
      if (id == Notion::kOd || id == Notion::kSod) {
        CHECK(!p.additive);
        REQUIRE(p.monotonic.has_value());
        CHECK(*p.monotonic);
      } else {
        CHECK(p.additive);
        CHECK(!p.monotonic.has_value());
      }
      CHECK(p.regular == (id != Notion::kSod));
    }
  }

  SECTION("monotonic: failures survive belief growth") {
    for (const char* name : {"env-spa.json", "env-xor.json"}) {
      const Environment env = load_sample(name);
      const auto rects = all_rectangles(env.space);
      for (Notion id : {Notion::kOd, Notion::kSod}) {
        for (const StateSet& small : rects) {
          for (const StateSet& big : rects) {
            if (!small.subset_of(big)) continue;
            for (StateId theta : small) {
              for (StateId other : small) {
                for (PlayerIndex i = 0; i < env.player_count(); ++i) {
                  if (env.space.component(theta, i) ==
                      env.space.component(other, i)) {
                    continue;
                  }
                  const bool small_ok = eval_notion(
                      id, at(env, small, small, StateSet({theta})), theta,
                      other, i);
                  const bool big_ok =
                      eval_notion(id, at(env, big, big, StateSet({theta})),
                                  theta, other, i);
                  // Failure on the small set persists on the large one.
                  if (!small_ok) CHECK(!big_ok);
                }
              }
            }
          }
        }
      }
    }
  }

  SECTION("additive: per-block passes forge a global pass") {
    for (const char* name : {"env-spa.json", "env-xor.json"}) {
      const Environment env = load_sample(name);
      const StateSet full = StateSet::full(env.space);
      const auto partitions = detail::all_partitions(full.states());
      for (Notion id : {Notion::kWd, Notion::kPbe, Notion::kMm}) {
        for (const auto& partition : partitions) {
          for (StateId theta : full) {
            for (StateId other : full) {
              for (PlayerIndex i = 0; i < env.player_count(); ++i) {
                if (env.space.component(theta, i) ==
                    env.space.component(other, i)) {
                  continue;
                }
                bool all_blocks = true;
                for (const auto& block : partition) {
                  const StateSet believed(block);
                  if (!eval_notion(id, at(env, full, believed, full), theta,
                                   other, i)) {
                    all_blocks = false;
                    break;
                  }
                }
                const bool global =
                    eval_notion(id, at(env, full, full, full), theta, other, i);
                if (all_blocks) CHECK(global);
              }
            }
          }
        }
      }
    }
  }
}
