#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqmech/canonical.hpp"
#include "seqmech/definitional.hpp"
#include "seqmech/environment.hpp"
#include "seqmech/errors.hpp"
#include "seqmech/game.hpp"
#include "seqmech/notions.hpp"
#include "seqmech/synthesis.hpp"

namespace seqmech {

// Top-level implementability verdicts.  Every positive verdict carries a
// certificate that has been re-verified by an independent checker: the
// inequality route re-checks the direct mechanism definitionally, and the
// operator route re-checks the synthesized disclosure game.  A certificate
// that fails re-verification is raised as an internal error instead of
// being reported as a verdict.

struct InequalityRow {
  PlayerIndex player = -1;
  TypeIndex honest = -1;
  TypeIndex deviant = -1;
  bool holds = true;
};

struct MergePair {
  StateId honest = 0;
  StateId deviant = 0;
  PlayerIndex player = -1;
};

struct Verdict {
  Notion notion = Notion::kWd;
  bool implementable = false;
  std::string route;  // "inequality-system" or "operator-achievability"
  std::string scope;  // game class the theorem covers
  // Inequality route: the full table, one row per (player, honest type,
  // deviant type).
  std::vector<InequalityRow> table;
  // Operator route.
  int rounds = 0;
  std::optional<DisclosureSchedule> schedule;
  std::optional<SynthesisResult> synthesis;
  // Refutation (exactly one of certificate/refutation is meaningful).
  std::optional<std::string> refutation;
  std::optional<MergeWitness> fixed_point;
  std::optional<MergePair> merge;
};

namespace detail {

inline std::string notion_scope(Notion id) {
  switch (id) {
    case Notion::kPbe:
    case Notion::kMm:
      return "within perfect-recall games";
    default:
      return "all mechanisms";
  }
}

inline Verdict decide_inequality(const Environment& env, Notion id) {
  Verdict verdict;
  verdict.notion = id;
  verdict.route = "inequality-system";
  verdict.scope = notion_scope(id);
  verdict.implementable = true;
  const StateSet full = StateSet::full(env.space);
  NotionContext ctx{&env, full, full, full};
  for (PlayerIndex i = 0; i < env.player_count(); ++i) {
    for (TypeIndex honest = 0; honest < env.space.type_count(i); ++honest) {
      for (TypeIndex deviant = 0; deviant < env.space.type_count(i);
           ++deviant) {
        if (deviant == honest) continue;
        // The evaluation depends on the honest state only through its own
        // component, so one representative per own type suffices.
        StateId theta = 0;
        theta = env.space.with_component(theta, i, honest);
        const StateId mimic = env.space.with_component(theta, i, deviant);
        InequalityRow row{i, honest, deviant,
                          eval_notion(id, ctx, theta, mimic, i)};
        if (!row.holds && verdict.implementable) {
          verdict.implementable = false;
          verdict.refutation =
              std::string("inequality fails: player '") +
              env.players[static_cast<std::size_t>(i)] + "' type '" +
              env.type_names[static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(honest)] +
              "' prefers mimicking type '" +
              env.type_names[static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(deviant)] +
              "'";
        }
        verdict.table.push_back(row);
      }
    }
  }
  if (verdict.implementable) {
    // Certificate re-verification: the direct mechanism must pass the raw
    // definitional check for the same notion.
    const DirectMechanism direct = build_direct_mechanism(env);
    if (!check_implements(env, direct.game, direct.strategy)) {
      throw InternalError("direct mechanism fails to implement the choice "
                          "function");
    }
    const DefinitionalResult check =
        check_definitional(id, env, direct.game, direct.strategy);
    if (!check.holds) {
      throw InternalError(
          std::string("inequality certificate failed re-verification for ") +
          notion_name(id) + ": " + check.counterexample);
    }
  }
  return verdict;
}

inline Verdict decide_operator(const Environment& env, Notion id) {
  Verdict verdict;
  verdict.notion = id;
  verdict.route = "operator-achievability";
  verdict.scope = notion_scope(id);
  OperatorTable table(env, id);
  const AchievabilityReport report = check_achievable(table);
  verdict.rounds = report.rounds;
  if (!report.achievable) {
    verdict.implementable = false;
    const MergeWitness& witness = *report.blocking;
    verdict.fixed_point = witness;
    std::string text = "state " + env.state_name(witness.theta) +
                       " cannot be separated: fixed point " +
                       env.set_name(witness.cell);
    // Earliest merge inside the stuck cell: the first ordered pair whose
    // separation the notion forbids.
    const StateSet& cell = witness.cell;
    bool found = false;
    for (const StateId a : cell) {
      for (const StateId b : cell) {
        if (a == b) continue;
        for (PlayerIndex i = 0; i < env.player_count() && !found; ++i) {
          if (env.space.component(a, i) == env.space.component(b, i)) {
            continue;
          }
          if (tempted(env, id, cell, table.cell(cell, a), a, b, i)) {
            verdict.merge = MergePair{a, b, i};
            text += "; merge forced by player '" +
                    env.players[static_cast<std::size_t>(i)] + "' at " +
                    env.state_name(a) + " vs " + env.state_name(b);
            found = true;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    verdict.refutation = text;
    return verdict;
  }
  verdict.implementable = true;
  verdict.synthesis = synthesize_from(table);
  verdict.schedule = active_players(table, report.traces);
  // Certificate re-verification: structure, implementation, and the raw
  // definitional check must all pass before the verdict is emitted.
  const SynthesisResult& syn = *verdict.synthesis;
  const GspcReport gspc = check_gspc(syn.game, syn.strategy, env.space);
  if (!gspc.ok()) {
    throw InternalError("synthesized game fails structural checks: " +
                        (gspc.violations.empty() ? std::string("unknown")
                                                 : gspc.violations.front()));
  }
  if (!check_implements(env, syn.game, syn.strategy)) {
    throw InternalError("synthesized game does not implement the choice "
                        "function");
  }
  const DefinitionalResult check =
      check_definitional(id, env, syn.game, syn.strategy);
  if (!check.holds) {
    throw InternalError(
        std::string("operator certificate failed re-verification for ") +
        notion_name(id) + ": " + check.counterexample);
  }
  return verdict;
}

}  // namespace detail

inline Verdict decide_sp(const Environment& env) {
  return detail::decide_inequality(env, Notion::kWd);
}

inline Verdict decide_pbe(const Environment& env) {
  if (!env.prior.has_value()) {
    throw MissingPriorError("belief-weighted verdict requires a prior");
  }
  return detail::decide_inequality(env, Notion::kPbe);
}

inline Verdict decide_maxmin(const Environment& env) {
  return detail::decide_inequality(env, Notion::kMm);
}

inline Verdict decide_osp(const Environment& env) {
  return detail::decide_operator(env, Notion::kOd);
}

inline Verdict decide_sosp(const Environment& env) {
  return detail::decide_operator(env, Notion::kSod);
}

// Routes by declared properties: additive notions take the inequality
// system over the full space, monotonic ones take operator achievability.
inline Verdict decide_generic(const Environment& env, Notion id) {
  const NotionProperties props = properties_of(id);
  if (props.additive) return detail::decide_inequality(env, id);
  if (props.monotonic.value_or(false)) {
    return detail::decide_operator(env, id);
  }
  throw InternalError(std::string("no decision route for notion ") +
                      notion_name(id));
}

}  // namespace seqmech
