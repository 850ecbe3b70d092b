#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "seqmech/environment.hpp"
#include "seqmech/errors.hpp"
#include "seqmech/game.hpp"
#include "seqmech/notions.hpp"

namespace seqmech {

// Raw solution-concept verification on explicit game trees.  Each notion is
// checked by enumerating behaviorally distinct behavior profiles lazily:
// a walk from the root assigns an action to an information-set label only
// when the play path first consults it, and branches over every available
// action at that point.  Two full profiles that agree on every label their
// play paths consult reach the same terminals, so this enumeration covers
// the full quantifier space while staying finite and small.

struct DefinitionalLimits {
  // Hard cap on the game size measured as the sum of |A(h)| over decision
  // nodes; larger games are refused outright.
  long long max_action_mass = 200;
  // Budget on node visits across all enumeration walks for one check.
  long long max_visits = 8'000'000;
};

struct DefinitionalResult {
  bool holds = true;
  std::string counterexample;
};

namespace detail {

struct WalkBudget {
  long long remaining = 0;
  void spend() {
    if (--remaining < 0) {
      throw LimitExceededError(
          "definitional enumeration exceeded its visit budget");
    }
  }
};

// For every (label, action) choice: the set of outcomes of terminals reached
// by at least one measurable behavior profile whose play path makes that
// choice.  One lazy enumeration over all slots covers the whole game.
class ChoiceOutcomes {
 public:
  ChoiceOutcomes(const GameTree& game, WalkBudget& budget) : game_(&game) {
    walk(game.root(), budget);
  }

  const std::set<OutcomeIndex>* outcomes(const std::string& label,
                                         const ActionLabel& action) const {
    const auto it = table_.find(label);
    if (it == table_.end()) return nullptr;
    const auto jt = it->second.find(action);
    if (jt == it->second.end()) return nullptr;
    return &jt->second;
  }

  const std::map<ActionLabel, std::set<OutcomeIndex>>* row(
      const std::string& label) const {
    const auto it = table_.find(label);
    return it == table_.end() ? nullptr : &it->second;
  }

 private:
  void walk(int id, WalkBudget& budget) {
    budget.spend();
    const GameNode& node = game_->node(id);
    if (node.terminal) {
      for (const auto& [label, action] : trail_) {
        table_[label][action].insert(node.outcome);
      }
      return;
    }
    const auto it = assigned_.find(node.info_label);
    if (it != assigned_.end()) {
      trail_.emplace_back(node.info_label, it->second);
      walk(game_->child(id, it->second), budget);
      trail_.pop_back();
      return;
    }
    for (const auto& [action, child] : node.moves) {
      assigned_.emplace(node.info_label, action);
      trail_.emplace_back(node.info_label, action);
      walk(child, budget);
      trail_.pop_back();
      assigned_.erase(node.info_label);
    }
  }

  const GameTree* game_;
  std::map<std::string, ActionLabel> assigned_;
  std::vector<std::pair<std::string, ActionLabel>> trail_;
  std::map<std::string, std::map<ActionLabel, std::set<OutcomeIndex>>> table_;
};

// Honest play of one type against lazily enumerated opponents: for every own
// label the honest path can consult, the worst payoff over those walks.
// Presence of a label in the map certifies that some opponent behavior leads
// the honest type through that information set.
class HonestView {
 public:
  HonestView(const Environment& env, const GameTree& game,
             const StrategyProfile& strategy, PlayerIndex i, TypeIndex t,
             WalkBudget& budget)
      : env_(&env), game_(&game), strategy_(&strategy), i_(i), t_(t) {
    walk(game.root(), budget);
  }

  const std::map<std::string, Rational>& worst() const { return worst_; }

  bool reaches(const std::string& label) const {
    return worst_.count(label) != 0;
  }

 private:
  void walk(int id, WalkBudget& budget) {
    budget.spend();
    const GameNode& node = game_->node(id);
    if (node.terminal) {
      const Rational u = env_->utility(i_, t_, node.outcome);
      for (const auto& label : own_trail_) {
        const auto it = worst_.find(label);
        if (it == worst_.end()) {
          worst_.emplace(label, u);
        } else if (u < it->second) {
          it->second = u;
        }
      }
      return;
    }
    if (node.mover == i_) {
      const ActionLabel& action = strategy_->action(i_, node.info_label, t_);
      own_trail_.push_back(node.info_label);
      walk(game_->child(id, action), budget);
      own_trail_.pop_back();
      return;
    }
    const auto it = assigned_.find(node.info_label);
    if (it != assigned_.end()) {
      walk(game_->child(id, it->second), budget);
      return;
    }
    for (const auto& [action, child] : node.moves) {
      assigned_.emplace(node.info_label, action);
      walk(child, budget);
      assigned_.erase(node.info_label);
    }
  }

  const Environment* env_;
  const GameTree* game_;
  const StrategyProfile* strategy_;
  PlayerIndex i_;
  TypeIndex t_;
  std::map<std::string, ActionLabel> assigned_;
  std::vector<std::string> own_trail_;
  std::map<std::string, Rational> worst_;
};

struct LabelInfo {
  PlayerIndex mover = -1;
  std::vector<ActionLabel> actions;
};

inline std::map<std::string, LabelInfo> label_table(const GameTree& game) {
  std::map<std::string, LabelInfo> out;
  for (const auto& [label, ids] : game.info_classes()) {
    LabelInfo info;
    info.mover = game.node(ids.front()).mover;
    info.actions = game.actions(ids.front());
    out.emplace(label, std::move(info));
  }
  return out;
}

inline std::string describe(const Environment& env, Notion id, PlayerIndex i,
                            TypeIndex t, const std::string& label,
                            const std::string& rest) {
  return std::string(notion_name(id)) + ": player '" + env.players.at(i) +
         "' type '" + env.type_names.at(i).at(t) + "' at label '" + label +
         "': " + rest;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Dominance checks driven by the two aggregate views.
//
// Obvious dominance: at every information set the honest type can consult,
// the worst honest payoff (over opponent behaviors leading there) must be at
// least the best payoff over all full profiles that cross the set choosing a
// different action there.
//
// Strong variant: the left side's worst case additionally ranges over every
// full profile that crosses the set choosing the honest action — own play
// elsewhere arbitrary — so commitments made by the honest action itself are
// priced in.
// ---------------------------------------------------------------------------

namespace detail {

inline DefinitionalResult check_dominance(Notion id, const Environment& env,
                                          const GameTree& game,
                                          const StrategyProfile& strategy,
                                          WalkBudget& budget) {
  DefinitionalResult result;
  const ChoiceOutcomes table(game, budget);
  for (PlayerIndex i = 0; i < env.player_count(); ++i) {
    for (TypeIndex t = 0; t < env.space.type_count(i); ++t) {
      const HonestView view(env, game, strategy, i, t, budget);
      for (const auto& [label, honest_worst] : view.worst()) {
        const ActionLabel& star = strategy.action(i, label, t);
        const auto* row = table.row(label);
        if (row == nullptr) continue;
        // Left side: either the honest walks' worst case, or — for the
        // strong variant — the worst case over all profiles sharing the
        // honest action at this set.
        Rational lhs = honest_worst;
        if (id == Notion::kSod) {
          const auto it = row->find(star);
          if (it != row->end()) {
            for (const OutcomeIndex o : it->second) {
              const Rational u = env.utility(i, t, o);
              if (u < lhs) lhs = u;
            }
          }
        }
        for (const auto& [action, outs] : *row) {
          if (action == star) continue;
          for (const OutcomeIndex o : outs) {
            const Rational u = env.utility(i, t, o);
            if (lhs < u) {
              result.holds = false;
              result.counterexample = describe(
                  env, id, i, t, label,
                  "worst honest payoff " + lhs.to_string() +
                      " < payoff " + u.to_string() + " reachable via action '" +
                      action + "'");
              return result;
            }
          }
        }
      }
    }
  }
  return result;
}

// Weak dominance: honest walk and deviation walk share one opponent behavior
// (assignments discovered by either walk are common), and the comparison
// applies whenever both paths cross a common information set where the
// deviation picks a different action.
class WeakDominanceWalker {
 public:
  WeakDominanceWalker(const Environment& env, const GameTree& game,
                      const StrategyProfile& strategy, PlayerIndex i,
                      TypeIndex t, WalkBudget& budget)
      : env_(&env), game_(&game), strategy_(&strategy), i_(i), t_(t) {
    honest(game.root(), budget);
  }

  const std::optional<std::string>& violation() const { return violation_; }

 private:
  void honest(int id, WalkBudget& budget) {
    if (violation_.has_value()) return;
    budget.spend();
    const GameNode& node = game_->node(id);
    if (node.terminal) {
      honest_u_ = env_->utility(i_, t_, node.outcome);
      honest_set_.clear();
      honest_set_.insert(honest_trail_.begin(), honest_trail_.end());
      deviate(game_->root(), budget);
      return;
    }
    if (node.mover == i_) {
      honest_trail_.push_back(node.info_label);
      honest(game_->child(id, strategy_->action(i_, node.info_label, t_)),
             budget);
      honest_trail_.pop_back();
      return;
    }
    const auto it = shared_.find(node.info_label);
    if (it != shared_.end()) {
      honest(game_->child(id, it->second), budget);
      return;
    }
    for (const auto& [action, child] : node.moves) {
      shared_.emplace(node.info_label, action);
      honest(child, budget);
      shared_.erase(node.info_label);
      if (violation_.has_value()) return;
    }
  }

  void deviate(int id, WalkBudget& budget) {
    if (violation_.has_value()) return;
    budget.spend();
    const GameNode& node = game_->node(id);
    if (node.terminal) {
      const Rational dev_u = env_->utility(i_, t_, node.outcome);
      if (honest_u_ >= dev_u) return;
      for (const auto& [label, action] : own_) {
        if (honest_set_.count(label) == 0) continue;
        if (action == strategy_->action(i_, label, t_)) continue;
        violation_ = describe(
            *env_, Notion::kWd, i_, t_, label,
            "honest payoff " + honest_u_.to_string() +
                " < deviation payoff " + dev_u.to_string() +
                " against the same opponent behavior (deviant action '" +
                action + "')");
        return;
      }
      return;
    }
    const bool own_node = node.mover == i_;
    auto& map = own_node ? own_ : shared_;
    const auto it = map.find(node.info_label);
    if (it != map.end()) {
      deviate(game_->child(id, it->second), budget);
      return;
    }
    for (const auto& [action, child] : node.moves) {
      map.emplace(node.info_label, action);
      deviate(child, budget);
      map.erase(node.info_label);
      if (violation_.has_value()) return;
    }
  }

  const Environment* env_;
  const GameTree* game_;
  const StrategyProfile* strategy_;
  PlayerIndex i_;
  TypeIndex t_;
  std::map<std::string, ActionLabel> shared_;  // opponents, both walks
  std::map<std::string, ActionLabel> own_;     // deviation's own play
  std::vector<std::string> honest_trail_;
  std::set<std::string> honest_set_;
  Rational honest_u_;
  std::optional<std::string> violation_;
};

inline DefinitionalResult check_weak(const Environment& env,
                                     const GameTree& game,
                                     const StrategyProfile& strategy,
                                     WalkBudget& budget) {
  DefinitionalResult result;
  for (PlayerIndex i = 0; i < env.player_count(); ++i) {
    for (TypeIndex t = 0; t < env.space.type_count(i); ++t) {
      const WeakDominanceWalker walker(env, game, strategy, i, t, budget);
      if (walker.violation().has_value()) {
        result.holds = false;
        result.counterexample = *walker.violation();
        return result;
      }
    }
  }
  return result;
}

// Inner exploration for the worst-case notion: with the deviator's play
// fixed on `own` (and undetermined elsewhere), walk every opponent behavior;
// if the walk consults an own label outside `own`, report it so the caller
// can branch on it.
struct MinOverReach {
  bool need = false;            // an own slot outside `own` was consulted
  std::string slot;             // that slot's label
  bool visited = false;         // some walk crossed the anchor label
  std::optional<Rational> best; // min payoff over anchor-crossing walks
};

class MinReachExplorer {
 public:
  MinReachExplorer(const Environment& env, const GameTree& game,
                   PlayerIndex i, TypeIndex t, const std::string& anchor)
      : env_(&env), game_(&game), i_(i), t_(t), anchor_(&anchor) {}

  MinOverReach run(const std::map<std::string, ActionLabel>& own,
                   WalkBudget& budget) {
    own_ = &own;
    out_ = MinOverReach{};
    opp_.clear();
    anchor_depth_ = 0;
    walk(game_->root(), budget);
    return out_;
  }

 private:
  void walk(int id, WalkBudget& budget) {
    if (out_.need) return;
    budget.spend();
    const GameNode& node = game_->node(id);
    if (node.terminal) {
      if (anchor_depth_ > 0) {
        out_.visited = true;
        const Rational u = env_->utility(i_, t_, node.outcome);
        if (!out_.best.has_value() || u < *out_.best) out_.best = u;
      }
      return;
    }
    if (node.mover == i_) {
      const auto it = own_->find(node.info_label);
      if (it == own_->end()) {
        out_.need = true;
        out_.slot = node.info_label;
        return;
      }
      const bool at_anchor = node.info_label == *anchor_;
      if (at_anchor) ++anchor_depth_;
      walk(game_->child(id, it->second), budget);
      if (at_anchor) --anchor_depth_;
      return;
    }
    const auto it = opp_.find(node.info_label);
    if (it != opp_.end()) {
      walk(game_->child(id, it->second), budget);
      return;
    }
    for (const auto& [action, child] : node.moves) {
      opp_.emplace(node.info_label, action);
      walk(child, budget);
      opp_.erase(node.info_label);
      if (out_.need) return;
    }
  }

  const Environment* env_;
  const GameTree* game_;
  PlayerIndex i_;
  TypeIndex t_;
  const std::string* anchor_;
  const std::map<std::string, ActionLabel>* own_ = nullptr;
  std::map<std::string, ActionLabel> opp_;
  int anchor_depth_ = 0;
  MinOverReach out_;
};

// Worst-case comparison: for each information set the honest type can
// consult and each deviation plan differing there, some opponent behavior
// must steer the deviation through the same set to a payoff no better than
// the honest worst case.  A deviation plan that can never cross the set
// leaves the requirement unmet.
inline DefinitionalResult check_worst_case(const Environment& env,
                                           const GameTree& game,
                                           const StrategyProfile& strategy,
                                           WalkBudget& budget) {
  DefinitionalResult result;
  const auto labels = label_table(game);
  for (PlayerIndex i = 0; i < env.player_count(); ++i) {
    for (TypeIndex t = 0; t < env.space.type_count(i); ++t) {
      const HonestView view(env, game, strategy, i, t, budget);
      for (const auto& [label, honest_worst] : view.worst()) {
        const ActionLabel& star = strategy.action(i, label, t);
        MinReachExplorer explorer(env, game, i, t, label);
        for (const ActionLabel& action : labels.at(label).actions) {
          if (action == star) continue;
          // Depth-first refinement of the deviation plan: branch on own
          // labels as the exploration consults them.
          std::vector<std::map<std::string, ActionLabel>> pending;
          pending.push_back({{label, action}});
          while (!pending.empty()) {
            auto own = std::move(pending.back());
            pending.pop_back();
            const MinOverReach r = explorer.run(own, budget);
            if (r.need) {
              for (const ActionLabel& a : labels.at(r.slot).actions) {
                auto next = own;
                next.emplace(r.slot, a);
                pending.push_back(std::move(next));
              }
              continue;
            }
            if (!r.visited) {
              result.holds = false;
              result.counterexample = describe(
                  env, Notion::kMm, i, t, label,
                  "deviation plan playing '" + action +
                      "' never returns to the information set, so no "
                      "comparison branch exists");
              return result;
            }
            if (honest_worst < *r.best) {
              result.holds = false;
              result.counterexample = describe(
                  env, Notion::kMm, i, t, label,
                  "worst honest payoff " + honest_worst.to_string() +
                      " < worst deviation payoff " + r.best->to_string() +
                      " via action '" + action + "'");
              return result;
            }
          }
        }
      }
    }
  }
  return result;
}

// Belief-weighted comparison: for each own information set and each
// deviation plan differing there, the expected honest-minus-deviation
// payoff — weighted by the type's conditional belief and restricted to
// opponent profiles that reach the set under honest play — must be
// nonnegative.  Opponents play honestly throughout.
inline DefinitionalResult check_belief_weighted(
    const Environment& env, const GameTree& game,
    const StrategyProfile& strategy, WalkBudget& budget) {
  DefinitionalResult result;
  if (!env.prior.has_value()) {
    throw MissingPriorError("belief-weighted check requires a prior");
  }
  const auto labels = label_table(game);
  const std::vector<StateSet> reach = reach_map(game, strategy, env.space);
  const auto classes = game.info_classes();
  for (PlayerIndex i = 0; i < env.player_count(); ++i) {
    for (TypeIndex t = 0; t < env.space.type_count(i); ++t) {
      std::map<StateId, Rational> belief;
      try {
        belief = env.conditional_belief(i, t);
      } catch (const ZeroMarginalError&) {
        continue;  // mass-zero type: nothing is conditioned on
      }
      for (const auto& [label, ids] : classes) {
        if (labels.at(label).mover != i) continue;
        // Opponent profiles that reach this information set under honest
        // play by everyone, with a representative full state per profile.
        std::map<StateId, StateId> rep_by_key;
        for (const int id : ids) {
          for (const StateId s : reach[static_cast<std::size_t>(id)]) {
            rep_by_key.emplace(env.space.opponents_key(s, i), s);
          }
        }
        if (rep_by_key.empty()) continue;  // empty sum holds trivially
        std::map<StateId, Rational> honest_u;
        std::map<StateId, StateId> combined;
        for (const auto& [key, rep] : rep_by_key) {
          const StateId theta = env.space.with_component(rep, i, t);
          combined.emplace(key, theta);
          honest_u.emplace(
              key, env.utility(
                       i, t,
                       game.node(terminal_of(game, strategy, env.space, theta))
                           .outcome));
        }
        const ActionLabel& star = strategy.action(i, label, t);
        for (const ActionLabel& action : labels.at(label).actions) {
          if (action == star) continue;
          std::vector<std::map<std::string, ActionLabel>> pending;
          pending.push_back({{label, action}});
          while (!pending.empty()) {
            auto own = std::move(pending.back());
            pending.pop_back();
            // Walk every reaching opponent profile under this plan; branch
            // when an own label outside the plan is consulted.
            std::string need;
            std::map<StateId, Rational> dev_u;
            for (const auto& [key, theta] : combined) {
              int id = game.root();
              while (true) {
                budget.spend();
                const GameNode& node = game.node(id);
                if (node.terminal) {
                  dev_u.emplace(key, env.utility(i, t, node.outcome));
                  break;
                }
                if (node.mover == i) {
                  const auto it = own.find(node.info_label);
                  if (it == own.end()) {
                    need = node.info_label;
                    break;
                  }
                  id = game.child(id, it->second);
                  continue;
                }
                id = game.child(
                    id, strategy.action(
                            node.mover, node.info_label,
                            env.space.component(theta, node.mover)));
              }
              if (!need.empty()) break;
            }
            if (!need.empty()) {
              for (const ActionLabel& a : labels.at(need).actions) {
                auto next = own;
                next.emplace(need, a);
                pending.push_back(std::move(next));
              }
              continue;
            }
            Rational sum(0);
            for (const auto& [key, u_h] : honest_u) {
              const auto w = belief.find(key);
              if (w == belief.end()) continue;
              sum += (u_h - dev_u.at(key)) * w->second;
            }
            if (sum < Rational(0)) {
              result.holds = false;
              result.counterexample = describe(
                  env, Notion::kPbe, i, t, label,
                  "expected honest-minus-deviation payoff " +
                      sum.to_string() + " < 0 via action '" + action + "'");
              return result;
            }
          }
        }
      }
    }
  }
  return result;
}

}  // namespace detail

inline DefinitionalResult check_definitional(
    Notion id, const Environment& env, const GameTree& game,
    const StrategyProfile& strategy, const DefinitionalLimits& limits = {}) {
  if (game.action_mass() > limits.max_action_mass) {
    throw LimitExceededError(
        "game too large for definitional checking: action mass " +
        std::to_string(game.action_mass()) + " > " +
        std::to_string(limits.max_action_mass));
  }
  detail::WalkBudget budget{limits.max_visits};
  switch (id) {
    case Notion::kOd:
    case Notion::kSod:
      return detail::check_dominance(id, env, game, strategy, budget);
    case Notion::kWd:
      return detail::check_weak(env, game, strategy, budget);
    case Notion::kMm:
      return detail::check_worst_case(env, game, strategy, budget);
    case Notion::kPbe:
      return detail::check_belief_weighted(env, game, strategy, budget);
  }
  throw InternalError("unhandled notion");
}

// ---------------------------------------------------------------------------
// Reduction check: evaluate the per-information-set predicate on the reach
// sets instead of enumerating behavior profiles.  At every decision node
// with reach set E and mover j, every type present mimicking another
// present type whose prescribed action differs must satisfy the notion's
// inequality with belief drawn from the node's information set.
// ---------------------------------------------------------------------------

inline DefinitionalResult check_reduced(Notion id, const Environment& env,
                                        const GameTree& game,
                                        const StrategyProfile& strategy) {
  DefinitionalResult result;
  const InducedOperator induced(env, game, strategy);
  const std::vector<StateSet>& reach = induced.reach();
  const StateSet ambient = StateSet::full(env.space);
  for (int id_node = 0; id_node < static_cast<int>(game.nodes.size());
       ++id_node) {
    const GameNode& node = game.node(id_node);
    if (node.terminal) continue;
    const StateSet& e = reach[static_cast<std::size_t>(id_node)];
    if (e.empty()) continue;
    const PlayerIndex j = node.mover;
    const StateSet believed = induced.belief(e);
    const auto present = e.projection(env.space, j);
    for (const StateId theta : e) {
      const TypeIndex tj = env.space.component(theta, j);
      const ActionLabel& star = strategy.action(j, node.info_label, tj);
      const StateSet bundle =
          reach[static_cast<std::size_t>(game.child(id_node, star))];
      NotionContext ctx{&env, ambient, believed, bundle};
      for (const TypeIndex mimic : present) {
        if (strategy.action(j, node.info_label, mimic) == star) continue;
        const StateId theta_prime =
            env.space.with_component(theta, j, mimic);
        if (!eval_notion(id, ctx, theta, theta_prime, j)) {
          result.holds = false;
          result.counterexample =
              detail::describe(env, id, j, tj, node.info_label,
                               "present type '" +
                                   env.type_names.at(j).at(mimic) +
                                   "' is a profitable mimic at node " +
                                   std::to_string(id_node));
          return result;
        }
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Information erasure: give every decision node its own fresh label, turning
// the game into a perfect-information tree, and re-key the strategy
// accordingly.  Used to test that hiding less never hurts the dominance
// notions.
// ---------------------------------------------------------------------------

inline GameDocument erase_information(const Environment& env,
                                      const GameTree& game,
                                      const StrategyProfile& strategy) {
  GameDocument out;
  out.game = game;
  out.strategy.table.assign(env.players.size(), {});
  for (int id = 0; id < static_cast<int>(out.game.nodes.size()); ++id) {
    GameNode& node = out.game.nodes[static_cast<std::size_t>(id)];
    if (node.terminal) continue;
    const std::string fresh = "pi" + std::to_string(id);
    std::vector<ActionLabel> per_type;
    const int types = env.space.type_count(node.mover);
    per_type.reserve(static_cast<std::size_t>(types));
    for (TypeIndex t = 0; t < types; ++t) {
      per_type.push_back(strategy.action(node.mover, node.info_label, t));
    }
    out.strategy.table[static_cast<std::size_t>(node.mover)][fresh] =
        std::move(per_type);
    node.info_label = fresh;
  }
  return out;
}

}  // namespace seqmech
