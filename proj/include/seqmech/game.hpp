#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "seqmech/environment.hpp"
#include "seqmech/errors.hpp"
#include "seqmech/state.hpp"

namespace seqmech {

using ActionLabel = std::string;

struct GameNode {
  int parent = -1;
  int depth = 0;
  bool terminal = false;
  PlayerIndex mover = -1;                          // decision nodes
  std::string info_label;                          // decision nodes
  std::vector<std::pair<ActionLabel, int>> moves;  // sorted by label
  OutcomeIndex outcome = -1;                       // terminal nodes
  std::string annotation;  // free-form breadcrumb, e.g. round markers
};

// A finite rooted tree of decision and terminal nodes.  Node ids follow
// depth-first order with children visited by ascending action label, which
// makes every serialized form of the same tree byte-identical.
class GameTree {
 public:
  std::vector<GameNode> nodes;

  int root() const { return 0; }

  const GameNode& node(int id) const {
    if (id < 0 || id >= static_cast<int>(nodes.size())) {
      throw PreconditionError("node id out of range");
    }
    return nodes[static_cast<std::size_t>(id)];
  }

  int child(int id, const ActionLabel& action) const {
    const GameNode& n = node(id);
    for (const auto& [label, target] : n.moves) {
      if (label == action) return target;
    }
    throw ActionUnavailableError("action '" + action +
                                 "' unavailable at node " + std::to_string(id));
  }

  std::vector<ActionLabel> actions(int id) const {
    std::vector<ActionLabel> out;
    for (const auto& [label, target] : node(id).moves) out.push_back(label);
    return out;
  }

  std::vector<int> terminals() const {
    std::vector<int> out;
    for (int id = 0; id < static_cast<int>(nodes.size()); ++id) {
      if (nodes[static_cast<std::size_t>(id)].terminal) out.push_back(id);
    }
    return out;
  }

  // Decision nodes grouped by information label, ids ascending.  Labels are
  // global: validation rejects one label used by two movers.
  std::map<std::string, std::vector<int>> info_classes() const {
    std::map<std::string, std::vector<int>> classes;
    for (int id = 0; id < static_cast<int>(nodes.size()); ++id) {
      const GameNode& n = nodes[static_cast<std::size_t>(id)];
      if (!n.terminal) classes[n.info_label].push_back(id);
    }
    return classes;
  }

  // Total count of available actions over decision nodes: the size measure
  // the enumeration budget is charged against.
  long long action_mass() const {
    long long mass = 0;
    for (const GameNode& n : nodes) {
      if (!n.terminal) mass += static_cast<long long>(n.moves.size());
    }
    return mass;
  }

  int depth_bound() const {
    int bound = 0;
    for (const GameNode& n : nodes) bound = std::max(bound, n.depth);
    return bound;
  }

  // Structural diagnostics; empty means well-formed.
  std::vector<std::string> validate(int player_count,
                                    int outcome_count) const {
    std::vector<std::string> bad;
    if (nodes.empty()) {
      bad.push_back("game has no nodes");
      return bad;
    }
    if (nodes[0].parent != -1) bad.push_back("root must have no parent");
    if (nodes[0].depth != 0) bad.push_back("root must have depth 0");
    for (int id = 0; id < static_cast<int>(nodes.size()); ++id) {
      const GameNode& n = nodes[static_cast<std::size_t>(id)];
      const std::string where = "node " + std::to_string(id);
      if (id > 0) {
        if (n.parent < 0 || n.parent >= id) {
          bad.push_back(where + ": parent must precede the node");
          continue;
        }
        const GameNode& p = nodes[static_cast<std::size_t>(n.parent)];
        if (p.terminal) bad.push_back(where + ": parent is terminal");
        if (n.depth != p.depth + 1) bad.push_back(where + ": wrong depth");
        bool listed = false;
        for (const auto& [label, target] : p.moves) {
          if (target == id) {
            if (listed) bad.push_back(where + ": listed twice by parent");
            listed = true;
          }
        }
        if (!listed) bad.push_back(where + ": not listed by parent");
      }
      if (n.terminal) {
        if (!n.moves.empty()) bad.push_back(where + ": terminal with moves");
        if (n.outcome < 0 || n.outcome >= outcome_count) {
          bad.push_back(where + ": terminal outcome out of range");
        }
      } else {
        if (n.moves.empty()) bad.push_back(where + ": decision without moves");
        if (n.mover < 0 || n.mover >= player_count) {
          bad.push_back(where + ": mover out of range");
        }
        if (n.info_label.empty()) bad.push_back(where + ": empty info label");
        for (std::size_t k = 0; k < n.moves.size(); ++k) {
          if (n.moves[k].first.empty()) {
            bad.push_back(where + ": empty action label");
          }
          if (k > 0 && !(n.moves[k - 1].first < n.moves[k].first)) {
            bad.push_back(where + ": actions not sorted and distinct");
          }
          const int target = n.moves[k].second;
          if (target <= id || target >= static_cast<int>(nodes.size())) {
            bad.push_back(where + ": child id out of range");
          } else if (nodes[static_cast<std::size_t>(target)].parent != id) {
            bad.push_back(where + ": child does not point back");
          }
        }
      }
    }
    if (!bad.empty()) return bad;

    // Information classes must share mover and action labels.
    for (const auto& [label, ids] : info_classes()) {
      const GameNode& first = nodes[static_cast<std::size_t>(ids.front())];
      for (int id : ids) {
        const GameNode& n = nodes[static_cast<std::size_t>(id)];
        if (n.mover != first.mover) {
          bad.push_back("label '" + label + "' used by two movers");
          break;
        }
        if (actions(id) != actions(ids.front())) {
          bad.push_back("label '" + label + "' with unequal action sets");
          break;
        }
      }
    }

    // Depth-first id discipline: children, in label order, come right after
    // their subtrees in one preorder walk.
    std::vector<int> stack{0};
    int expect = 0;
    while (!stack.empty()) {
      const int id = stack.back();
      stack.pop_back();
      if (id != expect) {
        bad.push_back("node ids do not follow depth-first order");
        break;
      }
      ++expect;
      const GameNode& n = nodes[static_cast<std::size_t>(id)];
      for (auto it = n.moves.rbegin(); it != n.moves.rend(); ++it) {
        stack.push_back(it->second);
      }
    }
    return bad;
  }
};

// One player's contingent plan: an action for each information label,
// per type.  Keying by label makes information-measurability structural.
class StrategyProfile {
 public:
  // table[i][label][t] = action of player i's type t at that label.
  std::vector<std::map<std::string, std::vector<ActionLabel>>> table;

  const ActionLabel& action(PlayerIndex i, const std::string& label,
                            TypeIndex t) const {
    if (i < 0 || i >= static_cast<PlayerIndex>(table.size())) {
      throw PreconditionError("strategy for unknown player");
    }
    const auto& per_label = table[static_cast<std::size_t>(i)];
    const auto it = per_label.find(label);
    if (it == per_label.end()) {
      throw PreconditionError("strategy undefined at label '" + label + "'");
    }
    if (t < 0 || t >= static_cast<TypeIndex>(it->second.size())) {
      throw PreconditionError("strategy undefined for a type");
    }
    return it->second[static_cast<std::size_t>(t)];
  }

  // Diagnostics: the strategy must cover exactly the game's label set for
  // each player, with every prescribed action available.
  std::vector<std::string> validate(const GameTree& game,
                                    const StateSpace& space) const {
    std::vector<std::string> bad;
    if (static_cast<int>(table.size()) != space.players()) {
      bad.push_back("strategy player count mismatch");
      return bad;
    }
    std::map<std::string, int> label_mover;
    std::map<std::string, std::vector<ActionLabel>> label_actions;
    for (const auto& [label, ids] : game.info_classes()) {
      label_mover[label] = game.node(ids.front()).mover;
      label_actions[label] = game.actions(ids.front());
    }
    for (PlayerIndex i = 0; i < space.players(); ++i) {
      for (const auto& [label, mover] : label_mover) {
        if (mover != i) continue;
        const auto& per_label = table[static_cast<std::size_t>(i)];
        const auto it = per_label.find(label);
        if (it == per_label.end()) {
          bad.push_back("player " + std::to_string(i) +
                        " has no plan at label '" + label + "'");
          continue;
        }
        if (static_cast<TypeIndex>(it->second.size()) != space.type_count(i)) {
          bad.push_back("player " + std::to_string(i) +
                        " plan at label '" + label + "' has wrong type count");
          continue;
        }
        const std::vector<ActionLabel>& avail = label_actions[label];
        for (const ActionLabel& a : it->second) {
          if (std::find(avail.begin(), avail.end(), a) == avail.end()) {
            bad.push_back("player " + std::to_string(i) +
                          " plans unavailable action '" + a + "' at label '" +
                          label + "'");
          }
        }
      }
      for (const auto& [label, acts] : table[static_cast<std::size_t>(i)]) {
        const auto it = label_mover.find(label);
        if (it == label_mover.end() || it->second != i) {
          bad.push_back("player " + std::to_string(i) +
                        " plans at foreign label '" + label + "'");
        }
      }
    }
    return bad;
  }
};

// A tree bundled with the strategy profile meant to be played on it — the
// unit that files store and checkers consume.
struct GameDocument {
  GameTree game;
  StrategyProfile strategy;
};

// A memoryless single-agent plan: label -> action.
using Behavior = std::map<std::string, ActionLabel>;
using BehaviorProfile = std::vector<Behavior>;

inline BehaviorProfile behavior_of(const StrategyProfile& strategy,
                                   const StateSpace& space, StateId theta) {
  BehaviorProfile profile(strategy.table.size());
  for (PlayerIndex i = 0; i < static_cast<PlayerIndex>(strategy.table.size());
       ++i) {
    const TypeIndex t = space.component(theta, i);
    for (const auto& [label, acts] : strategy.table[static_cast<std::size_t>(i)]) {
      if (t < 0 || t >= static_cast<TypeIndex>(acts.size())) {
        throw PreconditionError("strategy undefined for a type");
      }
      profile[static_cast<std::size_t>(i)][label] =
          acts[static_cast<std::size_t>(t)];
    }
  }
  return profile;
}

// Follows a behavior profile from the root to its unique terminal node.
inline int terminal_of(const GameTree& game, const BehaviorProfile& profile) {
  int id = game.root();
  while (!game.node(id).terminal) {
    const GameNode& n = game.node(id);
    if (n.mover < 0 ||
        n.mover >= static_cast<PlayerIndex>(profile.size())) {
      throw PreconditionError("behavior profile missing a player");
    }
    const Behavior& b = profile[static_cast<std::size_t>(n.mover)];
    const auto it = b.find(n.info_label);
    if (it == b.end()) {
      throw PreconditionError("behavior undefined at label '" + n.info_label +
                              "'");
    }
    id = game.child(id, it->second);
  }
  return id;
}

inline int terminal_of(const GameTree& game, const StrategyProfile& strategy,
                       const StateSpace& space, StateId theta) {
  return terminal_of(game, behavior_of(strategy, space, theta));
}

// Per-node sets of states whose truthful play passes through the node.
inline std::vector<StateSet> reach_map(const GameTree& game,
                                       const StrategyProfile& strategy,
                                       const StateSpace& space) {
  std::vector<std::vector<StateId>> hits(game.nodes.size());
  for (StateId theta = 0; theta < space.states(); ++theta) {
    const BehaviorProfile profile = behavior_of(strategy, space, theta);
    int id = game.root();
    hits[static_cast<std::size_t>(id)].push_back(theta);
    while (!game.node(id).terminal) {
      const GameNode& n = game.node(id);
      const Behavior& b = profile[static_cast<std::size_t>(n.mover)];
      const auto it = b.find(n.info_label);
      if (it == b.end()) {
        throw PreconditionError("behavior undefined at label '" +
                                n.info_label + "'");
      }
      id = game.child(id, it->second);
      hits[static_cast<std::size_t>(id)].push_back(theta);
    }
  }
  std::vector<StateSet> out;
  out.reserve(hits.size());
  for (auto& states : hits) out.push_back(StateSet(std::move(states)));
  return out;
}

// True iff truthful play realizes the environment's choice at every state.
inline bool check_implements(const Environment& env, const GameTree& game,
                             const StrategyProfile& strategy) {
  for (StateId theta = 0; theta < env.space.states(); ++theta) {
    const int t = terminal_of(game, strategy, env.space, theta);
    if (game.node(t).outcome != env.outcome_of(theta)) return false;
  }
  return true;
}

struct GspcReport {
  bool perfect_recall = true;        // (A)
  bool terminals_reached = true;     // (B)
  bool distinct_reach_sets = true;   // (C)
  std::vector<std::string> violations;

  bool ok() const {
    return perfect_recall && terminals_reached && distinct_reach_sets;
  }
};

namespace detail {

// The (label, action) steps taken at the mover's own ancestors on the way
// to `id`, in root-to-node order.
inline std::vector<std::pair<std::string, ActionLabel>> own_experience(
    const GameTree& game, int id, PlayerIndex i) {
  std::vector<int> path;
  for (int cur = id; cur != -1; cur = game.node(cur).parent) path.push_back(cur);
  std::reverse(path.begin(), path.end());
  std::vector<std::pair<std::string, ActionLabel>> exp;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const GameNode& n = game.node(path[k]);
    if (n.mover != i) continue;
    for (const auto& [label, target] : n.moves) {
      if (target == path[k + 1]) {
        exp.emplace_back(n.info_label, label);
        break;
      }
    }
  }
  return exp;
}

}  // namespace detail

// The three structural conditions a well-posed sequential mechanism must
// satisfy: (A) movers remember their own past labels and actions, (B) no
// terminal is dead weight, and (C) no two nodes carry identical reach sets.
inline GspcReport check_gspc(const GameTree& game,
                             const StrategyProfile& strategy,
                             const StateSpace& space) {
  GspcReport report;

  // (A), enumerated literally: whenever two nodes share a label (mover i)
  // and the first remembers choosing action a at an own ancestor, the
  // second must also have an i-ancestor with that ancestor's label at
  // which a leads on.
  for (const auto& [label, ids] : game.info_classes()) {
    const PlayerIndex i = game.node(ids.front()).mover;
    bool bad_label = false;
    for (int h_prime : ids) {
      const auto remembered = detail::own_experience(game, h_prime, i);
      for (int h_second : ids) {
        const auto available = detail::own_experience(game, h_second, i);
        for (const auto& step : remembered) {
          if (std::find(available.begin(), available.end(), step) ==
              available.end()) {
            report.perfect_recall = false;
            bad_label = true;
            report.violations.push_back(
                "label '" + label +
                "': members disagree on the mover's history");
            break;
          }
        }
        if (bad_label) break;
      }
      if (bad_label) break;
    }
  }

  const std::vector<StateSet> reach = reach_map(game, strategy, space);

  // (B): every terminal is realized by some truthful play.
  for (int t : game.terminals()) {
    if (reach[static_cast<std::size_t>(t)].empty()) {
      report.terminals_reached = false;
      report.violations.push_back("terminal node " + std::to_string(t) +
                                  " is never reached");
    }
  }

  // (C): reach sets are pairwise distinct over all nodes.
  std::map<std::string, int> seen;
  for (int id = 0; id < static_cast<int>(game.nodes.size()); ++id) {
    const std::string key = reach[static_cast<std::size_t>(id)].key();
    const auto [it, fresh] = seen.emplace(key, id);
    if (!fresh) {
      report.distinct_reach_sets = false;
      report.violations.push_back(
          "nodes " + std::to_string(it->second) + " and " +
          std::to_string(id) + " share a reach set");
    }
  }
  return report;
}

// Verifies the projection property of information classes: all members a
// truthful play can reach give the mover the same view of her own types.
struct ProjectionReport {
  bool ok = true;
  std::string violation;
};

inline ProjectionReport check_class_projections(const GameTree& game,
                                                const StrategyProfile& strategy,
                                                const StateSpace& space) {
  ProjectionReport report;
  const std::vector<StateSet> reach = reach_map(game, strategy, space);
  for (const auto& [label, ids] : game.info_classes()) {
    const PlayerIndex i = game.node(ids.front()).mover;
    std::optional<std::vector<TypeIndex>> expected;
    for (int id : ids) {
      const StateSet& e = reach[static_cast<std::size_t>(id)];
      if (e.empty()) continue;
      std::vector<TypeIndex> mine = e.projection(space, i);
      if (!expected.has_value()) {
        expected = std::move(mine);
      } else if (*expected != mine) {
        report.ok = false;
        report.violation = "label '" + label +
                           "': reachable members disagree on the mover's "
                           "type set";
        return report;
      }
    }
  }
  return report;
}

// The stepwise separation structure a game and strategy read onto state
// sets: the cell of theta inside a decision node's reach set is the reach
// set of the truthful child, and the belief attached to a reach set is the
// union over its information class.  Off-domain arguments map to
// themselves.
class InducedOperator {
 public:
  InducedOperator(const Environment& env, const GameTree& game,
                  const StrategyProfile& strategy)
      : env_(&env), game_(&game), strategy_(&strategy) {
    reach_ = reach_map(game, strategy, env.space);
    for (int id = 0; id < static_cast<int>(game.nodes.size()); ++id) {
      const StateSet& e = reach_[static_cast<std::size_t>(id)];
      if (e.empty() || game.node(id).terminal) continue;
      const auto [it, fresh] = node_of_.emplace(e.key(), id);
      if (!fresh) {
        throw PreconditionError(
            "two decision nodes share a reach set; separation structure is "
            "ill-defined");
      }
      domain_.push_back(e);
    }
    std::sort(domain_.begin(), domain_.end());
  }

  const std::vector<StateSet>& domain() const { return domain_; }

  StateSet cell(const StateSet& e, StateId theta) const {
    if (!e.contains(theta)) return e;
    const auto it = node_of_.find(e.key());
    if (it == node_of_.end()) return e;
    const int id = it->second;
    const GameNode& n = game_->node(id);
    const TypeIndex t = env_->space.component(theta, n.mover);
    const ActionLabel& a = strategy_->action(n.mover, n.info_label, t);
    return reach_[static_cast<std::size_t>(game_->child(id, a))];
  }

  StateSet belief(const StateSet& e) const {
    const auto it = node_of_.find(e.key());
    if (it == node_of_.end()) return e;
    const GameNode& n = game_->node(it->second);
    std::vector<StateId> states;
    for (int id : game_->info_classes().at(n.info_label)) {
      for (StateId s : reach_[static_cast<std::size_t>(id)]) {
        states.push_back(s);
      }
    }
    return StateSet(std::move(states));
  }

  const std::vector<StateSet>& reach() const { return reach_; }

 private:
  const Environment* env_;
  const GameTree* game_;
  const StrategyProfile* strategy_;
  std::vector<StateSet> reach_;
  std::map<std::string, int> node_of_;
  std::vector<StateSet> domain_;
};

}  // namespace seqmech
