#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqmech/definitional.hpp"
#include "seqmech/deciders.hpp"
#include "seqmech/environment.hpp"
#include "seqmech/errors.hpp"
#include "seqmech/game.hpp"
#include "seqmech/notions.hpp"

namespace seqmech {

// Independent brute-force referee: exhaustive search over staged
// type-disclosure protocols on perfect-information trees.  At every cell
// some player partitions their surviving types into at least two blocks and
// announces the block they sit in; a split is admissible when no type in
// the cell prefers announcing a different block, judged by the notion's
// worst-case predicate with the cell itself as the belief set.  The search
// tries every player and every partition at every cell, memoizing per cell,
// and therefore decides existence independently of the operator machinery.

struct ProtocolLimits {
  int max_states = 12;
  long long max_steps = 2'000'000;
};

struct ProtocolSearchResult {
  bool found = false;
  bool exhausted = false;  // the full space was explored within limits
  long long steps = 0;
  std::optional<DirectMechanism> witness;  // perfect-information tree
};

namespace detail {

class ProtocolSearcher {
 public:
  ProtocolSearcher(const Environment& env, Notion id,
                   const ProtocolLimits& limits)
      : env_(&env), id_(id), limits_(limits) {}

  ProtocolSearchResult run() {
    ProtocolSearchResult result;
    try {
      result.found = solvable(StateSet::full(env_->space));
      result.exhausted = true;
    } catch (const LimitExceededError&) {
      result.found = false;
      result.exhausted = false;
    }
    result.steps = steps_;
    if (result.found) {
      strategy_.table.assign(env_->players.size(), {});
      build(StateSet::full(env_->space), -1);
      result.witness = DirectMechanism{std::move(game_), std::move(strategy_)};
    }
    return result;
  }

 private:
  struct Choice {
    PlayerIndex chooser = -1;
    std::vector<std::vector<TypeIndex>> blocks;
  };

  void spend() {
    if (++steps_ > limits_.max_steps) {
      throw LimitExceededError("protocol search exceeded its step budget");
    }
  }

  bool outcome_constant(const StateSet& cell) const {
    const OutcomeIndex first = env_->outcome_of(*cell.begin());
    for (const StateId s : cell) {
      if (env_->outcome_of(s) != first) return false;
    }
    return true;
  }

  StateSet child_cell(const StateSet& cell, PlayerIndex i,
                      const std::vector<TypeIndex>& block) const {
    std::vector<std::vector<TypeIndex>> sides(
        static_cast<std::size_t>(env_->player_count()));
    for (PlayerIndex j = 0; j < env_->player_count(); ++j) {
      sides[static_cast<std::size_t>(j)] =
          j == i ? block : cell.projection(env_->space, j);
    }
    return StateSet::rectangle(env_->space, sides);
  }

  // A split is admissible when every ordered pair separated by it passes
  // the notion's predicate with the cell as belief and the honest side's
  // new cell as the bundled set.
  bool admissible(const StateSet& cell, PlayerIndex i,
                  const std::vector<std::vector<TypeIndex>>& blocks) {
    std::map<TypeIndex, std::size_t> block_of;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (const TypeIndex t : blocks[b]) block_of[t] = b;
    }
    std::vector<StateSet> bundles;
    bundles.reserve(blocks.size());
    for (const auto& block : blocks) {
      bundles.push_back(child_cell(cell, i, block));
    }
    for (const StateId theta : cell) {
      const std::size_t own =
          block_of.at(env_->space.component(theta, i));
      NotionContext ctx{env_, cell, cell, bundles[own]};
      for (const StateId mimic : cell) {
        const std::size_t other =
            block_of.at(env_->space.component(mimic, i));
        if (other == own) continue;
        spend();
        if (!eval_notion(id_, ctx, theta, mimic, i)) return false;
      }
    }
    return true;
  }

  bool solvable(const StateSet& cell) {
    spend();
    const auto it = memo_.find(cell.key());
    if (it != memo_.end()) return it->second.has_value();
    if (outcome_constant(cell)) {
      memo_.emplace(cell.key(), Choice{});  // leaf: no further disclosure
      return true;
    }
    for (PlayerIndex i = 0; i < env_->player_count(); ++i) {
      const auto own_types = cell.projection(env_->space, i);
      if (own_types.size() < 2) continue;
      std::vector<StateId> as_ids(own_types.begin(), own_types.end());
      for (const auto& partition : all_partitions(as_ids)) {
        if (partition.size() < 2) continue;
        std::vector<std::vector<TypeIndex>> blocks;
        blocks.reserve(partition.size());
        for (const auto& block : partition) {
          blocks.emplace_back(block.begin(), block.end());
        }
        if (!admissible(cell, i, blocks)) continue;
        bool all_children = true;
        for (const auto& block : blocks) {
          if (!solvable(child_cell(cell, i, block))) {
            all_children = false;
            break;
          }
        }
        if (all_children) {
          memo_[cell.key()] = Choice{i, std::move(blocks)};
          return true;
        }
      }
    }
    memo_[cell.key()] = std::nullopt;
    return false;
  }

  // Reconstructs the witness tree from the memoized choices; every node
  // gets a fresh label, making the game perfect-information.
  int build(const StateSet& cell, int parent) {
    const int id = static_cast<int>(game_.nodes.size());
    GameNode node;
    node.parent = parent;
    node.depth = parent == -1 ? 0 : game_.node(parent).depth + 1;
    const Choice& choice = *memo_.at(cell.key());
    if (choice.chooser == -1) {
      node.terminal = true;
      node.outcome = env_->outcome_of(*cell.begin());
      game_.nodes.push_back(std::move(node));
      return id;
    }
    node.mover = choice.chooser;
    node.info_label = "n" + std::to_string(id);
    game_.nodes.push_back(std::move(node));
    std::vector<std::pair<ActionLabel, int>> moves;
    std::vector<std::pair<ActionLabel, const std::vector<TypeIndex>*>> order;
    for (const auto& block : choice.blocks) {
      order.emplace_back(env_->block_name(choice.chooser, block), &block);
    }
    std::sort(order.begin(), order.end());
    std::vector<ActionLabel> per_type(
        static_cast<std::size_t>(env_->space.type_count(choice.chooser)),
        order.front().first);
    for (const auto& [name, block] : order) {
      for (const TypeIndex t : *block) {
        per_type[static_cast<std::size_t>(t)] = name;
      }
      const int child = build(child_cell(cell, choice.chooser, *block), id);
      moves.emplace_back(name, child);
    }
    std::sort(moves.begin(), moves.end());
    game_.nodes[static_cast<std::size_t>(id)].moves = std::move(moves);
    strategy_.table[static_cast<std::size_t>(choice.chooser)]
                   ["n" + std::to_string(id)] = std::move(per_type);
    return id;
  }

  const Environment* env_;
  Notion id_;
  ProtocolLimits limits_;
  long long steps_ = 0;
  std::map<std::string, std::optional<Choice>> memo_;
  GameTree game_;
  StrategyProfile strategy_;
};

}  // namespace detail

inline ProtocolSearchResult protocol_search(const Environment& env, Notion id,
                                            const ProtocolLimits& limits = {}) {
  if (id != Notion::kOd && id != Notion::kSod) {
    throw PreconditionError(
        "protocol search only covers the dominance notions");
  }
  if (env.space.states() > limits.max_states) {
    throw PreconditionError("state space too large for protocol search: " +
                            std::to_string(env.space.states()) + " > " +
                            std::to_string(limits.max_states));
  }
  detail::ProtocolSearcher searcher(env, id, limits);
  return searcher.run();
}

struct CrossCheckResult {
  bool conclusive = false;  // search exhausted its space
  bool agree = false;
  bool verdict_implementable = false;
  bool search_found = false;
  std::string details;
};

inline CrossCheckResult cross_check(const Environment& env, Notion id,
                                    const ProtocolLimits& limits = {}) {
  CrossCheckResult out;
  const Verdict verdict =
      id == Notion::kOd ? decide_osp(env) : decide_sosp(env);
  const ProtocolSearchResult search = protocol_search(env, id, limits);
  out.verdict_implementable = verdict.implementable;
  out.search_found = search.found;
  out.conclusive = search.exhausted || search.found;
  if (!out.conclusive) {
    out.details = "protocol search hit its step budget";
    return out;
  }
  out.agree = verdict.implementable == search.found;
  if (!out.agree) {
    out.details = std::string("decider says ") +
                  (verdict.implementable ? "implementable" : "not") +
                  ", search says " + (search.found ? "found" : "not found");
  }
  return out;
}

struct GameVerdict {
  bool implements = false;
  DefinitionalResult definitional;
  bool ok() const { return implements && definitional.holds; }
};

inline GameVerdict verify_game(const Environment& env, Notion id,
                               const GameTree& game,
                               const StrategyProfile& strategy) {
  GameVerdict out;
  out.implements = check_implements(env, game, strategy);
  out.definitional = check_definitional(id, env, game, strategy);
  return out;
}

}  // namespace seqmech
