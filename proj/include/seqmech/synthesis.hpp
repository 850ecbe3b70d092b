#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "seqmech/canonical.hpp"
#include "seqmech/environment.hpp"
#include "seqmech/errors.hpp"
#include "seqmech/game.hpp"
#include "seqmech/notions.hpp"

namespace seqmech {

// Mechanism construction.  Two builders live here: the round-based
// disclosure game driven by an operator table (players repeatedly announce
// which block of their current cell projection they sit in, simultaneously
// per round, sequentialized with hiding labels), and the one-round direct
// mechanism in which every player announces a full type.

// Per-state disclosure schedule: which players reveal non-trivial
// information in which round, and what they announce.
struct RoundDisclosure {
  int round = 0;  // 1-based
  // (player, announced projection of the player's new cell)
  std::vector<std::pair<PlayerIndex, std::vector<TypeIndex>>> moves;
};

struct StateSchedule {
  StateId theta = 0;
  int last_round = 0;  // N: the last round with a nonempty active set
  std::vector<RoundDisclosure> rounds;
};

struct DisclosureSchedule {
  std::vector<StateSchedule> per_state;
  int max_rounds = 0;  // max over states of last_round
  // Union over states of the round's active players, per round.
  std::vector<std::vector<PlayerIndex>> active_by_round;
};

inline DisclosureSchedule active_players(
    OperatorTable& table, const std::vector<IterationTrace>& traces) {
  const Environment& env = table.environment();
  DisclosureSchedule schedule;
  schedule.per_state.reserve(traces.size());
  for (const IterationTrace& trace : traces) {
    StateSchedule entry;
    entry.theta = trace.theta;
    for (std::size_t n = 1; n < trace.chain.size(); ++n) {
      const StateSet& e = trace.chain[n - 1];
      if (e.size() <= 1) break;
      RoundDisclosure round;
      round.round = static_cast<int>(n);
      const std::vector<StateSet>& cells = table.partition(e);
      for (PlayerIndex i = 0; i < env.player_count(); ++i) {
        const auto own = trace.chain[n].projection(env.space, i);
        bool differs = false;
        for (const StateSet& cell : cells) {
          if (cell.projection(env.space, i) != own) {
            differs = true;
            break;
          }
        }
        if (differs) round.moves.emplace_back(i, own);
      }
      if (round.moves.empty()) break;
      entry.last_round = round.round;
      entry.rounds.push_back(std::move(round));
    }
    if (entry.last_round > schedule.max_rounds) {
      schedule.max_rounds = entry.last_round;
    }
    schedule.per_state.push_back(std::move(entry));
  }
  schedule.active_by_round.assign(
      static_cast<std::size_t>(schedule.max_rounds), {});
  for (const StateSchedule& entry : schedule.per_state) {
    for (const RoundDisclosure& round : entry.rounds) {
      auto& bucket =
          schedule.active_by_round[static_cast<std::size_t>(round.round - 1)];
      for (const auto& [player, block] : round.moves) {
        (void)block;
        if (std::find(bucket.begin(), bucket.end(), player) == bucket.end()) {
          bucket.push_back(player);
        }
      }
    }
  }
  for (auto& bucket : schedule.active_by_round) {
    std::sort(bucket.begin(), bucket.end());
  }
  return schedule;
}

// A node at which a new round begins, together with the cell the
// construction believes is still alive there; tests compare these against
// the operator iteration and the realized reach sets.
struct RoundMark {
  int node = 0;
  int applications = 0;  // operator applications producing `cell`
  StateSet cell;
};

struct SynthesisResult {
  GameTree game;
  StrategyProfile strategy;
  std::vector<RoundMark> marks;
  std::vector<std::string> diagnostics;
};

namespace detail {

class DisclosureBuilder {
 public:
  explicit DisclosureBuilder(OperatorTable& table)
      : table_(&table), env_(&table.environment()) {
    result_.strategy.table.assign(env_->players.size(), {});
  }

  SynthesisResult build() {
    build_cell(StateSet::full(env_->space), 1, -1);
    finalize_strategy();
    return std::move(result_);
  }

 private:
  struct LabelPlan {
    PlayerIndex player = -1;
    std::vector<std::vector<TypeIndex>> blocks;  // sorted by block name
  };

  int new_node(int parent) {
    const int id = static_cast<int>(result_.game.nodes.size());
    GameNode node;
    node.parent = parent;
    node.depth = parent == -1 ? 0 : result_.game.node(parent).depth + 1;
    result_.game.nodes.push_back(std::move(node));
    return id;
  }

  int build_cell(const StateSet& e, int round, int parent) {
    if (e.size() == 1) {
      const int id = new_node(parent);
      GameNode& node = result_.game.nodes[static_cast<std::size_t>(id)];
      node.terminal = true;
      node.outcome = env_->outcome_of(*e.begin());
      result_.marks.push_back(RoundMark{id, round - 1, e});
      return id;
    }
    const std::vector<StateSet>& cells = table_->partition(e);
    if (cells.size() == 1) {
      // Non-singleton fixed point: only representable as a leaf when the
      // choice function no longer distinguishes the surviving states.
      const OutcomeIndex first = env_->outcome_of(*e.begin());
      for (const StateId s : e) {
        if (env_->outcome_of(s) != first) {
          throw NotAchievableError(
              "fixed point " + env_->set_name(e) +
              " is neither a singleton nor outcome-constant");
        }
      }
      const int id = new_node(parent);
      GameNode& node = result_.game.nodes[static_cast<std::size_t>(id)];
      node.terminal = true;
      node.outcome = first;
      result_.marks.push_back(RoundMark{id, round - 1, e});
      result_.diagnostics.push_back(
          "non-singleton outcome-constant leaf at " + env_->set_name(e));
      return id;
    }
    for (const StateSet& cell : cells) {
      if (!cell.is_rectangle(env_->space)) {
        throw StructureError("cell " + env_->set_name(cell) +
                             " of " + env_->set_name(e) +
                             " is not a product of projections");
      }
    }
    // Per player: the distinct projection blocks, which must be pairwise
    // disjoint so that announcing a block is unambiguous.
    std::vector<std::vector<std::vector<TypeIndex>>> blocks(
        static_cast<std::size_t>(env_->player_count()));
    for (PlayerIndex i = 0; i < env_->player_count(); ++i) {
      for (const StateSet& cell : cells) {
        const auto block = cell.projection(env_->space, i);
        bool known = false;
        for (const auto& other : blocks[static_cast<std::size_t>(i)]) {
          if (other == block) {
            known = true;
            break;
          }
          for (const TypeIndex t : block) {
            if (std::binary_search(other.begin(), other.end(), t)) {
              throw StructureError(
                  "overlapping announcement blocks for player '" +
                  env_->players[static_cast<std::size_t>(i)] + "' below " +
                  env_->set_name(e));
            }
          }
        }
        if (!known) blocks[static_cast<std::size_t>(i)].push_back(block);
      }
      std::sort(blocks[static_cast<std::size_t>(i)].begin(),
                blocks[static_cast<std::size_t>(i)].end(),
                [&](const auto& a, const auto& b) {
                  return env_->block_name(i, a) < env_->block_name(i, b);
                });
    }
    std::vector<PlayerIndex> active;
    for (PlayerIndex i = 0; i < env_->player_count(); ++i) {
      if (blocks[static_cast<std::size_t>(i)].size() >= 2) {
        active.push_back(i);
      }
    }
    if (active.empty()) {
      throw InternalError("cell partition splits no player at " +
                          env_->set_name(e));
    }
    std::vector<std::vector<TypeIndex>> sides(
        static_cast<std::size_t>(env_->player_count()));
    for (PlayerIndex i = 0; i < env_->player_count(); ++i) {
      sides[static_cast<std::size_t>(i)] = e.projection(env_->space, i);
    }
    return build_move(e, round, parent, active, 0, blocks, sides, true);
  }

  int build_move(const StateSet& e, int round, int parent,
                 const std::vector<PlayerIndex>& active, std::size_t k,
                 const std::vector<std::vector<std::vector<TypeIndex>>>& blocks,
                 std::vector<std::vector<TypeIndex>>& sides,
                 bool round_start) {
    if (k == active.size()) {
      const StateSet child = StateSet::rectangle(env_->space, sides);
      bool is_cell = false;
      for (const StateSet& cell : table_->partition(e)) {
        if (cell == child) {
          is_cell = true;
          break;
        }
      }
      if (!is_cell) {
        throw StructureError("announced blocks select " +
                             env_->set_name(child) +
                             ", which is not a cell of " + env_->set_name(e));
      }
      return build_cell(child, round + 1, parent);
    }
    const PlayerIndex i = active[k];
    const int id = new_node(parent);
    {
      GameNode& node = result_.game.nodes[static_cast<std::size_t>(id)];
      node.mover = i;
      node.info_label = "r" + std::to_string(round) + "|" + e.key() + "|" +
                        env_->players[static_cast<std::size_t>(i)];
      if (round_start) {
        node.annotation = "round:" + std::to_string(round);
        result_.marks.push_back(RoundMark{id, round - 1, e});
      }
      plans_.emplace(node.info_label,
                     LabelPlan{i, blocks[static_cast<std::size_t>(i)]});
    }
    std::vector<std::pair<ActionLabel, int>> moves;
    for (const auto& block : blocks[static_cast<std::size_t>(i)]) {
      const auto saved = sides[static_cast<std::size_t>(i)];
      sides[static_cast<std::size_t>(i)] = block;
      const int child =
          build_move(e, round, id, active, k + 1, blocks, sides, false);
      sides[static_cast<std::size_t>(i)] = saved;
      moves.emplace_back(env_->block_name(i, block), child);
    }
    std::sort(moves.begin(), moves.end());
    result_.game.nodes[static_cast<std::size_t>(id)].moves = std::move(moves);
    return id;
  }

  void finalize_strategy() {
    for (const auto& [label, plan] : plans_) {
      const int types = env_->space.type_count(plan.player);
      std::vector<ActionLabel> per_type;
      per_type.reserve(static_cast<std::size_t>(types));
      for (TypeIndex t = 0; t < types; ++t) {
        const std::vector<TypeIndex>* own = nullptr;
        for (const auto& block : plan.blocks) {
          if (std::binary_search(block.begin(), block.end(), t)) {
            own = &block;
            break;
          }
        }
        // Types that never face this information set announce the first
        // block; any measurable completion works and this one is canonical.
        if (own == nullptr) own = &plan.blocks.front();
        per_type.push_back(env_->block_name(plan.player, *own));
      }
      result_.strategy.table[static_cast<std::size_t>(plan.player)][label] =
          std::move(per_type);
    }
  }

  OperatorTable* table_;
  const Environment* env_;
  SynthesisResult result_;
  std::map<std::string, LabelPlan> plans_;
};

}  // namespace detail

// Core builder: constructs the disclosure game for whatever the table's
// iteration produces, accepting outcome-constant fixed points as leaves.
inline SynthesisResult synthesize_from(OperatorTable& table) {
  detail::DisclosureBuilder builder(table);
  return builder.build();
}

// Public entry: requires full achievability.
inline SynthesisResult synthesize_disclosure_game(const Environment& env,
                                                  Notion id,
                                                  OperatorTable& table) {
  const AchievabilityReport report = check_achievable(table);
  if (!report.achievable) {
    std::string msg = "operator not achievable";
    if (report.blocking.has_value()) {
      msg += ": state " + env.state_name(report.blocking->theta) +
             " stalls at " + env.set_name(report.blocking->cell);
    }
    throw NotAchievableError(msg);
  }
  (void)id;
  return synthesize_from(table);
}

inline SynthesisResult synthesize_disclosure_game(const Environment& env,
                                                  Notion id) {
  OperatorTable table(env, id);
  return synthesize_disclosure_game(env, id, table);
}

// ---------------------------------------------------------------------------
// Direct mechanism: one sequentialized simultaneous round in which every
// player with at least two types announces a full type; leaves map the
// announced profile through the choice function.
// ---------------------------------------------------------------------------

struct DirectMechanism {
  GameTree game;
  StrategyProfile strategy;
};

inline DirectMechanism build_direct_mechanism(const Environment& env) {
  DirectMechanism out;
  out.strategy.table.assign(env.players.size(), {});
  std::vector<PlayerIndex> movers;
  for (PlayerIndex i = 0; i < env.player_count(); ++i) {
    if (env.space.type_count(i) >= 2) movers.push_back(i);
  }
  // Type announcement order per player: ascending type name, so children
  // sit in action-label order.
  std::vector<std::vector<TypeIndex>> order(
      static_cast<std::size_t>(env.player_count()));
  for (PlayerIndex i = 0; i < env.player_count(); ++i) {
    auto& seq = order[static_cast<std::size_t>(i)];
    seq.resize(static_cast<std::size_t>(env.space.type_count(i)));
    for (TypeIndex t = 0; t < env.space.type_count(i); ++t) {
      seq[static_cast<std::size_t>(t)] = t;
    }
    std::sort(seq.begin(), seq.end(), [&](TypeIndex a, TypeIndex b) {
      return env.type_names[static_cast<std::size_t>(i)]
                           [static_cast<std::size_t>(a)] <
             env.type_names[static_cast<std::size_t>(i)]
                           [static_cast<std::size_t>(b)];
    });
  }

  const auto new_node = [&out](int parent) {
    const int id = static_cast<int>(out.game.nodes.size());
    GameNode node;
    node.parent = parent;
    node.depth = parent == -1 ? 0 : out.game.node(parent).depth + 1;
    out.game.nodes.push_back(std::move(node));
    return id;
  };

  // Recursive product tree over announcing players; `announced` fixes the
  // single-type players at their only type.
  std::vector<TypeIndex> announced(
      static_cast<std::size_t>(env.player_count()), 0);
  const auto build = [&](auto&& self, std::size_t k, int parent) -> int {
    if (k == movers.size()) {
      const int id = new_node(parent);
      GameNode& node = out.game.nodes[static_cast<std::size_t>(id)];
      node.terminal = true;
      node.outcome = env.outcome_of(env.space.encode(announced));
      return id;
    }
    const PlayerIndex i = movers[k];
    const int id = new_node(parent);
    {
      GameNode& node = out.game.nodes[static_cast<std::size_t>(id)];
      node.mover = i;
      node.info_label =
          "announce|" + env.players[static_cast<std::size_t>(i)];
    }
    std::vector<std::pair<ActionLabel, int>> moves;
    for (const TypeIndex t : order[static_cast<std::size_t>(i)]) {
      announced[static_cast<std::size_t>(i)] = t;
      const int child = self(self, k + 1, id);
      moves.emplace_back(
          env.type_names[static_cast<std::size_t>(i)]
                        [static_cast<std::size_t>(t)],
          child);
    }
    announced[static_cast<std::size_t>(i)] = 0;
    std::sort(moves.begin(), moves.end());
    out.game.nodes[static_cast<std::size_t>(id)].moves = std::move(moves);
    return id;
  };

  if (movers.empty()) {
    // Degenerate one-state space: a single forced move so the game still
    // has a decision node and a terminal.
    const int root = new_node(-1);
    {
      GameNode& node = out.game.nodes[static_cast<std::size_t>(root)];
      node.mover = 0;
      node.info_label = "announce|" + env.players.front();
    }
    const int leaf = new_node(root);
    {
      GameNode& node = out.game.nodes[static_cast<std::size_t>(leaf)];
      node.terminal = true;
      node.outcome = env.outcome_of(env.space.encode(announced));
    }
    out.game.nodes[static_cast<std::size_t>(root)].moves = {
        {"reveal", leaf}};
    out.strategy.table[0]["announce|" + env.players.front()] =
        std::vector<ActionLabel>(
            static_cast<std::size_t>(env.space.type_count(0)), "reveal");
    return out;
  }

  build(build, 0, -1);
  for (const PlayerIndex i : movers) {
    std::vector<ActionLabel> per_type;
    per_type.reserve(
        static_cast<std::size_t>(env.space.type_count(i)));
    for (TypeIndex t = 0; t < env.space.type_count(i); ++t) {
      per_type.push_back(env.type_names[static_cast<std::size_t>(i)]
                                       [static_cast<std::size_t>(t)]);
    }
    out.strategy.table[static_cast<std::size_t>(i)]
                      ["announce|" + env.players[static_cast<std::size_t>(i)]] =
        std::move(per_type);
  }
  return out;
}

// Gated variant: only emits the direct mechanism when the notion's global
// incentive inequalities actually hold, mirroring how the disclosure
// builder refuses unachievable operators.
inline DirectMechanism synthesize_direct_mechanism(const Environment& env,
                                                   Notion id) {
  const StateSet full = StateSet::full(env.space);
  NotionContext ctx{&env, full, full, full};
  for (StateId theta = 0; theta < env.space.states(); ++theta) {
    for (PlayerIndex i = 0; i < env.player_count(); ++i) {
      const TypeIndex own = env.space.component(theta, i);
      for (TypeIndex other = 0; other < env.space.type_count(i); ++other) {
        if (other == own) continue;
        const StateId mimic = env.space.with_component(theta, i, other);
        if (!eval_notion(id, ctx, theta, mimic, i)) {
          throw NotAchievableError(
              std::string("incentive inequality fails for notion ") +
              notion_name(id) + " at state " + env.state_name(theta) +
              ", player '" + env.players[static_cast<std::size_t>(i)] +
              "' mimicking type '" +
              env.type_names[static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(other)] +
              "'");
        }
      }
    }
  }
  return build_direct_mechanism(env);
}

}  // namespace seqmech
