#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqmech/environment.hpp"
#include "seqmech/errors.hpp"
#include "seqmech/notions.hpp"
#include "seqmech/state.hpp"

namespace seqmech {

// Player i with true state `honest` would rather act as `deviant` when the
// one-shot comparison on `e` rejects the honest choice.  `gamma_of_honest`
// is the cell currently attached to the honest state (consulted by the
// strongest notion only).
inline bool tempted(const Environment& env, Notion id, const StateSet& e,
                    const StateSet& gamma_of_honest, StateId honest,
                    StateId deviant, PlayerIndex i) {
  if (!e.contains(honest) || !e.contains(deviant)) return false;
  NotionContext ctx{&env, e, e, gamma_of_honest};
  return !eval_notion(id, ctx, honest, deviant, i);
}

// Two states are similar for player i when they share i's type or either
// one tempts i toward the other.  `gamma_a`/`gamma_b` are the cells
// currently attached to a and b respectively.
inline bool similar(const Environment& env, Notion id, const StateSet& e,
                    const StateSet& gamma_a, const StateSet& gamma_b,
                    StateId a, StateId b, PlayerIndex i) {
  if (env.space.component(a, i) == env.space.component(b, i)) return true;
  return tempted(env, id, e, gamma_a, a, b, i) ||
         tempted(env, id, e, gamma_b, b, a, i);
}

// Per-round snapshots of the bundling recursion on one set: round 0 holds
// each state alone, and each later round adds every state similar (for all
// players at once) to some current member, evaluating similarity with the
// previous round's bundles attached.  The recursion stops when a round
// reproduces itself.
struct OperatorStages {
  // cells_by_round[r][k] is the round-r bundle of e.states()[k].
  std::vector<std::vector<StateSet>> cells_by_round;
  int rounds_to_fix = 0;
};

// Memoized cell structure of one criterion over one environment.  Cells
// grow from singletons by repeatedly absorbing states that are similar for
// every player simultaneously; the stabilized bundles are the cells.
class OperatorTable {
 public:
  OperatorTable(const Environment& env, Notion id) : env_(&env), id_(id) {}

  const Environment& environment() const { return *env_; }
  Notion notion() const { return id_; }

  // The distinct cells of e, sorted.
  const std::vector<StateSet>& partition(const StateSet& e) {
    return compute(e).cells;
  }

  // The cell of theta inside e; a state outside e gets e itself back.
  StateSet cell(const StateSet& e, StateId theta) {
    if (!e.contains(theta)) return e;
    const Entry& entry = compute(e);
    return entry.stages.cells_by_round.back()[entry.position.at(theta)];
  }

  // The per-player type blocks of theta's cell.
  std::vector<TypeIndex> cell_component(const StateSet& e, StateId theta,
                                        PlayerIndex i) {
    return cell(e, theta).projection(env_->space, i);
  }

  const OperatorStages& stages(const StateSet& e) { return compute(e).stages; }

  // Keys of every set this table has partitioned so far, sorted.
  std::vector<std::string> touched() const {
    std::vector<std::string> keys;
    keys.reserve(memo_.size());
    for (const auto& [key, entry] : memo_) keys.push_back(key);
    return keys;
  }

 private:
  struct Entry {
    std::vector<StateSet> cells;               // distinct, sorted
    std::map<StateId, std::size_t> position;   // state -> index in e.states()
    OperatorStages stages;
  };

  const Entry& compute(const StateSet& e) {
    if (e.empty()) throw PreconditionError("cannot partition an empty set");
    if (!e.is_rectangle(env_->space)) {
      throw PreconditionError(
          "cell computation requires a rectangular set of states");
    }
    const std::string key = e.key();
    const auto found = memo_.find(key);
    if (found != memo_.end()) return found->second;

    const std::vector<StateId>& states = e.states();
    const std::size_t n = states.size();
    Entry entry;
    for (std::size_t k = 0; k < n; ++k) entry.position[states[k]] = k;

    std::vector<StateSet> round0;
    round0.reserve(n);
    for (std::size_t k = 0; k < n; ++k) round0.push_back(StateSet({states[k]}));
    entry.stages.cells_by_round.push_back(std::move(round0));

    // Each productive round grows at least one bundle by one state.
    const int guard = static_cast<int>(n * n) + 2;
    for (int round = 0;; ++round) {
      if (round >= guard) {
        throw InternalError("cell recursion failed to stabilize");
      }
      const std::vector<StateSet>& prev = entry.stages.cells_by_round.back();
      std::vector<StateSet> next(n);
      for (std::size_t a = 0; a < n; ++a) {
        std::vector<StateId> members;
        for (std::size_t b = 0; b < n; ++b) {
          bool absorbed = false;
          for (StateId mid : prev[a]) {
            const std::size_t m = entry.position.at(mid);
            bool all_players = true;
            for (PlayerIndex i = 0; i < env_->player_count(); ++i) {
              if (!similar(*env_, id_, e, prev[m], prev[b], mid, states[b],
                           i)) {
                all_players = false;
                break;
              }
            }
            if (all_players) {
              absorbed = true;
              break;
            }
          }
          if (absorbed) members.push_back(states[b]);
        }
        next[a] = StateSet(std::move(members));
      }
      if (next == prev) {
        entry.stages.rounds_to_fix = round;
        break;
      }
      entry.stages.cells_by_round.push_back(std::move(next));
    }

    const std::vector<StateSet>& final_cells =
        entry.stages.cells_by_round.back();
    for (const StateSet& cell : final_cells) {
      bool seen = false;
      for (const StateSet& have : entry.cells) {
        if (have == cell) {
          seen = true;
          break;
        }
      }
      if (!seen) entry.cells.push_back(cell);
    }
    std::sort(entry.cells.begin(), entry.cells.end());

    return memo_.emplace(key, std::move(entry)).first->second;
  }

  const Environment* env_;
  Notion id_;
  std::map<std::string, Entry> memo_;
};

// One state's descent: chain[0] is the full state space and each later
// element is the cell of theta inside the previous one, ending at the first
// set that reproduces itself.
struct IterationTrace {
  StateId theta = 0;
  std::vector<StateSet> chain;
  int fixed_point_round = 0;

  const StateSet& fixed_point() const { return chain.back(); }
};

inline IterationTrace iterate(OperatorTable& table, StateId theta) {
  const Environment& env = table.environment();
  IterationTrace trace;
  trace.theta = theta;
  trace.chain.push_back(StateSet::full(env.space));
  const int guard = env.space.states() + 2;
  for (int n = 0; n < guard; ++n) {
    const StateSet& current = trace.chain.back();
    StateSet next = table.cell(current, theta);
    if (next == current) {
      trace.fixed_point_round = n;
      return trace;
    }
    trace.chain.push_back(std::move(next));
  }
  throw InternalError("iteration failed to reach a fixed point");
}

// A state whose descent stalls on a set that still bundles distinct states.
struct MergeWitness {
  StateId theta = 0;
  StateSet cell;
};

struct AchievabilityReport {
  bool achievable = false;
  // Greatest fixed-point round over all starting states: the horizon of
  // the canonical structure.
  int rounds = 0;
  std::vector<IterationTrace> traces;
  std::optional<MergeWitness> blocking;
};

// The criterion admits full separation exactly when every descent ends in
// a singleton.
inline AchievabilityReport check_achievable(OperatorTable& table) {
  const Environment& env = table.environment();
  AchievabilityReport report;
  report.achievable = true;
  for (StateId theta = 0; theta < env.space.states(); ++theta) {
    IterationTrace trace = iterate(table, theta);
    if (trace.fixed_point_round > report.rounds) {
      report.rounds = trace.fixed_point_round;
    }
    if (trace.fixed_point().size() > 1 && report.achievable) {
      report.achievable = false;
      report.blocking = MergeWitness{theta, trace.fixed_point()};
    }
    report.traces.push_back(std::move(trace));
  }
  return report;
}

struct FAchievabilityReport {
  bool f_achievable = false;
  int rounds = 0;
  std::optional<MergeWitness> blocking;
};

// The weaker demand: descents may stall on several states, as long as the
// chosen outcome no longer distinguishes them.
inline FAchievabilityReport check_f_achievable(OperatorTable& table) {
  const Environment& env = table.environment();
  FAchievabilityReport report;
  report.f_achievable = true;
  for (StateId theta = 0; theta < env.space.states(); ++theta) {
    const IterationTrace trace = iterate(table, theta);
    if (trace.fixed_point_round > report.rounds) {
      report.rounds = trace.fixed_point_round;
    }
    const StateSet& fixed = trace.fixed_point();
    for (StateId s : fixed) {
      if (env.outcome_of(s) != env.outcome_of(*fixed.begin())) {
        if (report.f_achievable) {
          report.f_achievable = false;
          report.blocking = MergeWitness{theta, fixed};
        }
        break;
      }
    }
  }
  return report;
}

// Verifies that an operator given by `cell_of` respects the separations the
// criterion forbids: whenever acting as theta' is strictly tempting for
// some player at theta (under belief `belief_of(e)`), theta' must stay
// bundled with theta.  `domain` lists the (set, state) pairs to examine.
struct ConsistencyViolation {
  StateSet set;
  StateId theta = 0;
  StateId theta_prime = 0;
  PlayerIndex player = 0;
};

struct ConsistencyReport {
  bool consistent = true;
  std::optional<ConsistencyViolation> violation;
  long long checked = 0;
};

template <typename CellFn, typename BeliefFn>
ConsistencyReport check_consistency(
    Notion id, const Environment& env, CellFn&& cell_of,
    BeliefFn&& belief_of,
    const std::vector<std::pair<StateSet, StateId>>& domain) {
  ConsistencyReport report;
  for (const auto& [e, theta] : domain) {
    if (!e.contains(theta)) continue;
    const StateSet cell = cell_of(e, theta);
    const StateSet belief = belief_of(e);
    for (StateId theta_prime : e) {
      for (PlayerIndex i = 0; i < env.player_count(); ++i) {
        NotionContext ctx{&env, e, belief, cell};
        ++report.checked;
        if (!eval_notion(id, ctx, theta, theta_prime, i)) {
          const std::vector<TypeIndex> component =
              cell.projection(env.space, i);
          const TypeIndex tp = env.space.component(theta_prime, i);
          if (!std::binary_search(component.begin(), component.end(), tp)) {
            report.consistent = false;
            report.violation = ConsistencyViolation{e, theta, theta_prime, i};
            return report;
          }
        }
      }
    }
  }
  return report;
}

}  // namespace seqmech
