#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "seqmech/errors.hpp"
#include "seqmech/rational.hpp"
#include "seqmech/state.hpp"

namespace seqmech {

// A finite social-choice environment: players with finite type sets, a
// finite outcome set, per-type utility over outcomes, a total choice
// function from states to outcomes, and optionally a common prior over
// states.  Instances are immutable after construction; every algorithm in
// the library takes them by const reference.
struct Environment {
  std::vector<std::string> players;
  std::vector<std::vector<std::string>> type_names;  // per player
  std::vector<std::string> outcomes;
  StateSpace space;
  // utilities[i][t][o]: payoff of player i with type t at outcome o.
  std::vector<std::vector<std::vector<Rational>>> utilities;
  std::vector<OutcomeIndex> scf;  // indexed by StateId
  std::optional<std::vector<Rational>> prior;  // indexed by StateId

  int player_count() const noexcept {
    return static_cast<int>(players.size());
  }

  Rational utility(PlayerIndex i, TypeIndex t, OutcomeIndex o) const {
    return utilities.at(i).at(t).at(o);
  }

  // u_i with type t evaluated at the chosen outcome of state s.
  Rational utility_at(PlayerIndex i, TypeIndex t, StateId s) const {
    return utilities.at(i).at(t).at(scf.at(s));
  }

  OutcomeIndex outcome_of(StateId s) const { return scf.at(s); }

  // Conditional belief of player i with type t over opponent profiles,
  // derived from the prior: weight(k) = prior(t, k) / marginal(t).  Keys are
  // slot-i-zeroed state ids.  Requires a prior and a positive marginal.
  std::map<StateId, Rational> conditional_belief(PlayerIndex i,
                                                 TypeIndex t) const {
    if (!prior.has_value()) {
      throw MissingPriorError("conditional belief requires a prior");
    }
    Rational marginal(0);
    std::map<StateId, Rational> joint;
    for (StateId s = 0; s < space.states(); ++s) {
      if (space.component(s, i) != t) continue;
      const Rational p = prior->at(s);
      marginal += p;
      joint[space.opponents_key(s, i)] = p;
    }
    if (marginal == Rational(0)) {
      throw ZeroMarginalError("type '" + type_names.at(i).at(t) +
                              "' of player '" + players.at(i) +
                              "' has prior mass zero");
    }
    for (auto& [k, p] : joint) p = p / marginal;
    return joint;
  }

  // Structural diagnostics; an empty result means the environment is valid.
  std::vector<std::string> validate() const {
    std::vector<std::string> issues;
    auto check_unique = [&issues](const std::vector<std::string>& names,
                                  const std::string& what) {
      std::set<std::string> seen;
      for (const auto& n : names) {
        if (n.empty()) issues.push_back("empty " + what + " name");
        if (!seen.insert(n).second) {
          issues.push_back("duplicate " + what + " name '" + n + "'");
        }
      }
    };
    check_unique(players, "player");
    check_unique(outcomes, "outcome");
    if (players.empty()) issues.push_back("no players");
    if (outcomes.empty()) issues.push_back("no outcomes");
    if (type_names.size() != players.size()) {
      issues.push_back("type table arity mismatch");
      return issues;
    }
    for (std::size_t i = 0; i < players.size(); ++i) {
      if (type_names[i].empty()) {
        issues.push_back("player '" + players[i] + "' has no types");
      }
      check_unique(type_names[i], "type");
    }
    if (space.players() != static_cast<int>(players.size())) {
      issues.push_back("state space arity mismatch");
      return issues;
    }
    for (std::size_t i = 0; i < players.size(); ++i) {
      if (space.type_count(static_cast<int>(i)) !=
          static_cast<int>(type_names[i].size())) {
        issues.push_back("state space shape mismatch for player '" +
                         players[i] + "'");
        return issues;
      }
    }
    if (utilities.size() != players.size()) {
      issues.push_back("utility table missing players");
      return issues;
    }
    for (std::size_t i = 0; i < players.size(); ++i) {
      if (utilities[i].size() != type_names[i].size()) {
        issues.push_back("utility table missing types for player '" +
                         players[i] + "'");
        return issues;
      }
      for (std::size_t t = 0; t < utilities[i].size(); ++t) {
        if (utilities[i][t].size() != outcomes.size()) {
          issues.push_back("utility table missing outcomes for player '" +
                           players[i] + "' type '" + type_names[i][t] + "'");
          return issues;
        }
      }
    }
    if (static_cast<int>(scf.size()) != space.states()) {
      issues.push_back("choice function is not total");
    } else {
      for (StateId s = 0; s < space.states(); ++s) {
        if (scf[s] < 0 || scf[s] >= static_cast<int>(outcomes.size())) {
          issues.push_back("choice function value out of range at state " +
                           state_name(s));
        }
      }
    }
    if (prior.has_value()) {
      if (static_cast<int>(prior->size()) != space.states()) {
        issues.push_back("prior is not total");
      } else {
        Rational sum(0);
        for (StateId s = 0; s < space.states(); ++s) {
          if (prior->at(s) < Rational(0)) {
            issues.push_back("negative prior at state " + state_name(s));
          }
          sum += prior->at(s);
        }
        if (sum != Rational(1)) {
          issues.push_back("prior sums to " + sum.to_string() + ", not 1");
        }
      }
    }
    return issues;
  }

  std::string state_name(StateId s) const {
    const auto profile = space.decode(s);
    std::string out = "(";
    for (int i = 0; i < space.players(); ++i) {
      if (i) out += ",";
      out += type_names[i][profile[i]];
    }
    return out + ")";
  }

  std::string set_name(const StateSet& e) const {
    std::string out = "{";
    bool first = true;
    for (StateId s : e) {
      if (!first) out += " ";
      first = false;
      out += state_name(s);
    }
    return out + "}";
  }

  std::string block_name(PlayerIndex i,
                         const std::vector<TypeIndex>& block) const {
    std::string out = "{";
    for (std::size_t j = 0; j < block.size(); ++j) {
      if (j) out += ",";
      out += type_names.at(i).at(block[j]);
    }
    return out + "}";
  }

  TypeIndex type_index(PlayerIndex i, const std::string& name) const {
    const auto& names = type_names.at(i);
    for (std::size_t t = 0; t < names.size(); ++t) {
      if (names[t] == name) return static_cast<TypeIndex>(t);
    }
    throw InputError("unknown type '" + name + "' for player '" +
                     players.at(i) + "'");
  }

  PlayerIndex player_index(const std::string& name) const {
    for (std::size_t i = 0; i < players.size(); ++i) {
      if (players[i] == name) return static_cast<PlayerIndex>(i);
    }
    throw InputError("unknown player '" + name + "'");
  }

  OutcomeIndex outcome_index(const std::string& name) const {
    for (std::size_t o = 0; o < outcomes.size(); ++o) {
      if (outcomes[o] == name) return static_cast<OutcomeIndex>(o);
    }
    throw InputError("unknown outcome '" + name + "'");
  }
};

}  // namespace seqmech
