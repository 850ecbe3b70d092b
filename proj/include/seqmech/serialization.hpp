#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seqmech/environment.hpp"
#include "seqmech/errors.hpp"
#include "seqmech/game.hpp"
#include "seqmech/rational.hpp"
#include "seqmech/state.hpp"

namespace seqmech {

// JSON readers/writers for the two on-disk formats: environment documents
// (players, types, outcomes, utilities, choice function, optional prior)
// and game documents (tree nodes, terminal outcomes, strategy table).
// Readers validate aggressively and throw InputError with the offending
// key; writers use std::map-backed objects so output key order — and thus
// the serialized bytes — is deterministic.

using Json = nlohmann::ordered_json;

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

inline std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out.push_back(sep);
    out += parts[k];
  }
  return out;
}

inline const Json& require(const Json& doc, const std::string& key) {
  const auto it = doc.find(key);
  if (it == doc.end()) {
    throw InputError("missing field '" + key + "'");
  }
  return *it;
}

inline std::vector<std::string> string_list(const Json& value,
                                            const std::string& what) {
  if (!value.is_array()) {
    throw InputError("field '" + what + "' must be a list of strings");
  }
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) {
      throw InputError("field '" + what + "' must be a list of strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

inline Rational parse_rational_field(const Json& value,
                                     const std::string& where) {
  try {
    if (value.is_string()) return Rational::parse(value.get<std::string>());
    if (value.is_number_integer()) {
      return Rational(value.get<long long>());
    }
  } catch (const Error& e) {
    throw InputError(std::string("bad rational at ") + where + ": " +
                     e.what());
  }
  throw InputError("field at " + where +
                   " must be a \"p/q\" string or an integer");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Environment documents.
// ---------------------------------------------------------------------------

inline Environment environment_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("environment must be an object");
  Environment env;
  env.players = detail::string_list(detail::require(doc, "players"),
                                    "players");
  if (env.players.empty()) throw InputError("field 'players' is empty");

  const Json& types = detail::require(doc, "types");
  if (!types.is_object()) {
    throw InputError("field 'types' must map players to type lists");
  }
  env.type_names.reserve(env.players.size());
  for (const auto& player : env.players) {
    const auto it = types.find(player);
    if (it == types.end()) {
      throw InputError("field 'types' has no entry for player '" + player +
                       "'");
    }
    env.type_names.push_back(
        detail::string_list(*it, "types." + player));
    if (env.type_names.back().empty()) {
      throw InputError("player '" + player + "' has an empty type list");
    }
  }
  for (const auto& [key, unused] : types.items()) {
    (void)unused;
    bool known = false;
    for (const auto& player : env.players) known = known || player == key;
    if (!known) {
      throw InputError("field 'types' names unknown player '" + key + "'");
    }
  }

  env.outcomes = detail::string_list(detail::require(doc, "outcomes"),
                                     "outcomes");
  if (env.outcomes.empty()) throw InputError("field 'outcomes' is empty");

  std::vector<int> shape;
  shape.reserve(env.type_names.size());
  for (const auto& names : env.type_names) {
    shape.push_back(static_cast<int>(names.size()));
  }
  env.space = StateSpace(shape);

  // Names are resolved through temporary indexes so malformed keys report
  // the exact offending composite string.
  const auto player_of = [&env](const std::string& name,
                                const std::string& where) -> PlayerIndex {
    for (std::size_t i = 0; i < env.players.size(); ++i) {
      if (env.players[i] == name) return static_cast<PlayerIndex>(i);
    }
    throw InputError("unknown player '" + name + "' in " + where);
  };
  const auto type_of = [&env](PlayerIndex i, const std::string& name,
                              const std::string& where) -> TypeIndex {
    const auto& names = env.type_names[static_cast<std::size_t>(i)];
    for (std::size_t t = 0; t < names.size(); ++t) {
      if (names[t] == name) return static_cast<TypeIndex>(t);
    }
    throw InputError("unknown type '" + name + "' in " + where);
  };
  const auto outcome_of = [&env](const std::string& name,
                                 const std::string& where) -> OutcomeIndex {
    for (std::size_t o = 0; o < env.outcomes.size(); ++o) {
      if (env.outcomes[o] == name) return static_cast<OutcomeIndex>(o);
    }
    throw InputError("unknown outcome '" + name + "' in " + where);
  };
  const auto state_of = [&](const std::string& key,
                            const std::string& where) -> StateId {
    const auto parts = detail::split(key, ',');
    if (static_cast<int>(parts.size()) != env.space.players()) {
      throw InputError("state key '" + key + "' in " + where + " needs " +
                       std::to_string(env.space.players()) + " types");
    }
    std::vector<TypeIndex> profile;
    profile.reserve(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      profile.push_back(type_of(static_cast<PlayerIndex>(i), parts[i],
                                "state key '" + key + "' (" + where + ")"));
    }
    return env.space.encode(profile);
  };

  const Json& utilities = detail::require(doc, "utilities");
  if (!utilities.is_object()) {
    throw InputError("field 'utilities' must be an object");
  }
  env.utilities.assign(
      env.players.size(),
      std::vector<std::vector<Rational>>());
  for (std::size_t i = 0; i < env.players.size(); ++i) {
    env.utilities[i].assign(env.type_names[i].size(),
                            std::vector<Rational>(env.outcomes.size()));
  }
  std::vector<std::vector<std::vector<bool>>> seen(env.players.size());
  for (std::size_t i = 0; i < env.players.size(); ++i) {
    seen[i].assign(env.type_names[i].size(),
                   std::vector<bool>(env.outcomes.size(), false));
  }
  for (const auto& [key, value] : utilities.items()) {
    const auto parts = detail::split(key, '|');
    if (parts.size() != 3) {
      throw InputError("utility key '" + key +
                       "' must be 'player|type|outcome'");
    }
    const std::string where = "utilities['" + key + "']";
    const PlayerIndex i = player_of(parts[0], where);
    const TypeIndex t = type_of(i, parts[1], where);
    const OutcomeIndex o = outcome_of(parts[2], where);
    env.utilities[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]
                 [static_cast<std::size_t>(o)] =
        detail::parse_rational_field(value, where);
    seen[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]
        [static_cast<std::size_t>(o)] = true;
  }
  for (std::size_t i = 0; i < env.players.size(); ++i) {
    for (std::size_t t = 0; t < env.type_names[i].size(); ++t) {
      for (std::size_t o = 0; o < env.outcomes.size(); ++o) {
        if (!seen[i][t][o]) {
          throw InputError("missing utility '" + env.players[i] + "|" +
                           env.type_names[i][t] + "|" + env.outcomes[o] +
                           "'");
        }
      }
    }
  }

  const Json& scf = detail::require(doc, "scf");
  if (!scf.is_object()) throw InputError("field 'scf' must be an object");
  env.scf.assign(static_cast<std::size_t>(env.space.states()), -1);
  for (const auto& [key, value] : scf.items()) {
    if (!value.is_string()) {
      throw InputError("scf['" + key + "'] must name an outcome");
    }
    const StateId s = state_of(key, "scf");
    if (env.scf[static_cast<std::size_t>(s)] != -1) {
      throw InputError("scf key '" + key + "' repeats a state");
    }
    env.scf[static_cast<std::size_t>(s)] =
        outcome_of(value.get<std::string>(), "scf['" + key + "']");
  }
  for (StateId s = 0; s < env.space.states(); ++s) {
    if (env.scf[static_cast<std::size_t>(s)] == -1) {
      throw InputError("scf has no entry for state " + env.state_name(s));
    }
  }

  if (doc.contains("prior")) {
    const Json& prior = doc.at("prior");
    if (!prior.is_object()) {
      throw InputError("field 'prior' must be an object");
    }
    std::vector<Rational> weights(
        static_cast<std::size_t>(env.space.states()), Rational(0));
    std::vector<bool> got(static_cast<std::size_t>(env.space.states()),
                          false);
    for (const auto& [key, value] : prior.items()) {
      const StateId s = state_of(key, "prior");
      if (got[static_cast<std::size_t>(s)]) {
        throw InputError("prior key '" + key + "' repeats a state");
      }
      got[static_cast<std::size_t>(s)] = true;
      weights[static_cast<std::size_t>(s)] =
          detail::parse_rational_field(value, "prior['" + key + "']");
    }
    for (StateId s = 0; s < env.space.states(); ++s) {
      if (!got[static_cast<std::size_t>(s)]) {
        throw InputError("prior has no entry for state " +
                         env.state_name(s));
      }
    }
    env.prior = std::move(weights);
  }

  const auto issues = env.validate();
  if (!issues.empty()) {
    std::string msg = "invalid environment:";
    for (const auto& issue : issues) msg += " " + issue + ";";
    throw InputError(msg);
  }
  return env;
}

inline Json environment_to_json(const Environment& env) {
  Json doc = Json::object();
  doc["players"] = env.players;
  Json types = Json::object();
  for (std::size_t i = 0; i < env.players.size(); ++i) {
    types[env.players[i]] = env.type_names[i];
  }
  doc["types"] = std::move(types);
  doc["outcomes"] = env.outcomes;
  Json utilities = Json::object();
  for (std::size_t i = 0; i < env.players.size(); ++i) {
    for (std::size_t t = 0; t < env.type_names[i].size(); ++t) {
      for (std::size_t o = 0; o < env.outcomes.size(); ++o) {
        utilities[env.players[i] + "|" + env.type_names[i][t] + "|" +
                  env.outcomes[o]] = env.utilities[i][t][o].to_string();
      }
    }
  }
  doc["utilities"] = std::move(utilities);
  const auto state_key = [&env](StateId s) {
    const auto profile = env.space.decode(s);
    std::vector<std::string> parts;
    parts.reserve(profile.size());
    for (int i = 0; i < env.space.players(); ++i) {
      parts.push_back(env.type_names[static_cast<std::size_t>(i)]
                                    [static_cast<std::size_t>(profile[i])]);
    }
    return detail::join(parts, ',');
  };
  Json scf = Json::object();
  for (StateId s = 0; s < env.space.states(); ++s) {
    scf[state_key(s)] = env.outcomes[static_cast<std::size_t>(
        env.scf[static_cast<std::size_t>(s)])];
  }
  doc["scf"] = std::move(scf);
  if (env.prior.has_value()) {
    Json prior = Json::object();
    for (StateId s = 0; s < env.space.states(); ++s) {
      prior[state_key(s)] =
          (*env.prior)[static_cast<std::size_t>(s)].to_string();
    }
    doc["prior"] = std::move(prior);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Game documents: tree + outcomes + strategy, node ids in depth-first
// order with children listed by ascending action label.
// ---------------------------------------------------------------------------

inline Json game_to_json(const Environment& env, const GameTree& game,
                         const StrategyProfile& strategy) {
  Json doc = Json::object();
  Json nodes = Json::array();
  Json leaves = Json::object();
  for (int id = 0; id < static_cast<int>(game.nodes.size()); ++id) {
    const GameNode& node = game.node(id);
    if (node.terminal) {
      leaves[std::to_string(id)] =
          env.outcomes.at(static_cast<std::size_t>(node.outcome));
      continue;
    }
    Json entry = Json::object();
    entry["id"] = id;
    entry["mover"] = env.players.at(static_cast<std::size_t>(node.mover));
    entry["info_label"] = node.info_label;
    Json actions = Json::object();
    for (const auto& [action, child] : node.moves) actions[action] = child;
    entry["actions"] = std::move(actions);
    if (!node.annotation.empty()) entry["annotation"] = node.annotation;
    nodes.push_back(std::move(entry));
  }
  doc["nodes"] = std::move(nodes);
  doc["leaves"] = std::move(leaves);
  Json rows = Json::array();
  for (std::size_t i = 0; i < strategy.table.size(); ++i) {
    for (const auto& [label, per_type] : strategy.table[i]) {
      for (std::size_t t = 0; t < per_type.size(); ++t) {
        Json row = Json::object();
        row["player"] = env.players.at(i);
        row["type"] = env.type_names.at(i).at(t);
        row["info_label"] = label;
        row["action"] = per_type[t];
        rows.push_back(std::move(row));
      }
    }
  }
  doc["strategy"] = std::move(rows);
  return doc;
}

inline GameDocument game_from_json(const Environment& env, const Json& doc) {
  if (!doc.is_object()) throw InputError("game must be an object");
  const Json& nodes = detail::require(doc, "nodes");
  const Json& leaves = detail::require(doc, "leaves");
  if (!nodes.is_array()) throw InputError("field 'nodes' must be a list");
  if (!leaves.is_object()) throw InputError("field 'leaves' must be an object");

  // First pass: collect every node id so the tree vector can be sized, then
  // fill decision nodes and leaves; parents/depths are recovered from the
  // child links.
  std::map<int, const Json*> decisions;
  for (const auto& entry : nodes) {
    if (!entry.is_object()) throw InputError("node entries must be objects");
    const Json& id_field = detail::require(entry, "id");
    if (!id_field.is_number_integer()) {
      throw InputError("node id must be an integer");
    }
    const int id = id_field.get<int>();
    if (!decisions.emplace(id, &entry).second) {
      throw InputError("duplicate node id " + std::to_string(id));
    }
  }
  std::map<int, OutcomeIndex> terminal_outcomes;
  for (const auto& [key, value] : leaves.items()) {
    int id = -1;
    try {
      std::size_t pos = 0;
      id = std::stoi(key, &pos);
      if (pos != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw InputError("leaf key '" + key + "' is not a node id");
    }
    if (!value.is_string()) {
      throw InputError("leaves['" + key + "'] must name an outcome");
    }
    if (decisions.count(id)) {
      throw InputError("node " + std::to_string(id) +
                       " is both a decision node and a leaf");
    }
    if (!terminal_outcomes
             .emplace(id, env.outcome_index(value.get<std::string>()))
             .second) {
      throw InputError("duplicate leaf id " + std::to_string(id));
    }
  }

  const int total = static_cast<int>(decisions.size()) +
                    static_cast<int>(terminal_outcomes.size());
  if (total == 0) throw InputError("game has no nodes");
  GameDocument out;
  out.game.nodes.assign(static_cast<std::size_t>(total), GameNode{});
  const auto in_range = [total](int id) { return id >= 0 && id < total; };
  for (const auto& [id, unused] : decisions) {
    (void)unused;
    if (!in_range(id)) {
      throw InputError("node id " + std::to_string(id) +
                       " outside dense 0.." + std::to_string(total - 1));
    }
  }
  for (const auto& [id, unused] : terminal_outcomes) {
    (void)unused;
    if (!in_range(id)) {
      throw InputError("leaf id " + std::to_string(id) +
                       " outside dense 0.." + std::to_string(total - 1));
    }
  }

  for (const auto& [id, outcome] : terminal_outcomes) {
    GameNode& node = out.game.nodes[static_cast<std::size_t>(id)];
    node.terminal = true;
    node.outcome = outcome;
  }
  for (const auto& [id, entry] : decisions) {
    GameNode& node = out.game.nodes[static_cast<std::size_t>(id)];
    node.terminal = false;
    node.mover =
        env.player_index(detail::require(*entry, "mover").get<std::string>());
    const Json& label = detail::require(*entry, "info_label");
    if (!label.is_string() || label.get<std::string>().empty()) {
      throw InputError("node " + std::to_string(id) +
                       " needs a nonempty info_label");
    }
    node.info_label = label.get<std::string>();
    const Json& actions = detail::require(*entry, "actions");
    if (!actions.is_object() || actions.empty()) {
      throw InputError("node " + std::to_string(id) +
                       " needs a nonempty actions object");
    }
    for (const auto& [action, child] : actions.items()) {
      if (!child.is_number_integer() || !in_range(child.get<int>())) {
        throw InputError("actions['" + action + "'] of node " +
                         std::to_string(id) + " must be a node id");
      }
      node.moves.emplace_back(action, child.get<int>());
    }
    std::sort(node.moves.begin(), node.moves.end());
    if (entry->contains("annotation")) {
      node.annotation = entry->at("annotation").get<std::string>();
    }
  }

  // Recover parents and depths by walking the child links from the root.
  std::vector<int> seen_parent(static_cast<std::size_t>(total), -2);
  seen_parent[0] = -1;
  std::vector<int> stack = {0};
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    GameNode& node = out.game.nodes[static_cast<std::size_t>(id)];
    node.parent = seen_parent[static_cast<std::size_t>(id)];
    node.depth =
        node.parent == -1
            ? 0
            : out.game.nodes[static_cast<std::size_t>(node.parent)].depth + 1;
    for (const auto& [action, child] : node.moves) {
      (void)action;
      if (seen_parent[static_cast<std::size_t>(child)] != -2) {
        throw InputError("node " + std::to_string(child) +
                         " has two parents or forms a cycle");
      }
      seen_parent[static_cast<std::size_t>(child)] = id;
      stack.push_back(child);
    }
  }
  for (int id = 0; id < total; ++id) {
    if (seen_parent[static_cast<std::size_t>(id)] == -2) {
      throw InputError("node " + std::to_string(id) +
                       " is unreachable from the root");
    }
  }

  const Json& rows = detail::require(doc, "strategy");
  if (!rows.is_array()) throw InputError("field 'strategy' must be a list");
  out.strategy.table.assign(env.players.size(), {});
  for (const auto& row : rows) {
    if (!row.is_object()) throw InputError("strategy rows must be objects");
    const PlayerIndex i =
        env.player_index(detail::require(row, "player").get<std::string>());
    const TypeIndex t = env.type_index(
        i, detail::require(row, "type").get<std::string>());
    const std::string label =
        detail::require(row, "info_label").get<std::string>();
    const std::string action =
        detail::require(row, "action").get<std::string>();
    auto& per_type = out.strategy.table[static_cast<std::size_t>(i)][label];
    if (per_type.empty()) {
      per_type.assign(env.type_names[static_cast<std::size_t>(i)].size(),
                      ActionLabel());
    }
    if (!per_type[static_cast<std::size_t>(t)].empty()) {
      throw InputError("duplicate strategy row for player '" +
                       env.players[static_cast<std::size_t>(i)] +
                       "', type '" +
                       env.type_names[static_cast<std::size_t>(i)]
                                     [static_cast<std::size_t>(t)] +
                       "', label '" + label + "'");
    }
    per_type[static_cast<std::size_t>(t)] = action;
  }
  for (std::size_t i = 0; i < out.strategy.table.size(); ++i) {
    for (const auto& [label, per_type] : out.strategy.table[i]) {
      for (std::size_t t = 0; t < per_type.size(); ++t) {
        if (per_type[t].empty()) {
          throw InputError("strategy misses player '" + env.players[i] +
                           "', type '" + env.type_names[i][t] +
                           "', label '" + label + "'");
        }
      }
    }
  }

  const auto tree_issues = out.game.validate(
      env.player_count(), static_cast<int>(env.outcomes.size()));
  if (!tree_issues.empty()) {
    std::string msg = "invalid game tree:";
    for (const auto& issue : tree_issues) msg += " " + issue + ";";
    throw InputError(msg);
  }
  const auto strategy_issues = out.strategy.validate(out.game, env.space);
  if (!strategy_issues.empty()) {
    std::string msg = "invalid strategy:";
    for (const auto& issue : strategy_issues) msg += " " + issue + ";";
    throw InputError(msg);
  }
  return out;
}

// ---------------------------------------------------------------------------
// File helpers.
// ---------------------------------------------------------------------------

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("cannot parse '" + path + "': " + e.what());
  }
}

inline void save_json_file(const std::string& path, const Json& doc) {
  std::ofstream outfile(path);
  if (!outfile) throw InputError("cannot write '" + path + "'");
  outfile << doc.dump(2) << "\n";
}

inline Environment load_environment(const std::string& path) {
  return environment_from_json(load_json_file(path));
}

inline GameDocument load_game(const std::string& path,
                              const Environment& env) {
  return game_from_json(env, load_json_file(path));
}

}  // namespace seqmech
