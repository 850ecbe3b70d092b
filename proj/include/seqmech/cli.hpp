#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "seqmech/deciders.hpp"
#include "seqmech/definitional.hpp"
#include "seqmech/environment.hpp"
#include "seqmech/explain.hpp"
#include "seqmech/oracle.hpp"
#include "seqmech/random_env.hpp"
#include "seqmech/serialization.hpp"
#include "seqmech/synthesis.hpp"

namespace seqmech::cli {

// Exit codes: 0 success / affirmative verdict, 1 negative verdict,
// 2 input or resource error, 3 internal cross-check disagreement.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitDisagreement = 3;

namespace detail {

inline const std::vector<std::pair<std::string, Notion>>& notion_table() {
  static const std::vector<std::pair<std::string, Notion>> table = {
      {"sp", Notion::kWd},   {"pbe", Notion::kPbe}, {"mm", Notion::kMm},
      {"osp", Notion::kOd},  {"sosp", Notion::kSod},
  };
  return table;
}

inline Notion parse_notion(const std::string& name) {
  for (const auto& [key, id] : notion_table()) {
    if (key == name) return id;
  }
  throw InputError("unknown notion '" + name +
                   "' (expected sp, pbe, mm, osp, or sosp)");
}

inline std::string notion_key(Notion id) {
  for (const auto& [key, value] : notion_table()) {
    if (value == id) return key;
  }
  throw InternalError("unmapped notion");
}

// Resolves --notion into the ordered list to evaluate.  "all" silently
// omits the belief-weighted notion when the environment has no prior;
// asking for it explicitly on such an environment stays an input error.
inline std::vector<Notion> requested_notions(const std::string& flag,
                                             const Environment& env,
                                             std::vector<std::string>* skipped) {
  if (flag != "all") return {parse_notion(flag)};
  std::vector<Notion> out;
  for (const auto& [key, id] : notion_table()) {
    if (id == Notion::kPbe && !env.prior.has_value()) {
      if (skipped != nullptr) skipped->push_back(key);
      continue;
    }
    out.push_back(id);
  }
  return out;
}

inline Verdict decide(const Environment& env, Notion id) {
  switch (id) {
    case Notion::kWd: return decide_sp(env);
    case Notion::kPbe: return decide_pbe(env);
    case Notion::kMm: return decide_maxmin(env);
    case Notion::kOd: return decide_osp(env);
    case Notion::kSod: return decide_sosp(env);
  }
  throw InternalError("unmapped notion");
}

inline Json verdict_to_json(const Environment& env, const Verdict& v) {
  Json row;
  row["notion"] = notion_key(v.notion);
  row["implementable"] = v.implementable;
  row["route"] = v.route;
  row["scope"] = v.scope;
  if (v.route == "operator-achievability" && v.implementable) {
    row["rounds"] = v.rounds;
  }
  if (v.refutation.has_value()) row["refutation"] = *v.refutation;
  if (v.fixed_point.has_value()) {
    row["fixed_point"] = Json{
        {"state", env.state_name(v.fixed_point->theta)},
        {"cell", env.set_name(v.fixed_point->cell)},
    };
  }
  return row;
}

inline void print_verdict_line(std::ostream& out, const Environment& env,
                               const Verdict& v) {
  out << notion_key(v.notion) << ": "
      << (v.implementable ? "implementable" : "not implementable")
      << " (route: " << v.route << "; scope: " << v.scope;
  if (v.route == "operator-achievability" && v.implementable) {
    out << "; rounds: " << v.rounds;
  }
  out << ")\n";
  if (!v.implementable && v.refutation.has_value()) {
    out << "  refutation: " << *v.refutation << '\n';
  }
  if (!v.implementable && v.fixed_point.has_value()) {
    out << "  fixed point: state " << env.state_name(v.fixed_point->theta)
        << " stalls at " << env.set_name(v.fixed_point->cell) << '\n';
  }
}

inline int run_check(const std::string& env_path, const std::string& notion,
                     bool json, std::ostream& out) {
  const Environment env = load_environment(env_path);
  std::vector<std::string> skipped;
  const std::vector<Notion> ids = requested_notions(notion, env, &skipped);
  std::vector<Verdict> verdicts;
  verdicts.reserve(ids.size());
  for (Notion id : ids) verdicts.push_back(decide(env, id));
  const bool all_ok =
      std::all_of(verdicts.begin(), verdicts.end(),
                  [](const Verdict& v) { return v.implementable; });
  if (json) {
    Json doc;
    doc["schema"] = "seqmech.check/1";
    doc["environment"] = env_path;
    doc["verdicts"] = Json::array();
    for (const Verdict& v : verdicts) {
      doc["verdicts"].push_back(verdict_to_json(env, v));
    }
    doc["skipped"] = skipped;
    out << doc.dump(2) << '\n';
  } else {
    for (const Verdict& v : verdicts) print_verdict_line(out, env, v);
    for (const std::string& key : skipped) {
      out << key << ": skipped (environment has no prior)\n";
    }
  }
  return all_ok ? kExitOk : kExitNegative;
}

inline int run_synthesize(const std::string& env_path,
                          const std::string& notion, const std::string& out_path,
                          std::ostream& out) {
  const Environment env = load_environment(env_path);
  const Notion id = parse_notion(notion);
  const NotionProperties props = properties_of(id);
  GameTree game;
  StrategyProfile strategy;
  std::string summary;
  try {
    if (props.monotonic.value_or(false)) {
      const Verdict v = decide(env, id);
      if (!v.implementable) {
        out << "not implementable: " << v.refutation.value_or("operator blocked")
            << '\n';
        return kExitNegative;
      }
      game = v.synthesis->game;
      strategy = v.synthesis->strategy;
      summary = "disclosure game, rounds: " + std::to_string(v.rounds);
    } else {
      DirectMechanism direct = synthesize_direct_mechanism(env, id);
      game = std::move(direct.game);
      strategy = std::move(direct.strategy);
      summary = "direct mechanism";
    }
  } catch (const NotAchievableError& e) {
    out << "not implementable: " << e.what() << '\n';
    return kExitNegative;
  }
  const Json doc = game_to_json(env, game, strategy);
  if (out_path.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    save_json_file(out_path, doc);
    out << "implementable (" << summary << "); wrote " << out_path << '\n';
  }
  return kExitOk;
}

inline int run_verify(const std::string& env_path, const std::string& game_path,
                      const std::string& notion, bool json, std::ostream& out) {
  const Environment env = load_environment(env_path);
  const Notion id = parse_notion(notion);
  const GameDocument doc = load_game(game_path, env);
  const GspcReport gspc = check_gspc(doc.game, doc.strategy, env.space);
  const bool implements = check_implements(env, doc.game, doc.strategy);
  const DefinitionalResult definitional =
      check_definitional(id, env, doc.game, doc.strategy);
  const bool ok = implements && definitional.holds;
  if (json) {
    Json report;
    report["schema"] = "seqmech.verify/1";
    report["environment"] = env_path;
    report["game"] = game_path;
    report["notion"] = notion_key(id);
    report["gspc"] = Json{{"perfect_recall", gspc.perfect_recall},
                          {"terminals_reached", gspc.terminals_reached},
                          {"distinct_reach_sets", gspc.distinct_reach_sets}};
    report["implements"] = implements;
    report["definitional"] = definitional.holds;
    if (!definitional.holds) {
      report["counterexample"] = definitional.counterexample;
    }
    out << report.dump(2) << '\n';
  } else {
    out << "gspc: " << (gspc.ok() ? "pass" : "fail")
        << " (perfect-recall=" << (gspc.perfect_recall ? 1 : 0)
        << " terminals-reached=" << (gspc.terminals_reached ? 1 : 0)
        << " distinct-reach-sets=" << (gspc.distinct_reach_sets ? 1 : 0)
        << ")\n";
    out << "implements: " << (implements ? "yes" : "no") << '\n';
    out << "definitional[" << notion_key(id)
        << "]: " << (definitional.holds ? "holds" : "fails") << '\n';
    if (!definitional.holds) {
      out << "  counterexample: " << definitional.counterexample << '\n';
    }
  }
  return ok ? kExitOk : kExitNegative;
}

inline int run_oracle_single(const Environment& env, const std::string& env_path,
                             Notion id, const ProtocolLimits& limits,
                             const std::string& out_path, bool json,
                             std::ostream& out) {
  const CrossCheckResult cross = cross_check(env, id, limits);
  std::string status;
  int exit_code = kExitOk;
  if (cross.conclusive && !cross.agree) {
    status = "disagreement";
    exit_code = kExitDisagreement;
  } else if (cross.search_found) {
    status = "found";
    exit_code = kExitOk;
  } else if (cross.conclusive) {
    status = "not-found";
    exit_code = kExitNegative;
  } else {
    status = "limit-exceeded";
    exit_code = kExitInputError;
  }

  std::optional<Json> witness;
  if (cross.search_found && exit_code != kExitDisagreement) {
    const ProtocolSearchResult search = protocol_search(env, id, limits);
    if (search.witness.has_value()) {
      witness = game_to_json(env, search.witness->game, search.witness->strategy);
    }
  }

  if (json) {
    Json report;
    report["schema"] = "seqmech.oracle/1";
    report["environment"] = env_path;
    report["notion"] = notion_key(id);
    report["status"] = status;
    report["decider_implementable"] = cross.verdict_implementable;
    report["search_found"] = cross.search_found;
    if (!cross.details.empty()) report["details"] = cross.details;
    if (witness.has_value()) report["witness"] = *witness;
    out << report.dump(2) << '\n';
  } else {
    out << "oracle[" << notion_key(id) << "]: " << status << '\n';
    if (!cross.details.empty()) out << "  " << cross.details << '\n';
    if (witness.has_value() && out_path.empty()) {
      out << witness->dump(2) << '\n';
    }
  }
  if (witness.has_value() && !out_path.empty()) {
    save_json_file(out_path, *witness);
    out << "wrote witness to " << out_path << '\n';
  }
  return exit_code;
}

inline int run_oracle_random(Notion id, const ProtocolLimits& limits,
                             std::uint64_t seed, int count, std::ostream& out) {
  int agreed = 0;
  int inconclusive = 0;
  int disagreed = 0;
  for (int n = 0; n < count; ++n) {
    const Environment env = random_environment(seed + static_cast<std::uint64_t>(n));
    const CrossCheckResult cross = cross_check(env, id, limits);
    if (!cross.conclusive) {
      ++inconclusive;
      out << "instance " << n << ": limit-exceeded\n";
      continue;
    }
    if (cross.agree) {
      ++agreed;
    } else {
      ++disagreed;
      out << "instance " << n << ": disagreement — " << cross.details << '\n';
    }
  }
  out << "agreed " << agreed << "/" << count;
  if (inconclusive > 0) out << " (" << inconclusive << " inconclusive)";
  out << '\n';
  return disagreed == 0 ? kExitOk : kExitDisagreement;
}

inline int run_explain(const std::string& env_path, const std::string& notion,
                       bool trace, bool json, std::ostream& out) {
  const Environment env = load_environment(env_path);
  std::vector<std::string> skipped;
  const std::vector<Notion> ids = requested_notions(notion, env, &skipped);
  if (json) {
    Json doc;
    doc["schema"] = "seqmech.explain/1";
    doc["environment"] = env_path;
    Json tables = Json::object();
    for (Notion id : ids) tables[notion_key(id)] = rho_table_csv(env, id);
    doc["rho"] = tables;
    if (trace) {
      Json traces = Json::object();
      for (Notion id : ids) traces[notion_key(id)] = trace_text(env, id);
      doc["traces"] = traces;
    }
    doc["skipped"] = skipped;
    out << doc.dump(2) << '\n';
  } else {
    for (Notion id : ids) {
      out << "# incentive table (" << notion_key(id) << ")\n"
          << rho_table_csv(env, id);
    }
    if (trace) {
      for (Notion id : ids) {
        out << "# operator trace (" << notion_key(id) << ")\n"
            << trace_text(env, id);
      }
    }
    for (const std::string& key : skipped) {
      out << "# " << key << " skipped (environment has no prior)\n";
    }
  }
  return kExitOk;
}

}  // namespace detail

// Entry point used by the binary and by tests.  `args` excludes argv[0].
inline int run(std::vector<std::string> args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"finite-type sequential mechanism analyzer"};
  app.require_subcommand(1);

  std::string env_path;
  std::string notion = "all";
  std::string out_path;
  std::string game_path;
  bool json = false;
  bool trace = false;
  long long limit = 0;
  std::uint64_t seed = 1;
  int random_count = 0;

  CLI::App* check = app.add_subcommand("check", "decide implementability");
  check->add_option("env", env_path, "environment file")->required();
  check->add_option("--notion", notion, "all|sp|pbe|mm|osp|sosp");
  check->add_flag("--json", json, "machine-readable report");

  CLI::App* synthesize =
      app.add_subcommand("synthesize", "construct an implementing game");
  synthesize->add_option("env", env_path, "environment file")->required();
  synthesize->add_option("--notion", notion, "sp|pbe|mm|osp|sosp")->required();
  synthesize->add_option("--out", out_path, "write the game document here");

  CLI::App* verify =
      app.add_subcommand("verify", "check a game+strategy file against a notion");
  verify->add_option("env", env_path, "environment file")->required();
  verify->add_option("--game", game_path, "game document")->required();
  verify->add_option("--notion", notion, "sp|pbe|mm|osp|sosp")->required();
  verify->add_flag("--json", json, "machine-readable report");

  CLI::App* oracle =
      app.add_subcommand("oracle", "exhaustive protocol search cross-check");
  oracle->add_option("env", env_path, "environment file");
  oracle->add_option("--notion", notion, "osp|sosp")->required();
  oracle->add_option("--limit", limit, "search step budget");
  oracle->add_option("--random", random_count,
                     "cross-check this many seeded random environments");
  oracle->add_option("--seed", seed, "base seed for --random");
  oracle->add_option("--out", out_path, "write the witness game here");
  oracle->add_flag("--json", json, "machine-readable report");

  CLI::App* explain =
      app.add_subcommand("explain", "incentive tables and operator traces");
  explain->add_option("env", env_path, "environment file")->required();
  explain->add_option("--notion", notion, "all|sp|pbe|mm|osp|sosp");
  explain->add_flag("--trace", trace, "include operator iteration traces");
  explain->add_flag("--json", json, "machine-readable report");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (check->parsed()) {
      return detail::run_check(env_path, notion, json, out);
    }
    if (synthesize->parsed()) {
      return detail::run_synthesize(env_path, notion, out_path, out);
    }
    if (verify->parsed()) {
      return detail::run_verify(env_path, game_path, notion, json, out);
    }
    if (oracle->parsed()) {
      const Notion id = detail::parse_notion(notion);
      if (id != Notion::kOd && id != Notion::kSod) {
        throw InputError("oracle supports --notion osp or sosp");
      }
      ProtocolLimits limits;
      if (limit > 0) limits.max_steps = limit;
      if (random_count > 0) {
        if (!env_path.empty()) {
          throw InputError("pass either an environment file or --random, not both");
        }
        return detail::run_oracle_random(id, limits, seed, random_count, out);
      }
      if (env_path.empty()) {
        throw InputError("oracle needs an environment file or --random");
      }
      const Environment env = load_environment(env_path);
      return detail::run_oracle_single(env, env_path, id, limits, out_path,
                                       json, out);
    }
    if (explain->parsed()) {
      return detail::run_explain(env_path, notion, trace, json, out);
    }
    throw InternalError("no subcommand dispatched");
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitDisagreement;
  } catch (const Error& e) {
    err << "error [" << e.kind() << "]: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace seqmech::cli
