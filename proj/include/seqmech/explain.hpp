#pragma once

#include <sstream>
#include <string>

#include "seqmech/canonical.hpp"
#include "seqmech/environment.hpp"
#include "seqmech/notions.hpp"

namespace seqmech {

// Human-readable dumps: the pairwise incentive table of a notion over the
// full space, and the round-by-round operator iteration per state.

// CSV rows: player,honest,deviant,value — value 1 when the honest type has
// no incentive to mimic the deviant type against the full belief set.
inline std::string rho_table_csv(const Environment& env, Notion id) {
  std::ostringstream out;
  out << "notion,player,honest,deviant,value\n";
  const StateSet full = StateSet::full(env.space);
  NotionContext ctx{&env, full, full, full};
  for (PlayerIndex i = 0; i < env.player_count(); ++i) {
    for (TypeIndex honest = 0; honest < env.space.type_count(i); ++honest) {
      for (TypeIndex deviant = 0; deviant < env.space.type_count(i);
           ++deviant) {
        if (honest == deviant) continue;
        StateId theta = env.space.with_component(0, i, honest);
        const StateId mimic = env.space.with_component(theta, i, deviant);
        out << notion_name(id) << ','
            << env.players[static_cast<std::size_t>(i)] << ','
            << env.type_names[static_cast<std::size_t>(i)]
                             [static_cast<std::size_t>(honest)]
            << ','
            << env.type_names[static_cast<std::size_t>(i)]
                             [static_cast<std::size_t>(deviant)]
            << ',' << (eval_notion(id, ctx, theta, mimic, i) ? 1 : 0) << '\n';
      }
    }
  }
  return out.str();
}

// One line per state per round: `state | round | surviving set`.
inline std::string trace_text(const Environment& env, Notion id) {
  std::ostringstream out;
  OperatorTable table(env, id);
  for (StateId theta = 0; theta < env.space.states(); ++theta) {
    const IterationTrace trace = iterate(table, theta);
    for (std::size_t n = 0; n < trace.chain.size(); ++n) {
      out << env.state_name(theta) << " | " << n << " | "
          << env.set_name(trace.chain[n]) << '\n';
    }
  }
  return out.str();
}

}  // namespace seqmech
