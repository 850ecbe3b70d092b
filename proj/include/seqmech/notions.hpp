#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "seqmech/environment.hpp"
#include "seqmech/errors.hpp"
#include "seqmech/rational.hpp"
#include "seqmech/state.hpp"

namespace seqmech {

// The five incentive criteria, in increasing strength of the two chains
// this library cares about: od implies wd implies mm pointwise, and
// sod implies od pointwise.
enum class Notion { kPbe, kWd, kMm, kOd, kSod };

inline const char* notion_name(Notion n) {
  switch (n) {
    case Notion::kPbe: return "pbe";
    case Notion::kWd: return "wd";
    case Notion::kMm: return "mm";
    case Notion::kOd: return "od";
    case Notion::kSod: return "sod";
  }
  return "?";
}

inline std::vector<Notion> all_notions() {
  return {Notion::kPbe, Notion::kWd, Notion::kMm, Notion::kOd, Notion::kSod};
}

// Everything a one-shot comparison is relative to: the ambient cell E the
// two states live in, the belief set the opponent quantifiers range over,
// and (for strong-obvious dominance only) the operator cell of the honest
// state, whose player-i projection is the set of types bundled with the
// honest action.
struct NotionContext {
  const Environment* env = nullptr;
  StateSet ambient;
  StateSet belief;
  StateSet gamma_cell;
};

// Declared structural properties.  `monotonic` is only asserted for the two
// dominance notions; for the other three it is left unset rather than
// guessed, and the generic decider never consults it for them.
struct NotionProperties {
  bool regular = false;
  bool dissectible = false;
  bool normal = false;
  bool additive = false;
  std::optional<bool> monotonic;
};

inline NotionProperties properties_of(Notion n) {
  NotionProperties p;
  p.dissectible = true;
  p.normal = true;
  switch (n) {
    case Notion::kPbe:
    case Notion::kWd:
    case Notion::kMm:
      p.regular = true;
      p.additive = true;
      break;
    case Notion::kOd:
      p.regular = true;
      p.additive = false;
      p.monotonic = true;
      break;
    case Notion::kSod:
      p.regular = false;
      p.additive = false;
      p.monotonic = true;
      break;
  }
  return p;
}

namespace detail {

inline void check_context(Notion id, const NotionContext& ctx, StateId theta,
                          StateId theta_prime) {
  if (ctx.env == nullptr) throw PreconditionError("context without environment");
  if (ctx.ambient.empty()) throw PreconditionError("empty ambient cell");
  if (ctx.belief.empty()) throw PreconditionError("empty belief set");
  if (!ctx.ambient.contains(theta) || !ctx.ambient.contains(theta_prime)) {
    throw PreconditionError("states outside the ambient cell");
  }
  if (id == Notion::kSod) {
    if (!ctx.gamma_cell.contains(theta)) {
      throw PreconditionError("honest state outside its operator cell");
    }
    if (!ctx.gamma_cell.subset_of(ctx.ambient)) {
      throw PreconditionError("operator cell outside the ambient cell");
    }
  }
}

}  // namespace detail

// Decides whether, for player i with true type theta_i, acting as theta_i
// is acceptable against acting as theta'_i when opponents range over the
// belief set.  Returns 1 (true) for "no profitable deviation" under the
// notion's aggregation:
//   pbe: prior-weighted sum of payoff differences (conditional weights,
//        restricted to the belief set without renormalizing) >= 0;
//   wd:  pointwise >= at every opponent profile in the belief;
//   mm:  worst honest >= worst deviation;
//   od:  worst honest >= best deviation;
//   sod: worst over all types bundled with the honest action >= best
//        deviation.
inline bool eval_notion(Notion id, const NotionContext& ctx, StateId theta,
                        StateId theta_prime, PlayerIndex i) {
  detail::check_context(id, ctx, theta, theta_prime);
  const Environment& env = *ctx.env;
  const StateSpace& space = env.space;
  const TypeIndex ti = space.component(theta, i);
  const TypeIndex tp = space.component(theta_prime, i);
  const std::vector<StateId> opp = ctx.belief.opponent_profiles(space, i);

  const auto honest_at = [&](StateId key) {
    return env.utility_at(i, ti, space.with_component(key, i, ti));
  };
  const auto deviant_at = [&](StateId key) {
    return env.utility_at(i, ti, space.with_component(key, i, tp));
  };

  switch (id) {
    case Notion::kPbe: {
      if (!env.prior.has_value()) {
        throw MissingPriorError("pbe evaluation requires a prior");
      }
      Rational marginal(0);
      for (StateId s = 0; s < space.states(); ++s) {
        if (space.component(s, i) == ti) marginal += env.prior->at(s);
      }
      // Mass-zero own type: every restricted weight is zero and the sum is
      // empty, which holds trivially.
      if (marginal == Rational(0)) return true;
      Rational sum(0);
      for (StateId key : opp) {
        const Rational w =
            env.prior->at(space.with_component(key, i, ti)) / marginal;
        sum += (honest_at(key) - deviant_at(key)) * w;
      }
      return sum >= Rational(0);
    }
    case Notion::kWd: {
      for (StateId key : opp) {
        if (honest_at(key) < deviant_at(key)) return false;
      }
      return true;
    }
    case Notion::kMm: {
      Rational min_h = honest_at(opp.front());
      Rational min_d = deviant_at(opp.front());
      for (StateId key : opp) {
        const Rational h = honest_at(key);
        const Rational d = deviant_at(key);
        if (h < min_h) min_h = h;
        if (d < min_d) min_d = d;
      }
      return min_h >= min_d;
    }
    case Notion::kOd: {
      Rational min_h = honest_at(opp.front());
      Rational max_d = deviant_at(opp.front());
      for (StateId key : opp) {
        const Rational h = honest_at(key);
        const Rational d = deviant_at(key);
        if (h < min_h) min_h = h;
        if (d > max_d) max_d = d;
      }
      return min_h >= max_d;
    }
    case Notion::kSod: {
      Rational max_d = deviant_at(opp.front());
      for (StateId key : opp) {
        const Rational d = deviant_at(key);
        if (d > max_d) max_d = d;
      }
      // Worst case additionally ranges over every type the operator cell
      // bundles with the honest action.
      std::optional<Rational> min_h;
      for (TypeIndex bundled : ctx.gamma_cell.projection(space, i)) {
        for (StateId key : opp) {
          const Rational h =
              env.utility_at(i, ti, space.with_component(key, i, bundled));
          if (!min_h.has_value() || h < *min_h) min_h = h;
        }
      }
      return *min_h >= max_d;
    }
  }
  throw InternalError("unhandled notion");
}

enum class NotionProperty {
  kRegular,
  kDissectible,
  kNormal,
  kAdditive,
  kMonotonic,
};

inline const char* property_name(NotionProperty p) {
  switch (p) {
    case NotionProperty::kRegular: return "regular";
    case NotionProperty::kDissectible: return "dissectible";
    case NotionProperty::kNormal: return "normal";
    case NotionProperty::kAdditive: return "additive";
    case NotionProperty::kMonotonic: return "monotonic";
  }
  return "?";
}

struct PropertyCheckOptions {
  // Exhaustive enumeration whenever 2^states fits under this bound;
  // otherwise seeded random sampling.
  int max_exhaustive_subsets = 4096;
  std::uint64_t seed = 1;
  int samples = 400;
};

struct PropertyCheckResult {
  bool consistent = true;
  long long checked = 0;
  std::string counterexample;
};

namespace detail {

// All partitions of `items`, canonical order (element k joins an existing
// block or opens a new one).
inline void partitions_rec(
    const std::vector<StateId>& items, std::size_t k,
    std::vector<std::vector<StateId>>& current,
    std::vector<std::vector<std::vector<StateId>>>& out) {
  if (k == items.size()) {
    out.push_back(current);
    return;
  }
  // Index, don't hold references: the recursive call grows `current`, which
  // may reallocate its storage.
  const std::size_t blocks_here = current.size();
  for (std::size_t b = 0; b < blocks_here; ++b) {
    current[b].push_back(items[k]);
    partitions_rec(items, k + 1, current, out);
    current[b].pop_back();
  }
  current.push_back({items[k]});
  partitions_rec(items, k + 1, current, out);
  current.pop_back();
}

inline std::vector<std::vector<std::vector<StateId>>> all_partitions(
    const std::vector<StateId>& items) {
  std::vector<std::vector<std::vector<StateId>>> out;
  std::vector<std::vector<StateId>> current;
  partitions_rec(items, 0, current, out);
  return out;
}

// Nonempty subsets of `items`, as StateSets, by increasing bitmask.
inline std::vector<StateSet> all_subsets(const std::vector<StateId>& items) {
  std::vector<StateSet> out;
  const std::size_t n = items.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
    std::vector<StateId> subset;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (std::uint64_t(1) << j)) subset.push_back(items[j]);
    }
    out.push_back(StateSet(std::move(subset)));
  }
  return out;
}

// Candidate operator cells for theta inside E: for the one notion that
// reads the cell this spans the one- and all-state extremes plus every
// subset when E is small.
inline std::vector<StateSet> gamma_candidates(Notion id, const StateSet& e,
                                              StateId theta) {
  if (id != Notion::kSod) return {e};
  std::vector<StateSet> out;
  if (e.size() <= 5) {
    for (const StateSet& sub : all_subsets(e.states())) {
      if (sub.contains(theta)) out.push_back(sub);
    }
  } else {
    out.push_back(StateSet({theta}));
    out.push_back(e);
  }
  return out;
}

}  // namespace detail

// Searches for violations of one declared property on one environment,
// exhaustively when the quantified domain is small and by seeded sampling
// otherwise.  `consistent` means no counterexample was found, not a proof.
inline PropertyCheckResult check_property_sampled(
    Notion id, const Environment& env, NotionProperty property,
    const PropertyCheckOptions& options = {}) {
  if (property == NotionProperty::kDissectible) {
    throw UnsupportedPropertyError(
        "dissectibility has no sampled test; it is declared only");
  }
  PropertyCheckResult result;
  const StateSpace& space = env.space;
  const StateSet full = StateSet::full(space);
  const bool exhaustive =
      space.states() <= 12 &&
      (1 << space.states()) <= options.max_exhaustive_subsets;

  std::mt19937_64 rng(options.seed);
  const auto pick = [&rng](std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
  };

  std::vector<StateSet> beliefs;
  if (exhaustive) {
    beliefs = detail::all_subsets(full.states());
  } else {
    for (int k = 0; k < options.samples; ++k) {
      std::vector<StateId> subset;
      for (StateId s : full) {
        if (rng() % 2) subset.push_back(s);
      }
      if (subset.empty()) subset.push_back(full.states()[pick(full.size())]);
      beliefs.push_back(StateSet(std::move(subset)));
    }
  }
  const std::vector<StateSet> rectangles = all_rectangles(space);

  const auto fail = [&result, &env](const std::string& text) {
    result.consistent = false;
    result.counterexample = text;
    (void)env;
  };

  switch (property) {
    case NotionProperty::kRegular: {
      // Value must not depend on the ambient cell or the operator cell.
      for (StateId theta : full) {
        for (StateId theta_p : full) {
          for (PlayerIndex i = 0; i < env.player_count(); ++i) {
            for (const StateSet& belief : beliefs) {
              std::optional<bool> first;
              for (const StateSet& e : rectangles) {
                if (!e.contains(theta) || !e.contains(theta_p)) continue;
                for (const StateSet& cell :
                     detail::gamma_candidates(id, e, theta)) {
                  NotionContext ctx{&env, e, belief, cell};
                  const bool v = eval_notion(id, ctx, theta, theta_p, i);
                  ++result.checked;
                  if (!first.has_value()) {
                    first = v;
                  } else if (*first != v) {
                    fail("value depends on (operator, cell) at (" +
                         env.state_name(theta) + "," + env.state_name(theta_p) +
                         ") player " + env.players[i] + " belief " +
                         env.set_name(belief));
                    return result;
                  }
                }
              }
            }
          }
        }
      }
      return result;
    }
    case NotionProperty::kNormal: {
      // Constant choice on a cell, belief equal to the cell: must accept.
      for (const StateSet& e : rectangles) {
        bool constant = true;
        for (StateId s : e) {
          if (env.outcome_of(s) != env.outcome_of(*e.begin())) {
            constant = false;
            break;
          }
        }
        if (!constant) continue;
        for (StateId theta : e) {
          for (StateId theta_p : e) {
            for (PlayerIndex i = 0; i < env.player_count(); ++i) {
              for (const StateSet& cell :
                   detail::gamma_candidates(id, e, theta)) {
                NotionContext ctx{&env, e, e, cell};
                ++result.checked;
                if (!eval_notion(id, ctx, theta, theta_p, i)) {
                  fail("rejects on a constant cell " + env.set_name(e));
                  return result;
                }
              }
            }
          }
        }
      }
      return result;
    }
    case NotionProperty::kAdditive: {
      // Acceptance on every block of a partition must imply acceptance on
      // the whole set.
      std::vector<std::vector<std::vector<StateId>>> parts;
      if (space.states() <= 6) {
        parts = detail::all_partitions(full.states());
      } else {
        for (int k = 0; k < options.samples; ++k) {
          std::vector<std::vector<StateId>> part;
          for (StateId s : full) {
            const std::size_t b = pick(part.size() + 1);
            if (b == part.size()) {
              part.push_back({s});
            } else {
              part[b].push_back(s);
            }
          }
          parts.push_back(std::move(part));
        }
      }
      for (const auto& part : parts) {
        for (StateId theta : full) {
          for (StateId theta_p : full) {
            for (PlayerIndex i = 0; i < env.player_count(); ++i) {
              for (const StateSet& cell :
                   detail::gamma_candidates(id, full, theta)) {
                bool all_blocks = true;
                for (const auto& block : part) {
                  NotionContext ctx{&env, full, StateSet(block), cell};
                  ++result.checked;
                  if (!eval_notion(id, ctx, theta, theta_p, i)) {
                    all_blocks = false;
                    break;
                  }
                }
                if (!all_blocks) continue;
                NotionContext ctx{&env, full, full, cell};
                ++result.checked;
                if (!eval_notion(id, ctx, theta, theta_p, i)) {
                  fail("accepts every block of a partition but rejects the "
                       "union at (" +
                       env.state_name(theta) + "," + env.state_name(theta_p) +
                       ") player " + env.players[i]);
                  return result;
                }
              }
            }
          }
        }
      }
      return result;
    }
    case NotionProperty::kMonotonic: {
      // Rejection on a belief set must survive enlarging it.
      for (const StateSet& small : beliefs) {
        for (const StateSet& large : beliefs) {
          if (!small.subset_of(large)) continue;
          for (StateId theta : full) {
            for (StateId theta_p : full) {
              for (PlayerIndex i = 0; i < env.player_count(); ++i) {
                for (const StateSet& cell :
                     detail::gamma_candidates(id, full, theta)) {
                  NotionContext small_ctx{&env, full, small, cell};
                  NotionContext large_ctx{&env, full, large, cell};
                  ++result.checked;
                  if (!eval_notion(id, small_ctx, theta, theta_p, i) &&
                      eval_notion(id, large_ctx, theta, theta_p, i)) {
                    fail("rejection vanished when the belief grew from " +
                         env.set_name(small) + " to " + env.set_name(large));
                    return result;
                  }
                }
              }
            }
          }
        }
      }
      return result;
    }
    case NotionProperty::kDissectible:
      break;
  }
  throw InternalError("unhandled property");
}

}  // namespace seqmech
