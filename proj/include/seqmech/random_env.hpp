#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "seqmech/environment.hpp"
#include "seqmech/rational.hpp"
#include "seqmech/state.hpp"

namespace seqmech {

// Seeded generator of small test environments with exact rational payoffs.
// All draws go through the 64-bit Mersenne Twister with plain modulo
// reduction, so a seed produces the same environment on every platform.

struct RandomEnvOptions {
  int players = 2;
  int min_types = 2;
  int max_types = 3;
  int min_outcomes = 2;
  int max_outcomes = 4;
  std::int64_t max_abs_numerator = 4;
  std::int64_t max_denominator = 3;
  bool with_prior = true;
};

inline Environment random_environment(std::uint64_t seed,
                                      const RandomEnvOptions& options = {}) {
  std::mt19937_64 gen(seed);
  const auto draw = [&gen](std::uint64_t n) -> std::uint64_t {
    return gen() % n;
  };

  Environment env;
  for (int i = 0; i < options.players; ++i) {
    env.players.push_back("p" + std::to_string(i + 1));
  }
  const int type_span = options.max_types - options.min_types + 1;
  std::vector<int> shape;
  for (int i = 0; i < options.players; ++i) {
    const int count =
        options.min_types + static_cast<int>(draw(
                                static_cast<std::uint64_t>(type_span)));
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) {
      names.push_back("t" + std::to_string(t));
    }
    env.type_names.push_back(std::move(names));
    shape.push_back(count);
  }
  env.space = StateSpace(shape);

  const int outcome_span = options.max_outcomes - options.min_outcomes + 1;
  const int outcome_count =
      options.min_outcomes +
      static_cast<int>(draw(static_cast<std::uint64_t>(outcome_span)));
  for (int o = 0; o < outcome_count; ++o) {
    env.outcomes.push_back("x" + std::to_string(o));
  }

  env.utilities.resize(env.players.size());
  for (std::size_t i = 0; i < env.players.size(); ++i) {
    env.utilities[i].resize(env.type_names[i].size());
    for (std::size_t t = 0; t < env.type_names[i].size(); ++t) {
      env.utilities[i][t].reserve(env.outcomes.size());
      for (std::size_t o = 0; o < env.outcomes.size(); ++o) {
        const std::int64_t num =
            static_cast<std::int64_t>(draw(static_cast<std::uint64_t>(
                2 * options.max_abs_numerator + 1))) -
            options.max_abs_numerator;
        const std::int64_t den =
            1 + static_cast<std::int64_t>(
                    draw(static_cast<std::uint64_t>(options.max_denominator)));
        env.utilities[i][t].emplace_back(num, den);
      }
    }
  }

  env.scf.reserve(static_cast<std::size_t>(env.space.states()));
  for (StateId s = 0; s < env.space.states(); ++s) {
    env.scf.push_back(static_cast<OutcomeIndex>(
        draw(static_cast<std::uint64_t>(outcome_count))));
  }

  if (options.with_prior) {
    std::vector<Rational> weights;
    weights.reserve(static_cast<std::size_t>(env.space.states()));
    Rational total(0);
    for (StateId s = 0; s < env.space.states(); ++s) {
      const Rational w(1 + static_cast<std::int64_t>(draw(4)));
      weights.push_back(w);
      total += w;
    }
    for (Rational& w : weights) w = w / total;
    env.prior = std::move(weights);
  }
  return env;
}

}  // namespace seqmech
