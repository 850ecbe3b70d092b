#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "seqmech/errors.hpp"

namespace seqmech {

using PlayerIndex = int;
using TypeIndex = int;
using OutcomeIndex = int;

// A state is one type per player; StateId is its mixed-radix encoding with
// player 0 most significant, so increasing ids enumerate profiles in
// lexicographic order.  That single fact fixes every iteration order in the
// library.
using StateId = int;

class StateSpace {
 public:
  StateSpace() = default;
  explicit StateSpace(std::vector<int> type_counts)
      : counts_(std::move(type_counts)) {
    long long total = 1;
    for (int c : counts_) {
      if (c < 1) throw PreconditionError("player with no types");
      total *= c;
      if (total > 1'000'000) {
        throw LimitExceededError("state space too large");
      }
    }
    states_ = static_cast<int>(total);
  }

  int players() const noexcept { return static_cast<int>(counts_.size()); }
  int type_count(PlayerIndex i) const { return counts_.at(i); }
  int states() const noexcept { return states_; }

  StateId encode(const std::vector<TypeIndex>& profile) const {
    if (static_cast<int>(profile.size()) != players()) {
      throw PreconditionError("profile arity mismatch");
    }
    StateId id = 0;
    for (int i = 0; i < players(); ++i) {
      if (profile[i] < 0 || profile[i] >= counts_[i]) {
        throw PreconditionError("type index out of range");
      }
      id = id * counts_[i] + profile[i];
    }
    return id;
  }

  std::vector<TypeIndex> decode(StateId id) const {
    std::vector<TypeIndex> profile(players());
    for (int i = players() - 1; i >= 0; --i) {
      profile[i] = id % counts_[i];
      id /= counts_[i];
    }
    return profile;
  }

  TypeIndex component(StateId id, PlayerIndex i) const {
    int div = 1;
    for (int j = players() - 1; j > i; --j) div *= counts_[j];
    return (id / div) % counts_[i];
  }

  StateId with_component(StateId id, PlayerIndex i, TypeIndex t) const {
    int div = 1;
    for (int j = players() - 1; j > i; --j) div *= counts_[j];
    const TypeIndex old = (id / div) % counts_[i];
    return id + (t - old) * div;
  }

  // Canonical key for an opponent profile: the state with slot i zeroed.
  StateId opponents_key(StateId id, PlayerIndex i) const {
    return with_component(id, i, 0);
  }

  bool operator==(const StateSpace& o) const { return counts_ == o.counts_; }

 private:
  std::vector<int> counts_;
  int states_ = 1;
};

// An immutable set of states, stored as sorted unique ids.  Sets here are
// plain subsets of the state space; rectangles (full products of per-player
// type sets) are the special case the operator calculus mostly lives in,
// and is_rectangle tells them apart.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::vector<StateId> states) : states_(std::move(states)) {
    std::sort(states_.begin(), states_.end());
    states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
  }

  static StateSet full(const StateSpace& space) {
    std::vector<StateId> all(space.states());
    for (int s = 0; s < space.states(); ++s) all[s] = s;
    return StateSet(std::move(all));
  }

  // The rectangle with the given per-player type sets.
  static StateSet rectangle(const StateSpace& space,
                            const std::vector<std::vector<TypeIndex>>& sides) {
    if (static_cast<int>(sides.size()) != space.players()) {
      throw PreconditionError("rectangle arity mismatch");
    }
    std::vector<StateId> out;
    std::vector<TypeIndex> profile(space.players(), 0);
    std::vector<std::size_t> idx(space.players(), 0);
    for (const auto& side : sides) {
      if (side.empty()) throw PreconditionError("empty rectangle side");
    }
    while (true) {
      for (int i = 0; i < space.players(); ++i) profile[i] = sides[i][idx[i]];
      out.push_back(space.encode(profile));
      int i = space.players() - 1;
      while (i >= 0 && ++idx[i] == sides[i].size()) idx[i--] = 0;
      if (i < 0) break;
    }
    return StateSet(std::move(out));
  }

  const std::vector<StateId>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  bool empty() const noexcept { return states_.empty(); }
  bool contains(StateId s) const {
    return std::binary_search(states_.begin(), states_.end(), s);
  }
  bool subset_of(const StateSet& o) const {
    return std::includes(o.states_.begin(), o.states_.end(), states_.begin(),
                         states_.end());
  }

  auto begin() const noexcept { return states_.begin(); }
  auto end() const noexcept { return states_.end(); }

  bool operator==(const StateSet& o) const { return states_ == o.states_; }
  bool operator!=(const StateSet& o) const { return states_ != o.states_; }
  bool operator<(const StateSet& o) const { return states_ < o.states_; }

  // Sorted unique type indices of player i appearing in the set.
  std::vector<TypeIndex> projection(const StateSpace& space,
                                    PlayerIndex i) const {
    std::vector<TypeIndex> out;
    out.reserve(states_.size());
    for (StateId s : states_) out.push_back(space.component(s, i));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Distinct opponent profiles (slot-i-zeroed keys), sorted.
  std::vector<StateId> opponent_profiles(const StateSpace& space,
                                         PlayerIndex i) const {
    std::vector<StateId> out;
    out.reserve(states_.size());
    for (StateId s : states_) out.push_back(space.opponents_key(s, i));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // A nonempty set equals the product of its projections iff its size is the
  // product of the projection sizes (it is always a subset of that product).
  bool is_rectangle(const StateSpace& space) const {
    if (states_.empty()) return false;
    long long prod = 1;
    for (int i = 0; i < space.players(); ++i) {
      prod *= static_cast<long long>(projection(space, i).size());
    }
    return prod == static_cast<long long>(states_.size());
  }

  // Members whose player-i component lies in the given block.
  StateSet restrict(const StateSpace& space, PlayerIndex i,
                    const std::vector<TypeIndex>& block) const {
    std::vector<StateId> out;
    for (StateId s : states_) {
      if (std::find(block.begin(), block.end(), space.component(s, i)) !=
          block.end()) {
        out.push_back(s);
      }
    }
    return StateSet(std::move(out));
  }

  std::string key() const {
    std::string k;
    for (std::size_t j = 0; j < states_.size(); ++j) {
      if (j) k += '.';
      k += std::to_string(states_[j]);
    }
    return k;
  }

 private:
  std::vector<StateId> states_;
};

// All nonempty rectangles of the space, in lexicographic order of their
// per-player side bitmasks.  Intended for small spaces (property tests).
inline std::vector<StateSet> all_rectangles(const StateSpace& space) {
  std::vector<std::vector<std::vector<TypeIndex>>> sides_per_player;
  for (int i = 0; i < space.players(); ++i) {
    std::vector<std::vector<TypeIndex>> sides;
    const int n = space.type_count(i);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<TypeIndex> side;
      for (int t = 0; t < n; ++t) {
        if (mask & (1u << t)) side.push_back(t);
      }
      sides.push_back(std::move(side));
    }
    sides_per_player.push_back(std::move(sides));
  }
  std::vector<StateSet> out;
  std::vector<std::size_t> idx(space.players(), 0);
  while (true) {
    std::vector<std::vector<TypeIndex>> sides;
    for (int i = 0; i < space.players(); ++i) {
      sides.push_back(sides_per_player[i][idx[i]]);
    }
    out.push_back(StateSet::rectangle(space, sides));
    int i = space.players() - 1;
    while (i >= 0 && ++idx[i] == sides_per_player[i].size()) idx[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace seqmech
