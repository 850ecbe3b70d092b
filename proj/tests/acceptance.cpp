// Acceptance harness: seven structural criteria, one pass/fail line each.
// Exits nonzero when any criterion fails.  Links only the library plus the
// shared test-support header; no test framework.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "seqmech/seqmech.hpp"
#include "support/oracles.hpp"

using namespace seqmech;

namespace {

constexpr std::uint64_t kFirstSeed = 42;
constexpr int kInstances = 200;

struct Criterion {
  bool pass = true;
  long long checked = 0;
  std::string detail;  // first failure, kept short

  void fail(const std::string& what) {
    if (pass) {
      pass = false;
      detail = what;
    }
  }
};

struct PositiveVerdict {
  std::size_t env_index = 0;
  Notion notion = Notion::kOd;
  Verdict verdict;
};

std::string describe_instance(std::size_t index) {
  if (index < static_cast<std::size_t>(kInstances)) {
    return "seed " + std::to_string(kFirstSeed + index);
  }
  static const char* names[] = {"env-const", "env-spa", "env-xor"};
  return names[index - static_cast<std::size_t>(kInstances)];
}

// All sets an iteration over the full space touches, deduplicated.
std::vector<StateSet> touched_sets(OperatorTable& table) {
  const Environment& env = table.environment();
  std::vector<StateSet> sets;
  std::set<std::string> seen;
  for (StateId theta = 0; theta < env.space.states(); ++theta) {
    const IterationTrace trace = iterate(table, theta);
    for (const StateSet& e : trace.chain) {
      if (seen.insert(e.key()).second) sets.push_back(e);
    }
  }
  return sets;
}

// --- criterion 5 lemma suite, applied to one instance and notion ---------

void lemma_suite(const Environment& env, Notion id, std::size_t index,
                 Criterion& c5) {
  OperatorTable table(env, id);
  const std::vector<StateSet> touched = touched_sets(table);
  const std::string where =
      describe_instance(index) + " " + notion_name(id);

  for (const StateSet& e : touched) {
    // Partition property: cells contain their owners, members share cells,
    // and the distinct cells tile the set exactly.
    long long covered = 0;
    for (const StateSet& cell : table.partition(e)) {
      covered += static_cast<long long>(cell.size());
    }
    ++c5.checked;
    if (covered != static_cast<long long>(e.size())) {
      c5.fail(where + ": cells do not tile " + env.set_name(e));
    }
    for (StateId theta : e) {
      const StateSet cell = table.cell(e, theta);
      ++c5.checked;
      if (!cell.contains(theta) || !cell.subset_of(e)) {
        c5.fail(where + ": cell misplaces " + env.state_name(theta));
      }
      for (StateId other : cell) {
        ++c5.checked;
        if (!(table.cell(e, other) == cell)) {
          c5.fail(where + ": members of one cell disagree in " +
                  env.set_name(e));
        }
      }
    }

    // Stage monotonicity: singleton start, and each round only grows,
    // never beyond the ambient set.
    const OperatorStages& stages = table.stages(e);
    const std::size_t n = e.size();
    for (std::size_t k = 0; k < n; ++k) {
      ++c5.checked;
      if (stages.cells_by_round.front()[k].size() != 1) {
        c5.fail(where + ": round zero is not singletons");
      }
      for (std::size_t r = 1; r < stages.cells_by_round.size(); ++r) {
        ++c5.checked;
        if (!stages.cells_by_round[r - 1][k].subset_of(
                stages.cells_by_round[r][k]) ||
            !stages.cells_by_round[r][k].subset_of(e)) {
          c5.fail(where + ": stage growth broken inside " + env.set_name(e));
        }
      }
    }

    // Chain characterization: the recursion's rounds equal an independent
    // per-player breadth-first closure, round by round.
    const testsupport::ClosureRounds closure =
        testsupport::chain_closure(env, id, e);
    ++c5.checked;
    if (closure.rounds.size() != stages.cells_by_round.size()) {
      c5.fail(where + ": closure depth differs on " + env.set_name(e));
    } else {
      for (std::size_t r = 0; r < closure.rounds.size(); ++r) {
        ++c5.checked;
        if (!(closure.rounds[r] == stages.cells_by_round[r])) {
          c5.fail(where + ": closure round " + std::to_string(r) +
                  " differs on " + env.set_name(e));
        }
      }
    }
  }

  // Increasing property across nested touched sets.
  for (const StateSet& small : touched) {
    for (const StateSet& big : touched) {
      if (small == big || !small.subset_of(big)) continue;
      for (StateId theta : small) {
        ++c5.checked;
        if (!table.cell(small, theta).subset_of(table.cell(big, theta))) {
          c5.fail(where + ": operator not increasing between " +
                  env.set_name(small) + " and " + env.set_name(big));
        }
      }
    }
  }

  // Full separation and choice-constant separation coincide.
  const bool achievable = check_achievable(table).achievable;
  const bool f_achievable = check_f_achievable(table).f_achievable;
  ++c5.checked;
  if (achievable != f_achievable) {
    c5.fail(where + ": separation flags disagree");
  }
}

// Lower bound against the game-induced structure plus the projection
// property, for one synthesized certificate.
void lemma_suite_for_certificate(const Environment& env, Notion id,
                                 const SynthesisResult& synth,
                                 std::size_t index, Criterion& c5) {
  const std::string where =
      describe_instance(index) + " " + notion_name(id);
  OperatorTable table(env, id);
  const InducedOperator induced(env, synth.game, synth.strategy);
  for (const StateSet& e : induced.domain()) {
    for (StateId theta : e) {
      ++c5.checked;
      if (!table.cell(e, theta).subset_of(induced.cell(e, theta))) {
        c5.fail(where + ": canonical cell escapes the induced cell on " +
                env.set_name(e));
      }
    }
  }
  ++c5.checked;
  if (!check_class_projections(synth.game, synth.strategy, env.space).ok) {
    c5.fail(where + ": information class projections differ");
  }
}

// --- criterion 4: certificate soundness for one positive verdict ---------

void certificate_checks(const Environment& env, const PositiveVerdict& pv,
                        Criterion& c4) {
  const Notion id = pv.notion;
  const std::string where =
      describe_instance(pv.env_index) + " " + notion_name(id);
  if (!pv.verdict.synthesis.has_value()) {
    c4.fail(where + ": positive verdict without a synthesized game");
    return;
  }
  const SynthesisResult& synth = *pv.verdict.synthesis;
  ++c4.checked;
  if (!check_gspc(synth.game, synth.strategy, env.space).ok()) {
    c4.fail(where + ": synthesized game fails structural checks");
  }
  ++c4.checked;
  if (!check_implements(env, synth.game, synth.strategy)) {
    c4.fail(where + ": synthesized game misses the required outcome");
  }
  ++c4.checked;
  if (!check_definitional(id, env, synth.game, synth.strategy).holds) {
    c4.fail(where + ": synthesized game fails the raw definition");
  }

  // Reach-set identity: every round mark carries exactly the reach set of
  // its node, and that set is the one the operator iteration produces after
  // the recorded number of applications.
  OperatorTable table(env, id);
  const std::vector<StateSet> reach =
      reach_map(synth.game, synth.strategy, env.space);
  for (const RoundMark& mark : synth.marks) {
    ++c4.checked;
    if (!(reach[static_cast<std::size_t>(mark.node)] == mark.cell)) {
      c4.fail(where + ": a round mark differs from its reach set");
      continue;
    }
    for (StateId theta : mark.cell) {
      const IterationTrace trace = iterate(table, theta);
      ++c4.checked;
      if (mark.applications >= static_cast<int>(trace.chain.size()) ||
          !(trace.chain[static_cast<std::size_t>(mark.applications)] ==
            mark.cell)) {
        c4.fail(where + ": a round mark differs from the iteration set");
        break;
      }
    }
  }
}

// --- criterion 7: pointwise strength chain on touched contexts -----------

void strength_chain(const Environment& env, std::size_t index,
                    Criterion& c7) {
  OperatorTable table(env, Notion::kOd);
  const std::string where = describe_instance(index);
  for (const StateSet& e : touched_sets(table)) {
    for (StateId theta : e) {
      NotionContext ctx{&env, e, e, StateSet({theta})};
      for (StateId other : e) {
        for (PlayerIndex i = 0; i < env.player_count(); ++i) {
          const bool od = eval_notion(Notion::kOd, ctx, theta, other, i);
          const bool wd = eval_notion(Notion::kWd, ctx, theta, other, i);
          const bool mm = eval_notion(Notion::kMm, ctx, theta, other, i);
          ++c7.checked;
          if ((od && !wd) || (wd && !mm)) {
            c7.fail(where + ": pointwise strength chain broken at " +
                    env.state_name(theta) + " vs " + env.state_name(other));
          }
        }
      }
    }
  }
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  using std::chrono::duration_cast;
  using std::chrono::milliseconds;

  // The shared harness: 200 seeded random instances plus the three named
  // ones, loaded once.
  std::vector<Environment> envs;
  envs.reserve(static_cast<std::size_t>(kInstances) + 3);
  for (int n = 0; n < kInstances; ++n) {
    envs.push_back(random_environment(kFirstSeed +
                                      static_cast<std::uint64_t>(n)));
  }
  envs.push_back(testsupport::load_sample("env-const.json"));
  envs.push_back(testsupport::load_sample("env-spa.json"));
  envs.push_back(testsupport::load_sample("env-xor.json"));

  Criterion c1, c2, c3, c4, c5, c6, c7;
  std::vector<PositiveVerdict> positives;
  double seconds_od = 0.0;
  double seconds_sod = 0.0;

  // Criteria 1 and 2: decision procedure versus exhaustive search, on the
  // random instances, under a wall-clock budget.
  for (int n = 0; n < kInstances; ++n) {
    const auto index = static_cast<std::size_t>(n);
    const Environment& env = envs[index];
    {
      const auto start = Clock::now();
      Verdict verdict = decide_osp(env);
      const ProtocolSearchResult search = protocol_search(env, Notion::kOd);
      seconds_od +=
          duration_cast<milliseconds>(Clock::now() - start).count() / 1e3;
      ++c1.checked;
      if (!search.exhausted && !search.found) {
        c1.fail(describe_instance(index) + ": search hit its step budget");
      } else if (verdict.implementable != search.found) {
        c1.fail(describe_instance(index) + ": decision and search disagree");
      }
      if (verdict.implementable) {
        positives.push_back(
            PositiveVerdict{index, Notion::kOd, std::move(verdict)});
      }
    }
    {
      const auto start = Clock::now();
      Verdict verdict = decide_sosp(env);
      const ProtocolSearchResult search = protocol_search(env, Notion::kSod);
      seconds_sod +=
          duration_cast<milliseconds>(Clock::now() - start).count() / 1e3;
      ++c2.checked;
      if (!search.exhausted && !search.found) {
        c2.fail(describe_instance(index) + ": search hit its step budget");
      } else if (verdict.implementable != search.found) {
        c2.fail(describe_instance(index) + ": decision and search disagree");
      }
      if (verdict.implementable) {
        positives.push_back(
            PositiveVerdict{index, Notion::kSod, std::move(verdict)});
      }
    }
  }
  if (seconds_od >= 60.0) {
    c1.fail("equivalence sweep took " + std::to_string(seconds_od) +
            "s, budget 60s");
  }
  if (seconds_sod >= 120.0) {
    c2.fail("equivalence sweep took " + std::to_string(seconds_sod) +
            "s, budget 120s");
  }

  // Criterion 3: frozen verdicts for the named instances.
  {
    const std::size_t base = static_cast<std::size_t>(kInstances);
    const Environment& cst = envs[base + 0];
    const Environment& spa = envs[base + 1];
    const Environment& xor_env = envs[base + 2];

    const auto expect = [&c3](bool condition, const std::string& what) {
      ++c3.checked;
      if (!condition) c3.fail(what);
    };

    for (Notion id : all_notions()) {
      expect(decide_generic(cst, id).implementable,
             std::string("env-const: ") + notion_name(id) + " should hold");
    }
    Verdict cst_osp = decide_osp(cst);
    expect(cst_osp.rounds == 1, "env-const: separation should take 1 round");
    positives.push_back(
        PositiveVerdict{base + 0, Notion::kOd, std::move(cst_osp)});
    Verdict cst_sosp = decide_sosp(cst);
    positives.push_back(
        PositiveVerdict{base + 0, Notion::kSod, std::move(cst_sosp)});

    expect(decide_sp(spa).implementable, "env-spa: sp should hold");
    expect(decide_pbe(spa).implementable, "env-spa: pbe should hold");
    expect(decide_maxmin(spa).implementable, "env-spa: mm should hold");
    Verdict spa_osp = decide_osp(spa);
    expect(spa_osp.implementable, "env-spa: osp should hold");
    expect(spa_osp.rounds == 2, "env-spa: separation should take 2 rounds");
    expect(spa_osp.schedule.has_value() &&
               spa_osp.schedule->active_by_round ==
                   std::vector<std::vector<PlayerIndex>>{{1}, {0}},
           "env-spa: revelation order should be second player, then first");
    positives.push_back(
        PositiveVerdict{base + 1, Notion::kOd, std::move(spa_osp)});
    const CrossCheckResult spa_sosp = cross_check(spa, Notion::kSod);
    expect(spa_sosp.conclusive && spa_sosp.agree &&
               spa_sosp.verdict_implementable,
           "env-spa: sosp should hold and match the search");
    positives.push_back(
        PositiveVerdict{base + 1, Notion::kSod, decide_sosp(spa)});

    expect(decide_sp(xor_env).implementable, "env-xor: sp should hold");
    expect(decide_maxmin(xor_env).implementable, "env-xor: mm should hold");
    expect(!decide_osp(xor_env).implementable, "env-xor: osp should fail");
    expect(!decide_sosp(xor_env).implementable, "env-xor: sosp should fail");
  }

  // Criterion 4: every positive operator verdict carries a sound,
  // independently re-checkable certificate.
  for (const PositiveVerdict& pv : positives) {
    certificate_checks(envs[pv.env_index], pv, c4);
  }

  // Criterion 5: the lemma suite over every instance and both operator
  // notions, plus the game-facing lemmas on every certificate.
  for (std::size_t index = 0; index < envs.size(); ++index) {
    for (Notion id : {Notion::kOd, Notion::kSod}) {
      lemma_suite(envs[index], id, index, c5);
    }
  }
  for (const PositiveVerdict& pv : positives) {
    if (pv.verdict.synthesis.has_value()) {
      lemma_suite_for_certificate(envs[pv.env_index], pv.notion,
                                  *pv.verdict.synthesis, pv.env_index, c5);
    }
  }

  // Criterion 6: inequality verdicts equal raw verification of the direct
  // mechanism, for the three one-round notions.
  for (std::size_t index = 0; index < envs.size(); ++index) {
    const Environment& env = envs[index];
    const DirectMechanism direct = build_direct_mechanism(env);
    for (Notion id : {Notion::kWd, Notion::kPbe, Notion::kMm}) {
      if (id == Notion::kPbe && !env.prior.has_value()) continue;
      const Verdict verdict = decide_generic(env, id);
      const bool raw =
          check_definitional(id, env, direct.game, direct.strategy).holds;
      ++c6.checked;
      if (verdict.implementable != raw) {
        c6.fail(describe_instance(index) + ": " + notion_name(id) +
                " inequality verdict disagrees with the raw check");
      }
    }
  }

  // Criterion 7: verdict implications and the pointwise strength chain.
  for (std::size_t index = 0; index < envs.size(); ++index) {
    const Environment& env = envs[index];
    const bool sosp = decide_sosp(env).implementable;
    const bool osp = decide_osp(env).implementable;
    const bool sp = decide_sp(env).implementable;
    ++c7.checked;
    if ((sosp && !osp) || (osp && !sp)) {
      c7.fail(describe_instance(index) + ": verdict implications broken");
    }
    strength_chain(env, index, c7);
  }

  // --- report ------------------------------------------------------------
  const auto line = [](int number, const Criterion& c,
                       const std::string& text) {
    std::cout << (c.pass ? "[PASS]" : "[FAIL]") << " criterion " << number
              << ": " << text;
    if (!c.pass) std::cout << " — " << c.detail;
    std::cout << '\n';
    return c.pass;
  };

  bool all = true;
  all &= line(1, c1,
              "operator decision matches exhaustive search on " +
                  std::to_string(c1.checked) + " instances (" +
                  std::to_string(seconds_od) + "s, budget 60s)");
  all &= line(2, c2,
              "strong variant matches exhaustive search on " +
                  std::to_string(c2.checked) + " instances (" +
                  std::to_string(seconds_sod) + "s, budget 120s)");
  all &= line(3, c3,
              "named instances reproduce their frozen verdicts (" +
                  std::to_string(c3.checked) + " checks)");
  all &= line(4, c4,
              "positive verdicts carry sound certificates (" +
                  std::to_string(positives.size()) + " certificates, " +
                  std::to_string(c4.checked) + " checks)");
  all &= line(5, c5,
              "structural lemma suite holds on every touched cell (" +
                  std::to_string(c5.checked) + " checks)");
  all &= line(6, c6,
              "inequality verdicts equal raw direct-mechanism checks (" +
                  std::to_string(c6.checked) + " comparisons)");
  all &= line(7, c7,
              "strength chain holds across verdicts and contexts (" +
                  std::to_string(c7.checked) + " checks)");

  std::cout << (all ? "acceptance: all criteria passed"
                    : "acceptance: FAILURES above")
            << '\n';
  return all ? 0 : 1;
}
