// Acceptance suite: one check per shipping criterion, each printed as a
// single pass/fail line. Returns the number of failed criteria.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "testutil.hpp"
#include "tlg/backward.hpp"
#include "tlg/contraction.hpp"
#include "tlg/formula.hpp"
#include "tlg/frame.hpp"
#include "tlg/generate.hpp"
#include "tlg/kernels.hpp"
#include "tlg/label.hpp"
#include "tlg/term.hpp"

using namespace tlg;
using Clock = std::chrono::steady_clock;

namespace {

struct Harness {
  int failures = 0;

  void run(int id, const std::string& name,
           const std::function<void(std::ostringstream&)>& body) {
    std::ostringstream detail;
    bool ok = true;
    auto start = Clock::now();
    try {
      body(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail << " exception: " << e.what();
    }
    double secs =
        std::chrono::duration<double>(Clock::now() - start).count();
    std::string msg = detail.str();
    if (!msg.empty() && msg[0] != ' ') {
      ok = false;
    }
    std::cout << "criterion " << id << " (" << name << "): "
              << (ok && msg.find('!') == std::string::npos ? "PASS" : "FAIL")
              << " [" << secs << "s]" << msg << "\n";
    if (!(ok && msg.find('!') == std::string::npos)) ++failures;
  }
};

// Any failed expectation appends a '!'-prefixed note, which flips the
// criterion to FAIL.
#define EXPECT(cond, note)                         \
  do {                                             \
    if (!(cond)) detail << " !" << note;           \
  } while (0)

ProofNet example_proved_structure(ProvedNet* out_all = nullptr) {
  ProofNet frame = unfold(tlgtest::example_lexicon());
  ProveOptions opts;
  opts.regime = tlgtest::example_regime();
  opts.check_yield = true;
  opts.n_words = 7;
  auto proofs = prove_filter_serial(frame, opts);
  if (proofs.size() != 1)
    throw std::runtime_error("expected exactly one sentence-order proof");
  if (out_all) *out_all = proofs[0];
  return proofs[0].structure;
}

}  // namespace

int main() {
  Harness h;

  // 1. Worked example end-to-end.
  h.run(1, "worked example", [&](std::ostringstream& detail) {
    auto t0 = Clock::now();
    ProvedNet proof;
    example_proved_structure(&proof);
    int branchext_steps = 0;
    for (const auto& step : proof.witness)
      if (step.cls == PathClass::BranchExt) ++branchext_steps;
    EXPECT(proof.witness.size() == 1, "witness has one contraction");
    EXPECT(branchext_steps == 1, "witness uses one branch-extraction step");
    EXPECT(proof.witness[0].par_mode == 2, "the extraction par has mode 2");
    EXPECT(proof.yield_tree.has_value(), "structural rewrite found");
    std::vector<int> want{0, 1, 2, 3, 4, 5, 6};
    EXPECT(proof.yield_tree && tree_yield(*proof.yield_tree) == want,
           "rewritten tree has sentence order");
    LambdaTerm term = extract_term(to_semantic(proof.structure),
                                   tlgtest::mnemonic_vars(), {"x"});
    EXPECT(term.str() == "(c i)((u f) \\x.(((a s) x) j))",
           "term is (c i)((u f) \\x.(((a s) x) j)), got " + term.str());
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    EXPECT(secs < 5.0, "under five seconds");
  });

  // 2. Matching combinatorics.
  h.run(2, "matching combinatorics", [&](std::ostringstream& detail) {
    auto t0 = Clock::now();
    ProofNet frame = unfold(tlgtest::example_lexicon());
    MatchingEnumerator en(frame);
    EXPECT(en.count() == 36, "example frame has 36 matchings");
    std::uint64_t streamed = 0;
    Matching m;
    while (en.next(m)) ++streamed;
    EXPECT(streamed == 36, "stream yields 36 matchings");

    std::vector<std::pair<std::string, Formula>> entries;
    for (int i = 0; i < 11; ++i)
      entries.emplace_back("w" + std::to_string(i), parse_formula("n"));
    Formula head = parse_formula("s");
    for (int i = 0; i < 11; ++i)
      head = Formula::over(head, 0, parse_formula("n"));
    entries.emplace_back("head", head);
    MatchingEnumerator big(unfold(Lexicon(entries, parse_formula("s"))));
    EXPECT(big.count() == 39916800ULL, "11 balanced pairs count 11!");
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    EXPECT(secs < 1.0, "count-only under one second");
  });

  // 3. Generation combinatorics.
  h.run(3, "generation combinatorics", [&](std::ostringstream& detail) {
    auto acts = legal_actions(init_state(7));
    int comp = 0, expf = 0, expa = 0, stops = 0;
    for (const auto& a : acts) {
      switch (a.op) {
        case ParserAction::Op::Compose: ++comp; break;
        case ParserAction::Op::ExpandFunctor: ++expf; break;
        case ParserAction::Op::ExpandArgument: ++expa; break;
        case ParserAction::Op::Stop: ++stops; break;
      }
    }
    EXPECT(comp == 42, "42 compositions at the initial configuration");
    EXPECT(expf + expa == 14, "14 expansions at the initial configuration");
    EXPECT(stops == 0, "no stop while disconnected");

    std::mt19937 rng(1001);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      int n = 2 + static_cast<int>(rng() % 5);
      GenState s =
          tlgtest::random_state(rng, n, static_cast<int>(rng() % n), 0);
      NetIndex idx(s.net);
      long c = static_cast<long>(idx.components().size());
      long composes = 0;
      for (const auto& a : legal_actions(s))
        composes += a.op == ParserAction::Op::Compose;
      if (composes != c * (c - 1)) {
        EXPECT(false, "compose count equals c(c-1)");
        break;
      }
      ++checked;
    }
    EXPECT(checked == 1000, "1000 randomized states checked");

    std::mt19937 rng2(1002);
    for (int trial = 0; trial < 200; ++trial) {
      GenState s = tlgtest::random_state(
          rng2, 1 + static_cast<int>(rng2() % 5), 5, 2);
      NetIndex idx(s.net);
      for (const auto& compv : idx.components()) {
        long n = static_cast<long>(compv.size());
        if (expansion_action_count(s, compv[0]) > expansion_bound_limit(n)) {
          EXPECT(false, "expansion count within 2(n^2+n-1)");
          return;
        }
      }
    }
  });

  // 4. Invariant suite over randomized generation runs.
  h.run(4, "generation invariants", [&](std::ostringstream& detail) {
    std::mt19937 rng(42);
    long long actions_checked = 0;
    int failures = 0;
    for (int run = 0; run < 10000 && failures == 0; ++run) {
      int n = 1 + static_cast<int>(rng() % 6);
      GenState s = init_state(n);
      int expansions = 0;
      for (int step = 0; step < 10; ++step) {
        std::vector<ParserAction> pool;
        for (const auto& a : legal_actions(s)) {
          if (a.op == ParserAction::Op::Stop) continue;
          bool is_exp = a.op != ParserAction::Op::Compose;
          if (is_exp && expansions >= 2) continue;
          pool.push_back(a);
        }
        if (pool.empty()) break;
        const auto& pick = pool[rng() % pool.size()];
        if (pick.op != ParserAction::Op::Compose) ++expansions;
        s = apply_action(s, pick);
        ++actions_checked;
        for (const ProofNet& compnet : component_nets(s)) {
          LambdaTerm t = extract_term(compnet);
          bool ok = t.is_linear() && !t.has_closed_subterm() &&
                    t.is_beta_normal();
          if (compnet.link_count() > 0)
            ok = ok && is_proof_net(compnet, Regime::all(PathClass::LP)).ok;
          if (!ok) ++failures;
        }
      }
    }
    EXPECT(failures == 0, "zero invariant failures");
    EXPECT(actions_checked > 10000, "suite exercised enough actions");
  });

  // 5. Round trips.
  h.run(5, "round trips", [&](std::ostringstream& detail) {
    std::mt19937 rng(55);
    int term_trips = 0;
    while (term_trips < 1000) {
      LambdaTerm t = tlgtest::random_linear_term(rng, 4, 2);
      if (t.size() > 12) continue;
      ++term_trips;
      if (!extract_term(term_to_net(t)).alpha_equal(t)) {
        EXPECT(false, "term -> net -> term is the identity");
        break;
      }
    }

    int replays = 0;
    for (int i = 0; i < 1000; ++i) {
      GenState gold =
          tlgtest::random_gold(rng, 1 + static_cast<int>(rng() % 4), 1);
      auto actions = canonical_sequence(gold.net);
      GenState again = replay(gold.n_words, actions);
      if (canonical_key(again.net, gen_canon_options()) !=
          canonical_key(gold.net, gen_canon_options())) {
        EXPECT(false, "replay(canonical_sequence(g)) == g");
        break;
      }
      ++replays;
    }
    EXPECT(replays == 1000, "1000 canonical replays");

    int label_trips = 0;
    while (label_trips < 200) {
      ProofNet net = tlgtest::random_directional_net(rng, 3, 1);
      Lexicon lex = directionalize(principal_typing(to_semantic(net)),
                                   gold_labels(net));
      ProofNet frame = unfold(lex);
      MatchingEnumerator en(frame);
      if (en.count() > 2000) continue;
      ++label_trips;
      std::string want = canonical_key(net);
      bool reproduced = false;
      Matching m;
      while (en.next(m)) {
        ProofNet candidate = apply_matching(frame, m);
        for (const Vertex& v : candidate.vertices())
          candidate.vertex(v.id).origin.goal = false;
        if (canonical_key(candidate) == want) {
          reproduced = true;
          break;
        }
      }
      if (!reproduced) {
        EXPECT(false, "labelling round trip reproduces the source lexicon");
        break;
      }
    }
    EXPECT(label_trips == 200, "200 labelling round trips");
  });

  // 6. Regime separation.
  h.run(6, "regime separation", [&](std::ostringstream& detail) {
    auto provable = [](const Lexicon& lex, const Regime& r) {
      ProofNet frame = unfold(lex);
      MatchingEnumerator en(frame);
      Matching m;
      while (en.next(m))
        if (is_proof_net(apply_matching(frame, m), r).ok) return true;
      return false;
    };
    auto timed = [&](const std::function<bool()>& f, bool want,
                     const char* note) {
      auto t0 = Clock::now();
      bool got = f();
      double secs = std::chrono::duration<double>(Clock::now() - t0).count();
      EXPECT(got == want, note);
      EXPECT(secs < 1.0, std::string(note) + " under one second");
    };
    Lexicon comp({{"x", parse_formula("a/b")}, {"y", parse_formula("b/c")}},
                 parse_formula("a/c"));
    Lexicon commuted(
        {{"x", parse_formula("a/b")}, {"y", parse_formula("c\\b")}},
        parse_formula("a/c"));
    timed([&] { return provable(comp, Regime::all(PathClass::L)); }, true,
          "composition provable under L");
    timed([&] { return provable(comp, Regime::all(PathClass::NL)); }, false,
          "composition unprovable under NL");
    timed([&] { return provable(commuted, Regime::all(PathClass::LP)); }, true,
          "commuted variant provable under LP");
    timed([&] { return provable(commuted, Regime::all(PathClass::BranchExt)); },
          false, "commuted variant unprovable under branch extraction");
    timed([&] { return provable(commuted, Regime::all(PathClass::L)); }, false,
          "commuted variant unprovable under L");
    timed(
        [&] {
          return provable(tlgtest::example_lexicon(),
                          Regime::all(PathClass::NL));
        },
        false, "the worked example is unprovable under all-NL");
  });

  // 7. Principal typing of the example.
  h.run(7, "principal typing", [&](std::ostringstream& detail) {
    ProofNet structure = example_proved_structure();
    TypeVarTyping typing = principal_typing(to_semantic(structure));
    EXPECT(typing.word_str(0) == "A -o (B -o C) -o D", "Aux typing");
    EXPECT(typing.word_str(1) == "A", "fils typing");
    EXPECT(typing.word_str(2) == "E -o D -o F", "clame typing");
    EXPECT(typing.word_str(3) == "E", "-t-il typing");
    EXPECT(typing.word_str(4) == "G", "j' typing");
    EXPECT(typing.word_str(5) == "H -o B -o G -o C", "apporte typing");
    EXPECT(typing.word_str(6) == "H", "le salut typing");
    EXPECT(typing.goal_str() == "F", "goal variable");
    Labelling gold = gold_labels(structure);
    // Published assignment, under the first-appearance letter order:
    // n for A; pp for the argument the extraction withdraws; np for the
    // three noun phrases; s for the three sentence variables.
    EXPECT(gold.atoms.at("A") == "n", "A = n");
    EXPECT(gold.atoms.at("B") == "pp", "B = pp");
    EXPECT(gold.atoms.at("E") == "np", "E = np");
    EXPECT(gold.atoms.at("G") == "np", "G = np");
    EXPECT(gold.atoms.at("H") == "np", "H = np");
    EXPECT(gold.atoms.at("C") == "s", "C = s");
    EXPECT(gold.atoms.at("D") == "s", "D = s");
    EXPECT(gold.atoms.at("F") == "s", "F = s");
    Lexicon lex = directionalize(typing, gold);
    Lexicon expected = tlgtest::example_lexicon();
    bool formulas_ok = lex.goal == expected.goal;
    for (std::size_t i = 0; i < expected.entries.size(); ++i)
      formulas_ok =
          formulas_ok && lex.entries[i].second == expected.entries[i].second;
    EXPECT(formulas_ok, "directionalized lexicon matches the source");
  });

  // 8. Forward/backward equivalence.
  h.run(8, "forward/backward equivalence", [&](std::ostringstream& detail) {
    auto t0 = Clock::now();
    for (int n = 1; n <= 3; ++n) {
      for (int budget = 0; budget <= 1; ++budget) {
        auto fw = forward_enumerate(n, budget);
        auto bw = bw_enumerate(n, budget);
        std::set<std::string> fw_keys, bw_keys;
        for (const auto& [k, net] : fw) fw_keys.insert(k);
        for (const auto& [k, net] : bw) bw_keys.insert(k);
        if (fw_keys != bw_keys) {
          std::ostringstream note;
          note << "engines agree at n=" << n << " budget=" << budget
               << " (forward " << fw_keys.size() << ", backward "
               << bw_keys.size() << ")";
          EXPECT(false, note.str());
        }
      }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    EXPECT(secs < 30.0, "under thirty seconds");
  });

  // 9. Oracle beam search over the golden suite.
  h.run(9, "oracle beam search", [&](std::ostringstream& detail) {
    std::vector<ProofNet> suite;
    suite.push_back(to_semantic(example_proved_structure()));
    {
      GenState one = init_state(1);
      ParserAction stop;
      stop.op = ParserAction::Op::Stop;
      suite.push_back(apply_action(one, stop).net);
    }
    std::mt19937 rng(9);
    for (int i = 0; i < 25; ++i)
      suite.push_back(
          tlgtest::random_gold(rng, 1 + static_cast<int>(rng() % 5), 2).net);

    int recovered = 0;
    for (const ProofNet& gold : suite) {
      int n = 0;
      for (const Vertex& v : gold.vertices())
        if (v.origin.word) n = std::max(n, *v.origin.word + 1);
      OracleScorer scorer(gold);
      BeamOptions opts;
      opts.k = 1;
      opts.max_expansions = static_cast<int>(gold.vertex_count());
      auto results = beam_search(n, scorer, opts);
      if (results.size() != 1 || results[0].score != 1.0) continue;
      if (canonical_key(results[0].state.net, gen_canon_options()) !=
          canonical_key(gold, gen_canon_options()))
        continue;
      auto gold_actions = canonical_sequence(gold);
      auto f = action_fscore(
          canonical_action_strings(results[0].state, results[0].actions),
          canonical_action_strings(replay(n, gold_actions), gold_actions));
      if (f.f1 == 1.0) ++recovered;
    }
    std::ostringstream note;
    note << "all " << suite.size() << " golds recovered with F1 = 1 (got "
         << recovered << ")";
    EXPECT(recovered == static_cast<int>(suite.size()), note.str());
  });

  std::cout << (h.failures == 0 ? "ALL CRITERIA PASSED"
                                : "SOME CRITERIA FAILED")
            << " (" << (9 - h.failures) << "/9)\n";
  return h.failures;
}
