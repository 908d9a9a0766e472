#include <functional>
#include <random>

#include "doctest.h"
#include "testutil.hpp"
#include "tlg/frame.hpp"
#include "tlg/kernels.hpp"
#include "tlg/term.hpp"

using namespace tlg;

namespace {

const char* kExampleTerm = "(c i)((u f) \\x.(((a s) x) j))";

// The example's unique sentence-order proof structure.
ProofNet example_structure() {
  ProofNet frame = unfold(tlgtest::example_lexicon());
  ProveOptions opts;
  opts.regime = tlgtest::example_regime();
  opts.check_yield = true;
  opts.n_words = 7;
  auto proofs = prove_filter_serial(frame, opts);
  REQUIRE(proofs.size() == 1);
  return proofs[0].structure;
}

}  // namespace

TEST_CASE("term parse and print round trip") {
  LambdaTerm t = parse_term(kExampleTerm);
  CHECK(t.str() == kExampleTerm);
  CHECK(t.is_linear());
  CHECK(t.is_beta_normal());
  CHECK(!t.has_closed_subterm());
  std::vector<std::string> fv{"c", "i", "u", "f", "a", "s", "j"};
  CHECK(t.free_vars() == fv);

  CHECK(parse_term("x1").str() == "x1");
  CHECK(parse_term("(x1 x2)").str() == "x1 x2");
  CHECK(parse_term("\\x.(f x)").str() == "\\x.(f x)");
  CHECK(parse_term("f \\y.(y x)").alpha_equal(parse_term("f \\z.(z x)")));
  CHECK(!parse_term("f x").alpha_equal(parse_term("x f")));
}

TEST_CASE("invariant checks on terms") {
  CHECK(!parse_term("\\x.(x x)").is_linear());
  CHECK(parse_term("f (\\x.x)").has_closed_subterm());
  CHECK(parse_term("(\\x.(f x)) y").is_beta_normal() == false);
  CHECK(parse_term("\\x.\\y.(x y)").has_closed_subterm());
}

TEST_CASE("semantic translation swaps backslash premises") {
  ProofNet structure = example_structure();
  ProofNet sem = to_semantic(structure);
  for (const Link& l : sem.links()) {
    CHECK(l.mode == 0);
    if (l.is_tensor())
      CHECK(l.tag == Tag::App);
    else
      CHECK(l.tag == Tag::Lambda);
  }
  // Idempotent: converting again changes nothing.
  CHECK(canonical_key(to_semantic(sem)) == canonical_key(sem));
  // Same vertices, same ids.
  CHECK(sem.vertex_count() == structure.vertex_count());
  for (const Vertex& v : structure.vertices()) CHECK(sem.has_vertex(v.id));
}

TEST_CASE("extracting the example meaning") {
  ProofNet sem = to_semantic(example_structure());
  LambdaTerm t = extract_term(sem, tlgtest::mnemonic_vars(), {"x"});
  CHECK(t.str() == kExampleTerm);
  LambdaTerm plain = extract_term(sem);
  CHECK(plain.str() == "(x3 x4)((x1 x2) \\y1.(((x6 x7) y1) x5))");
  CHECK(plain.alpha_equal(parse_term("(x3 x4)((x1 x2) \\z.(((x6 x7) z) x5))")));
}

TEST_CASE("single-word net extracts its variable") {
  Lexicon lex({{"w", parse_formula("np")}}, parse_formula("np"));
  ProofNet f = unfold(lex);
  MatchingEnumerator en(f);
  Matching m;
  REQUIRE(en.next(m));
  ProofNet sem = to_semantic(apply_matching(f, m));
  CHECK(extract_term(sem).str() == "x1");
}

TEST_CASE("term to net on the example") {
  ProofNet sem = to_semantic(example_structure());
  LambdaTerm t = extract_term(sem, tlgtest::mnemonic_vars(), {"x"});
  ProofNet rebuilt = term_to_net(t, tlgtest::mnemonic_vars());
  CHECK(canonical_key(rebuilt, gen_canon_options()) ==
        canonical_key(sem, gen_canon_options()));
  CHECK(term_to_net(parse_term("x1")).vertex_count() == 1);
}

TEST_CASE("term_to_net rejects invalid terms") {
  CHECK_THROWS(term_to_net(parse_term("\\x.(x x)")));
  CHECK_THROWS(term_to_net(parse_term("f \\x.x")));
  CHECK_THROWS(term_to_net(LambdaTerm::app(parse_term("\\x.(f x)"),
                                           LambdaTerm::var("y"))));
}

TEST_CASE("random round trips between terms and nets") {
  std::mt19937 rng(99);
  int done = 0;
  while (done < 300) {
    LambdaTerm t = tlgtest::random_linear_term(rng, 4, 2);
    if (t.size() > 12) continue;
    ++done;
    ProofNet net = term_to_net(t);
    LambdaTerm back = extract_term(net);
    CHECK(back.alpha_equal(t));
    // net -> term -> net lands on the same canonical shape
    CHECK(canonical_key(term_to_net(back), gen_canon_options()) ==
          canonical_key(net, gen_canon_options()));
  }
}

TEST_CASE("link counts match term node counts") {
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    GenState g = tlgtest::random_gold(rng, 4, 2);
    LambdaTerm t = extract_term(g.net);
    std::function<std::pair<int, int>(const LambdaTerm&)> count =
        [&](const LambdaTerm& term) -> std::pair<int, int> {
      switch (term.kind()) {
        case LambdaTerm::Kind::Var:
          return {0, 0};
        case LambdaTerm::Kind::App: {
          auto a = count(term.fun());
          auto b = count(term.arg());
          return {a.first + b.first + 1, a.second + b.second};
        }
        case LambdaTerm::Kind::Abs: {
          auto a = count(term.body());
          return {a.first, a.second + 1};
        }
      }
      return {0, 0};
    };
    auto [apps, abses] = count(t);
    int tensors = 0, pars = 0;
    for (const Link& l : g.net.links()) (l.is_tensor() ? tensors : pars)++;
    CHECK(apps == tensors);
    CHECK(abses == pars);
    // every lexical variable occurs exactly once
    auto fv = t.free_vars();
    std::set<std::string> uniq(fv.begin(), fv.end());
    CHECK(fv.size() == uniq.size());
    CHECK(fv.size() == static_cast<std::size_t>(g.n_words));
  }
}
