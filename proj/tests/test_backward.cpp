#include "doctest.h"
#include "testutil.hpp"
#include "tlg/backward.hpp"
#include "tlg/contraction.hpp"
#include "tlg/generate.hpp"
#include "tlg/term.hpp"

using namespace tlg;

TEST_CASE("initial boxes") {
  BackwardState s3 = bw_init(3);
  REQUIRE(s3.boxes.size() == 1);
  CHECK(s3.boxes[0].hypotheses.size() == 3);
  CHECK(bw_init(1).boxes[0].hypotheses.size() == 1);
  CHECK(bw_init(7).boxes[0].hypotheses.size() == 7);
  CHECK_THROWS(bw_init(0));
}

TEST_CASE("implication-left splits a box in two") {
  BackwardState s = bw_init(2);
  VertexId main = s.boxes[0].hypotheses[0];
  VertexId other = s.boxes[0].hypotheses[1];
  BackwardState next = bw_impl_left(s, 0, main, {other});
  REQUIRE(next.boxes.size() == 2);
  CHECK(next.net.link_count() == 1);
  const Link& l = next.net.links()[0];
  CHECK(l.is_tensor());
  CHECK(l.left == main);
  // continuation keeps the original conclusion and gains the result port
  CHECK(next.boxes[0].conclusion == s.boxes[0].conclusion);
  CHECK(next.boxes[0].hypotheses == std::vector<VertexId>{l.conclusion});
  // argument box proves the tensor's right premise from `other`
  CHECK(next.boxes[1].conclusion == l.right);
  CHECK(next.boxes[1].hypotheses == std::vector<VertexId>{other});

  SUBCASE("invalid partitions are rejected") {
    CHECK_THROWS(bw_impl_left(s, 0, main, {main}));
    CHECK_THROWS(bw_impl_left(s, 0, main, {999}));
  }
}

TEST_CASE("implication-left branching counts") {
  CHECK(bw_impl_left_choices(1) == 1);
  CHECK(bw_impl_left_choices(2) == 4);
  CHECK(bw_impl_left_choices(3) == 12);
  for (int k = 1; k <= 8; ++k) {
    // explicit enumeration: main choice times subsets of the rest
    unsigned long long n = 0;
    for (int main = 0; main < k; ++main)
      n += 1ull << (k - 1);
    CHECK(bw_impl_left_choices(k) == n);
  }
}

TEST_CASE("implication-right adds a hypothesis and a par link") {
  BackwardState s = bw_init(1);
  BackwardState once = bw_impl_right(s, 0);
  CHECK(once.boxes[0].hypotheses.size() == 2);
  CHECK(once.net.link_count() == 1);
  CHECK(once.net.links()[0].is_par());
  CHECK(once.par_steps == 1);
  BackwardState twice = bw_impl_right(once, 0);
  CHECK(twice.boxes[0].hypotheses.size() == 3);
  CHECK(twice.net.link_count() == 2);
  CHECK(twice.par_steps == 2);
}

TEST_CASE("stop closes single-hypothesis boxes only") {
  BackwardState one = bw_init(1);
  BackwardState closed = bw_stop(one, 0);
  CHECK(closed.boxes.empty());
  CHECK(closed.net.vertex_count() == 1);

  BackwardState two = bw_init(2);
  CHECK_THROWS(bw_stop(two, 0));
}

TEST_CASE("backward enumeration at small sizes") {
  auto nets1 = bw_enumerate(1, 0);
  REQUIRE(nets1.size() == 1);
  CHECK(extract_term(nets1.begin()->second).str() == "x1");

  auto nets2 = bw_enumerate(2, 0);
  CHECK(nets2.size() == 2);
  std::set<std::string> terms;
  for (const auto& [key, net] : nets2) terms.insert(extract_term(net).str());
  CHECK(terms == std::set<std::string>{"x1 x2", "x2 x1"});
}

TEST_CASE("every backward net is an LP proof net with a valid term") {
  for (int n = 1; n <= 3; ++n) {
    for (const auto& [key, net] : bw_enumerate(n, 1)) {
      bool proof_or_point =
          net.link_count() == 0 || is_proof_net(net, Regime::all(PathClass::LP)).ok;
      CHECK(proof_or_point);
      LambdaTerm t = extract_term(net);
      CHECK(t.is_linear());
      CHECK(!t.has_closed_subterm());
      CHECK(t.is_beta_normal());
      CHECK(t.free_vars().size() == static_cast<std::size_t>(n));
    }
  }
}

TEST_CASE("forward and backward engines agree at two words") {
  for (int budget = 0; budget <= 1; ++budget) {
    auto fw = forward_enumerate(2, budget);
    auto bw = bw_enumerate(2, budget);
    std::set<std::string> fw_keys, bw_keys;
    for (const auto& [k, n] : fw) fw_keys.insert(k);
    for (const auto& [k, n] : bw) bw_keys.insert(k);
    CHECK(fw_keys == bw_keys);
  }
}
