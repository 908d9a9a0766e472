#include "tlg/backward.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "tlg/generate.hpp"

namespace tlg {

BackwardState bw_init(int n_words) {
  if (n_words < 1)
    throw std::invalid_argument("a sentence contains at least one word");
  BackwardState s;
  GoalBox box;
  for (int i = 0; i < n_words; ++i) {
    Vertex v;
    v.origin.word = i;
    box.hypotheses.push_back(s.net.add_vertex(v));
  }
  box.conclusion = s.net.fresh_vertex();
  s.boxes.push_back(std::move(box));
  return s;
}

BackwardState bw_impl_left(const BackwardState& s, std::size_t box,
                           VertexId main,
                           const std::vector<VertexId>& argument_side) {
  if (box >= s.boxes.size()) throw std::invalid_argument("no such box");
  const GoalBox& b = s.boxes[box];
  auto in_box = [&](VertexId v) {
    return std::find(b.hypotheses.begin(), b.hypotheses.end(), v) !=
           b.hypotheses.end();
  };
  if (!in_box(main)) throw std::invalid_argument("main formula not in box");
  std::set<VertexId> arg_set(argument_side.begin(), argument_side.end());
  if (arg_set.count(main) || arg_set.size() != argument_side.size())
    throw std::invalid_argument("invalid partition");
  for (VertexId v : argument_side)
    if (!in_box(v)) throw std::invalid_argument("invalid partition");

  BackwardState next = s;
  VertexId arg_conclusion = next.net.fresh_vertex();
  VertexId result = next.net.fresh_vertex();
  Link l;
  l.kind = LinkKind::Tensor;
  l.tag = Tag::App;
  l.left = main;
  l.right = arg_conclusion;
  l.conclusion = result;
  next.net.add_link(l);

  GoalBox arg_box;    // proves the argument from its share of the ports
  GoalBox cont_box;   // continues toward the original conclusion
  arg_box.conclusion = arg_conclusion;
  cont_box.conclusion = b.conclusion;
  cont_box.hypotheses.push_back(result);
  for (VertexId v : b.hypotheses) {
    if (v == main) continue;
    if (arg_set.count(v))
      arg_box.hypotheses.push_back(v);
    else
      cont_box.hypotheses.push_back(v);
  }
  next.boxes.erase(next.boxes.begin() + static_cast<long>(box));
  next.boxes.push_back(std::move(cont_box));
  next.boxes.push_back(std::move(arg_box));
  return next;
}

BackwardState bw_impl_right(const BackwardState& s, std::size_t box) {
  if (box >= s.boxes.size()) throw std::invalid_argument("no such box");
  if (s.boxes[box].hypotheses.empty())
    throw std::invalid_argument("implication-right needs a hypothesis");
  BackwardState next = s;
  GoalBox& b = next.boxes[box];
  VertexId x = next.net.fresh_vertex();
  VertexId new_conclusion = next.net.fresh_vertex();
  Link l;
  l.kind = LinkKind::Par;
  l.tag = Tag::Lambda;
  l.premise = new_conclusion;
  l.arrow = b.conclusion;
  l.withdrawn = x;
  next.net.add_link(l);
  b.conclusion = new_conclusion;
  b.hypotheses.insert(b.hypotheses.begin(), x);
  next.par_steps++;
  return next;
}

BackwardState bw_stop(const BackwardState& s, std::size_t box) {
  if (box >= s.boxes.size()) throw std::invalid_argument("no such box");
  const GoalBox& b = s.boxes[box];
  if (b.hypotheses.size() != 1)
    throw std::invalid_argument("stop needs exactly one hypothesis");
  BackwardState next = s;
  next.net.merge_vertices(b.hypotheses[0], next.boxes[box].conclusion);
  next.boxes.erase(next.boxes.begin() + static_cast<long>(box));
  return next;
}

unsigned long long bw_impl_left_choices(int k) {
  if (k < 1) return 0;
  return static_cast<unsigned long long>(k) << (k - 1);
}

std::map<std::string, ProofNet> bw_enumerate(int n_words, int max_par) {
  if (max_par < 0) throw std::invalid_argument("negative par budget");
  std::map<std::string, ProofNet> out;

  // States expand one box at a time (always the first); sibling boxes are
  // independent, so a fixed order loses no derivations. A box with no
  // hypotheses can never close (that would be an empty antecedent), so any
  // state containing one is dead and the branch is cut at once.
  std::function<void(const BackwardState&)> dfs = [&](const BackwardState& s) {
    if (s.boxes.empty()) {
      out.emplace(canonical_key(s.net, gen_canon_options()), s.net);
      return;
    }
    for (const GoalBox& box : s.boxes)
      if (box.hypotheses.empty()) return;
    const GoalBox& b = s.boxes.front();
    std::size_t k = b.hypotheses.size();

    if (k == 1) dfs(bw_stop(s, 0));

    if (s.par_steps < max_par) dfs(bw_impl_right(s, 0));

    // implication-left: main choice x subset split of the rest
    for (VertexId main : b.hypotheses) {
      std::vector<VertexId> rest;
      for (VertexId v : b.hypotheses)
        if (v != main) rest.push_back(v);
      std::size_t m = rest.size();
      for (std::size_t mask = 0; mask < (1ull << m); ++mask) {
        std::vector<VertexId> arg_side;
        for (std::size_t i = 0; i < m; ++i)
          if (mask & (1ull << i)) arg_side.push_back(rest[i]);
        dfs(bw_impl_left(s, 0, main, arg_side));
      }
    }
  };
  dfs(bw_init(n_words));
  return out;
}

}  // namespace tlg
