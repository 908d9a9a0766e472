#ifndef TLG_BACKWARD_HPP
#define TLG_BACKWARD_HPP

#include <map>
#include <string>
#include <vector>

#include "tlg/net.hpp"

namespace tlg {

// A structure under construction, known only by its open hypothesis ports
// and its single conclusion port.
struct GoalBox {
  std::vector<VertexId> hypotheses;
  VertexId conclusion = kNoVertex;
};

// Partial derivation: the links built so far plus the boxes still open.
struct BackwardState {
  ProofNet net;
  std::vector<GoalBox> boxes;
  int par_steps = 0;
};

BackwardState bw_init(int n_words);

// Implication-left: pick a hypothesis as the functor, split the remaining
// ports between the argument branch and the continuation. The functor and
// the argument's conclusion meet in a fresh application link whose
// conclusion joins the continuation box.
BackwardState bw_impl_left(const BackwardState& s, std::size_t box,
                           VertexId main,
                           const std::vector<VertexId>& argument_side);

// Implication-right: one new hypothesis, withdrawn by a fresh abstraction
// link placed under the box's old conclusion.
BackwardState bw_impl_right(const BackwardState& s, std::size_t box);

// Closes a single-hypothesis box by identifying its two ports.
BackwardState bw_stop(const BackwardState& s, std::size_t box);

// Every net derivable with at most `max_par` implication-right steps,
// keyed by word-and-shape canonical form (the same keying the forward
// engine uses, so the two result sets are directly comparable).
std::map<std::string, ProofNet> bw_enumerate(int n_words, int max_par);

// Branching count of implication-left at a k-hypothesis box: k choices of
// main formula times 2^(k-1) splits.
unsigned long long bw_impl_left_choices(int k);

}  // namespace tlg

#endif
