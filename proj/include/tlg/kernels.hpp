#ifndef TLG_KERNELS_HPP
#define TLG_KERNELS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "tlg/contraction.hpp"
#include "tlg/frame.hpp"
#include "tlg/net.hpp"

namespace tlg {

struct ProveOptions {
  Regime regime;
  bool check_yield = false;   // keep only nets repairable to sentence order
  int n_words = 0;            // required when check_yield is set
  std::uint64_t max_matchings = 5'000'000;
};

struct ProvedNet {
  std::uint64_t matching_index = 0;
  Matching matching;
  ProofNet structure;  // the matched directional proof structure
  std::vector<ContractionStep> witness;
  ProofNet tree;                    // contractum of the witness
  std::optional<ProofNet> yield_tree;  // sentence-order tree when requested
};

// Serial reference: walk every matching of the frame, keep the ones whose
// structure contracts to a tree (and, optionally, whose tree rewrites to
// the sentence order). Results ordered by matching index.
std::vector<ProvedNet> prove_filter_serial(const ProofNet& frame,
                                           const ProveOptions& opts);

// Same results computed with the matchings decoded and checked across
// OpenMP threads. Every matching is independent, so the kernel is a plain
// parallel loop; output order matches the serial reference.
std::vector<ProvedNet> prove_filter_parallel(const ProofNet& frame,
                                             const ProveOptions& opts);

}  // namespace tlg

#endif
