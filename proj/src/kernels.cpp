#include "tlg/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <stdexcept>

namespace tlg {

namespace {

std::optional<ProvedNet> check_one(const ProofNet& frame,
                                   const MatchingEnumerator& en,
                                   std::uint64_t index,
                                   const ProveOptions& opts) {
  Matching m = en.at(index);
  ProofNet structure = apply_matching(frame, m);
  ProofNetCheck check = is_proof_net(structure, opts.regime);
  if (!check.ok) return std::nullopt;
  ProvedNet out;
  out.matching_index = index;
  out.matching = std::move(m);
  out.structure = std::move(structure);
  out.witness = std::move(check.witness);
  out.tree = std::move(*check.tree);
  if (opts.check_yield) {
    auto repaired =
        repair_yield(out.tree, opts.regime.structural, opts.n_words);
    if (!repaired) return std::nullopt;
    out.yield_tree = std::move(*repaired);
  }
  return out;
}

}  // namespace

std::vector<ProvedNet> prove_filter_serial(const ProofNet& frame,
                                           const ProveOptions& opts) {
  MatchingEnumerator en(frame);
  std::vector<ProvedNet> out;
  if (!en.balanced()) return out;
  std::uint64_t total = en.count();
  if (total > opts.max_matchings)
    throw std::runtime_error("matching space too large to enumerate");
  for (std::uint64_t i = 0; i < total; ++i) {
    auto r = check_one(frame, en, i, opts);
    if (r) out.push_back(std::move(*r));
  }
  return out;
}

std::vector<ProvedNet> prove_filter_parallel(const ProofNet& frame,
                                             const ProveOptions& opts) {
  MatchingEnumerator en(frame);
  std::vector<ProvedNet> out;
  if (!en.balanced()) return out;
  std::uint64_t total = en.count();
  if (total > opts.max_matchings)
    throw std::runtime_error("matching space too large to enumerate");

  std::vector<std::optional<ProvedNet>> results(total);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (long long i = 0; i < static_cast<long long>(total); ++i) {
    results[static_cast<std::size_t>(i)] =
        check_one(frame, en, static_cast<std::uint64_t>(i), opts);
  }
  for (auto& r : results)
    if (r) out.push_back(std::move(*r));
  return out;
}

}  // namespace tlg
