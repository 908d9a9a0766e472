// Benchmark: serial vs OpenMP matching filter on a modifier chain whose
// matching space is k!. Usage: tlg_bench [k] (default 7).

#include <chrono>
#include <iostream>
#include <string>

#include "tlg/formula.hpp"
#include "tlg/frame.hpp"
#include "tlg/kernels.hpp"

using namespace tlg;
using Clock = std::chrono::steady_clock;

int main(int argc, char** argv) {
  int k = argc > 1 ? std::stoi(argv[1]) : 7;
  std::vector<std::pair<std::string, Formula>> entries;
  entries.emplace_back("w0", parse_formula("a"));
  for (int i = 1; i < k; ++i)
    entries.emplace_back("w" + std::to_string(i), parse_formula("a\\a"));
  Lexicon lex(std::move(entries), parse_formula("a"));
  ProofNet frame = unfold(lex);

  ProveOptions opts;
  opts.regime = Regime::all(PathClass::L);
  opts.max_matchings = 50'000'000;

  MatchingEnumerator en(frame);
  std::cout << "chain length " << k << ", " << en.count() << " matchings\n";

  auto t0 = Clock::now();
  auto serial = prove_filter_serial(frame, opts);
  double ts = std::chrono::duration<double>(Clock::now() - t0).count();
  std::cout << "serial:   " << ts << "s, " << serial.size() << " proofs\n";

  auto t1 = Clock::now();
  auto parallel = prove_filter_parallel(frame, opts);
  double tp = std::chrono::duration<double>(Clock::now() - t1).count();
  std::cout << "parallel: " << tp << "s, " << parallel.size() << " proofs\n";

  bool same = serial.size() == parallel.size();
  for (std::size_t i = 0; same && i < serial.size(); ++i)
    same = serial[i].matching_index == parallel[i].matching_index;
  std::cout << (same ? "results identical" : "RESULTS DIFFER") << ", speedup "
            << (tp > 0 ? ts / tp : 0.0) << "x\n";
  return same ? 0 : 1;
}
