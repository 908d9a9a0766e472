#ifndef TLG_GENERATE_HPP
#define TLG_GENERATE_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tlg/net.hpp"
#include "tlg/term.hpp"

namespace tlg {

// Forward-chaining generation state: a semantic net, one root per
// component, plus the variable vertices introduced by expansions, which
// stay eligible as expansion roots.
struct GenState {
  ProofNet net;
  int n_words = 0;
  std::vector<VertexId> variables;
  bool stopped = false;
};

struct ParserAction {
  enum class Op { Compose, ExpandFunctor, ExpandArgument, Stop };
  Op op = Op::Stop;
  VertexId functor = kNoVertex;
  VertexId argument = kNoVertex;
  VertexId root = kNoVertex;
  VertexId descendant = kNoVertex;

  bool operator==(const ParserAction& o) const;
  std::string str() const;
};

std::string action_to_json(const ParserAction& a);
ParserAction action_from_json(const std::string& json_text);
std::string actions_to_json(const std::vector<ParserAction>& actions);
std::vector<ParserAction> actions_from_json(const std::string& json_text);

GenState init_state(int n_words);

// Legal moves. Compositions pair roots of distinct components with a
// non-abstraction functor; expansions pick an eligible root and one of its
// subtree vertices, excluding placements that would create a beta redex;
// stop requires a connected graph.
std::vector<ParserAction> legal_actions(const GenState& s);

GenState apply_action(const GenState& s, const ParserAction& a);

// Number of expansion actions currently available whose root lies in the
// component of `member`; checked against the 2*(n^2+n-1) bound.
int expansion_action_count(const GenState& s, VertexId member);
long expansion_bound_limit(long n_vertices);

// One proof net per component (vertices and links restricted to it).
std::vector<ProofNet> component_nets(const GenState& s);

// ---------------------------------------------------------------------------
// Scorers

struct ActionScore {
  ParserAction action;
  double weight = 0.0;
};

class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::vector<double> score(const GenState& s,
                                    const std::vector<ParserAction>& actions) = 0;
  virtual bool serial_only() const { return false; }
};

class UniformScorer : public Scorer {
 public:
  explicit UniformScorer(double w = 1.0) : weight_(w) {}
  std::vector<double> score(const GenState&,
                            const std::vector<ParserAction>& actions) override {
    return std::vector<double>(actions.size(), weight_);
  }

 private:
  double weight_;
};

class RandomScorer : public Scorer {
 public:
  explicit RandomScorer(unsigned seed) : state_(seed) {}
  std::vector<double> score(const GenState&,
                            const std::vector<ParserAction>& actions) override;

 private:
  unsigned long long state_;
};

// Ideal scorer: weight 1 exactly for the actions that stay on course to a
// given gold net, 0 otherwise. Tracks reachable intermediate states by
// canonical form; states that have left the course score all zeros.
class OracleScorer : public Scorer {
 public:
  explicit OracleScorer(const ProofNet& gold);
  ~OracleScorer() override;
  std::vector<double> score(const GenState& s,
                            const std::vector<ParserAction>& actions) override;

  int gold_words() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<ActionScore> oracle_score(const GenState& s, const ProofNet& gold);

// External scorer speaking line-delimited JSON over stdin/stdout:
// request {"state": <net JSON>, "actions": [...]}, reply {"weights": [...]}.
class ExternalScorer : public Scorer {
 public:
  explicit ExternalScorer(const std::string& command);
  ~ExternalScorer() override;
  std::vector<double> score(const GenState& s,
                            const std::vector<ParserAction>& actions) override;
  bool serial_only() const override { return true; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ScorerError : std::runtime_error {
  ScorerError(const std::string& msg, std::string transcript_line)
      : std::runtime_error(msg), transcript(std::move(transcript_line)) {}
  std::string transcript;
};

// ---------------------------------------------------------------------------
// Canonical sequences, beam search, enumeration, comparison

// The unique deterministic action sequence rebuilding `gold` from
// init_state: gold-consistent compositions first whenever possible,
// ordered by leftmost word, expansions as soon as their site is ready,
// stop last. Replaying it reproduces gold up to canonical renumbering.
std::vector<ParserAction> canonical_sequence(const ProofNet& gold);

GenState replay(int n_words, const std::vector<ParserAction>& actions);

struct BeamOptions {
  int k = 1;
  double threshold = 0.5;
  int max_expansions = -1;  // default: number of words
  int max_steps = 10000;
};

struct BeamResult {
  GenState state;
  double score = 1.0;
  std::vector<ParserAction> actions;
  std::vector<double> weights;
};

// k-best stopped nets by product of action weights, deduplicated by
// canonical numbering. A connected state whose actions all score at or
// below the threshold stops where it is; disconnected ones are dropped.
std::vector<BeamResult> beam_search(int n_words, Scorer& scorer,
                                    const BeamOptions& opts);

// Every stopped net reachable with at most `max_expansions` expansions,
// keyed by word-and-shape canonical form.
std::map<std::string, ProofNet> forward_enumerate(int n_words,
                                                  int max_expansions);

// Actions of a finished run rewritten in the canonical coordinates of its
// final net (word-and-shape canonical numbering).
std::vector<std::string> canonical_action_strings(
    const GenState& final_state, const std::vector<ParserAction>& actions);

struct FScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

FScore action_fscore(const std::vector<std::string>& predicted,
                     const std::vector<std::string>& gold);

// Canonical options used throughout generation: shape and word origins
// matter, atom decorations do not.
CanonOptions gen_canon_options();

}  // namespace tlg

#endif
