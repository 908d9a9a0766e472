#ifndef TLG_FRAME_HPP
#define TLG_FRAME_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tlg/formula.hpp"
#include "tlg/net.hpp"

namespace tlg {

// Per-atom-name bijection between negative and positive slots.
struct Matching {
  std::vector<std::pair<VertexId, VertexId>> pairs;  // (negative, positive)

  bool operator==(const Matching& other) const { return pairs == other.pairs; }
};

// Unfolds every lexical formula with producer polarity and the goal with
// consumer polarity into one proof frame. Each word contributes one
// component whose lexical occurrence vertex carries the word origin; the
// goal contributes a component rooted at a goal-origin vertex.
ProofNet unfold(const Lexicon& lex);

// Atom slots of a frame grouped by name, each side sorted by id.
struct SlotGroups {
  std::map<std::string, std::pair<std::vector<VertexId>, std::vector<VertexId>>>
      by_atom;  // name -> (negatives, positives)
};
SlotGroups slot_groups(const ProofNet& frame);

// Deterministic stream over all total matchings extending `fixed`,
// lexicographic on slot ids. Matchings are indexable, which makes the
// stream splittable across workers.
class MatchingEnumerator {
 public:
  MatchingEnumerator(const ProofNet& frame, const Matching& fixed = {});

  // Total number of matchings (product of factorials of group sizes).
  // Zero when some atom group is unbalanced.
  std::uint64_t count() const;

  bool balanced() const { return balanced_; }
  const std::string& diagnostic() const { return diagnostic_; }

  // The i-th matching in enumeration order, 0 <= i < count().
  Matching at(std::uint64_t index) const;

  // Stream interface.
  bool next(Matching& out);
  void reset() { cursor_ = 0; }

 private:
  struct Group {
    std::string atom;
    std::vector<VertexId> negatives;
    std::vector<VertexId> positives;
  };
  std::vector<Group> groups_;
  std::vector<std::pair<VertexId, VertexId>> fixed_pairs_;
  bool balanced_ = true;
  std::string diagnostic_;
  std::uint64_t cursor_ = 0;
};

// Merges every matched pair into a single vertex, producing a proof
// structure. Atom names are kept on merged vertices; polarities are
// cleared. Throws on structurally impossible merges.
ProofNet apply_matching(const ProofNet& frame, const Matching& m);

}  // namespace tlg

#endif
