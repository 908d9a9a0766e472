#ifndef TLG_CONTRACTION_HPP
#define TLG_CONTRACTION_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tlg/net.hpp"

namespace tlg {

// Path language a contraction's tensor path must satisfy, per logic:
//   NL        exactly one step on the connective's side
//   L         one or more steps, all on that side
//   BranchExt any path whose last step is on that side
//   LP        any non-empty path
enum class PathClass { NL, L, BranchExt, LP };

const char* path_class_str(PathClass c);
PathClass path_class_from_str(const std::string& s);

struct StructuralRule {
  int mode = 1;  // the built-in right-insertion rewrite
};

// Assignment of path classes per (connective direction, mode). Linear pars
// may contract on either branch; directional pars are tied to their side.
class Regime {
 public:
  Regime() = default;
  explicit Regime(PathClass everywhere) : default_(everywhere) {}

  static Regime all(PathClass c) { return Regime(c); }

  void set_default(PathClass c) { default_ = c; }
  void set_mode(int mode, PathClass c) { per_mode_[mode] = c; }
  void set_mode_dir(int mode, Tag dir, PathClass c) {
    per_mode_dir_[{mode, dir}] = c;
  }

  PathClass class_for(Tag dir, int mode) const;

  std::vector<StructuralRule> structural;

  static Regime from_json(const std::string& json_text);
  std::string to_json() const;

 private:
  PathClass default_ = PathClass::NL;
  std::map<int, PathClass> per_mode_;
  std::map<std::pair<int, Tag>, PathClass> per_mode_dir_;
};

// side: 'l' for left-branch withdrawal, 'r' for right-branch.
bool path_accepts(PathClass cls, char side, const std::string& word);

// A contractible par together with its tensor path. The path starts at the
// par's premise and moves conclusion-to-premise through tensors only,
// ending at the withdrawn vertex; word records the branch letters.
struct Redex {
  std::size_t par_link = 0;
  std::vector<std::size_t> tensors;  // links crossed, premise-most last
  std::string word;
  PathClass cls = PathClass::NL;
  int par_mode = 0;
  Tag par_tag = Tag::None;
};

std::vector<Redex> find_redexes(const ProofNet& net, const Regime& regime);

// Removes the par link, the tensor adjacent to the withdrawn vertex and
// the withdrawn vertex itself, then splices the remaining path so the
// structure above the tensor sits on top of the path and the par's arrow
// context below it. Throws if the redex is stale.
ProofNet contract(const ProofNet& net, const Redex& redex);

struct ContractionStep {
  std::string word;
  PathClass cls;
  int par_mode;
  Tag par_tag;
};

struct ProofNetCheck {
  bool ok = false;
  std::vector<ContractionStep> witness;
  std::optional<ProofNet> tree;  // the witness's final contractum
};

// True iff some contraction sequence reaches a single-rooted, par-free
// tree. Exhaustive backtracking search memoized on canonical forms; a
// positive answer carries one witness sequence. `shuffle_seed` permutes
// redex exploration order (the result is order-insensitive).
ProofNetCheck is_proof_net(const ProofNet& net, const Regime& regime,
                           std::optional<unsigned> shuffle_seed = std::nullopt);

bool is_tensor_tree(const ProofNet& net);

// All trees obtained by detaching the right daughter of a tensor of the
// rule's mode and re-attaching it, with a fresh link of the same mode, at
// some vertex inside the former left daughter.
std::vector<ProofNet> apply_structural(const ProofNet& tree,
                                       const StructuralRule& rule);

// Left-to-right order of word-origin leaves of a pure tensor tree.
std::vector<int> tree_yield(const ProofNet& tree);

// Searches (breadth-first, canonical-form deduplicated) for a structural
// rewrite sequence giving a tree whose yield is 0..n_words-1. Returns the
// rewritten tree if found within `max_steps` rewrites.
std::optional<ProofNet> repair_yield(const ProofNet& tree,
                                     const std::vector<StructuralRule>& rules,
                                     int n_words, int max_steps = 6);

}  // namespace tlg

#endif
