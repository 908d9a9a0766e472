#ifndef TLG_NET_HPP
#define TLG_NET_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace tlg {

using VertexId = int;
inline constexpr VertexId kNoVertex = -1;

enum class Polarity { Negative, Positive };  // producer / consumer

// Where a vertex came from: a word of the input sentence, the goal, or
// nowhere in particular (internal vertices, introduced variables).
struct Origin {
  std::optional<int> word;
  bool goal = false;
};

struct Vertex {
  VertexId id = kNoVertex;
  std::optional<std::string> atom;      // atom name, kept through merging
  std::optional<Polarity> polarity;     // set only on dangling slots
  Origin origin;

  bool is_slot() const { return polarity.has_value(); }
};

enum class LinkKind { Tensor, Par };

// Connective tag carried by a link. Over/Under come from directional
// formulas, App/Lambda from the linear (semantic) language.
enum class Tag { None, Over, Under, App, Lambda };

// A link connects three vertices. For a tensor the premises sit above the
// junction and the conclusion below; for a par the premise sits above, the
// arrow conclusion below, and the withdrawn vertex is attached by the
// curved edge. A vertex may be a premise of at most one link and a
// conclusion of at most one link; the withdrawn position counts as neither.
struct Link {
  LinkKind kind = LinkKind::Tensor;
  int mode = 0;
  Tag tag = Tag::None;
  // tensor fields
  VertexId left = kNoVertex;
  VertexId right = kNoVertex;
  VertexId conclusion = kNoVertex;
  // par fields
  VertexId premise = kNoVertex;
  VertexId arrow = kNoVertex;
  VertexId withdrawn = kNoVertex;

  bool is_tensor() const { return kind == LinkKind::Tensor; }
  bool is_par() const { return kind == LinkKind::Par; }
};

class ProofNet {
 public:
  VertexId add_vertex(Vertex v);  // v.id == kNoVertex allocates a fresh id
  VertexId fresh_vertex();        // internal vertex, no payload
  void add_link(Link l);

  const Vertex& vertex(VertexId id) const;
  Vertex& vertex(VertexId id);
  bool has_vertex(VertexId id) const;

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Link>& links() const { return links_; }
  std::vector<Link>& links() { return links_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t link_count() const { return links_.size(); }

  // Merges vertex `from` into vertex `into`: every link reference to `from`
  // is rewritten, payloads are combined, and `from` is removed. Throws if
  // the merged vertex would carry two links above or two below it.
  void merge_vertices(VertexId into, VertexId from);

  void remove_vertex(VertexId id);
  void remove_link(std::size_t index);

  VertexId max_id() const { return next_id_ - 1; }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Link> links_;
  std::unordered_map<VertexId, std::size_t> pos_;
  VertexId next_id_ = 0;

  void reindex();
};

// Incidence index over an immutable snapshot of a net.
class NetIndex {
 public:
  explicit NetIndex(const ProofNet& net);

  // Link above v: the link having v as its (tensor) conclusion or (par)
  // arrow conclusion. Link below v: the link having v as a premise.
  std::optional<std::size_t> above(VertexId v) const;
  std::optional<std::size_t> below(VertexId v) const;
  std::optional<std::size_t> withdrawing(VertexId v) const;

  bool is_root(VertexId v) const { return !below(v).has_value(); }
  bool is_leaf(VertexId v) const { return !above(v).has_value(); }

  std::vector<VertexId> roots() const;

  // Connected components over all link incidences including withdraw
  // edges. Each component is a sorted list of vertex ids.
  const std::vector<std::vector<VertexId>>& components() const {
    return components_;
  }
  int component_of(VertexId v) const;

  // Vertices of the subtree of v: v plus everything reachable upward
  // through premises. Sorted.
  std::vector<VertexId> subtree(VertexId v) const;

  // Root of the component containing v, found by descending through
  // premise positions. Requires a unique root below v.
  VertexId root_of(VertexId v) const;

  const ProofNet& net() const { return net_; }

 private:
  const ProofNet& net_;
  std::unordered_map<VertexId, std::size_t> above_, below_, withdrawing_;
  std::vector<std::vector<VertexId>> components_;
  std::unordered_map<VertexId, int> comp_of_;
};

struct CanonOptions {
  bool include_atoms = true;   // distinguish atom names / polarities
  bool include_words = true;   // distinguish word origins
  bool include_goal = true;    // distinguish the goal marker
};

// Canonical, isomorphism-invariant renumbering. Word-origin vertices are
// assigned their word index where possible; remaining vertices follow in
// refinement order. Two nets have equal canonical keys iff they are
// isomorphic respecting payloads selected by the options.
std::string canonical_key(const ProofNet& net, const CanonOptions& opts = {});
ProofNet canonical_renumber(const ProofNet& net, const CanonOptions& opts = {});

// Mapping from old ids to canonical ids, same ordering as canonical_renumber.
std::unordered_map<VertexId, VertexId> canonical_numbering(
    const ProofNet& net, const CanonOptions& opts = {});

std::string net_to_json(const ProofNet& net);
ProofNet net_from_json(const std::string& json_text);
std::string net_to_dot(const ProofNet& net,
                       const std::vector<std::string>* word_labels = nullptr);

const char* tag_str(Tag t);

}  // namespace tlg

#endif
