#include "tlg/frame.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace tlg {

namespace {

// Recursive polarized unfolding. Returns the vertex standing for the
// occurrence of `f`. Producer occurrences of implications get a tensor
// link (elimination shape), consumer occurrences a par link (introduction
// shape), exactly as in the link table.
VertexId unfold_rec(ProofNet& net, const Formula& f, bool producer) {
  if (f.is_atom()) {
    Vertex v;
    v.atom = f.atom_name();
    v.polarity = producer ? Polarity::Negative : Polarity::Positive;
    return net.add_vertex(v);
  }
  VertexId occ = net.fresh_vertex();
  Tag tag;
  switch (f.conn()) {
    case Conn::Over: tag = Tag::Over; break;
    case Conn::Under: tag = Tag::Under; break;
    case Conn::Lolli: tag = Tag::App; break;  // retagged to Lambda on pars
  }
  if (producer) {
    // Elimination: the occurrence consumes its argument and produces the
    // result below. A/B sits left of its argument, A\C right of it.
    Link l;
    l.kind = LinkKind::Tensor;
    l.mode = f.conn() == Conn::Lolli ? 0 : f.mode();
    l.tag = tag;
    VertexId arg = unfold_rec(net, f.arg_part(), /*producer=*/false);
    VertexId res = unfold_rec(net, f.result_part(), /*producer=*/true);
    if (f.conn() == Conn::Under) {
      l.left = arg;
      l.right = occ;
    } else {
      l.left = occ;
      l.right = arg;
    }
    l.conclusion = res;
    net.add_link(l);
  } else {
    // Introduction: a consumer implication withdraws its (producer)
    // argument from the consumer unfolding of its result.
    Link l;
    l.kind = LinkKind::Par;
    l.mode = f.conn() == Conn::Lolli ? 0 : f.mode();
    l.tag = f.conn() == Conn::Lolli ? Tag::Lambda : tag;
    l.premise = unfold_rec(net, f.result_part(), /*producer=*/false);
    l.withdrawn = unfold_rec(net, f.arg_part(), /*producer=*/true);
    l.arrow = occ;
    net.add_link(l);
  }
  return occ;
}

}  // namespace

ProofNet unfold(const Lexicon& lex) {
  ProofNet net;
  for (std::size_t i = 0; i < lex.entries.size(); ++i) {
    VertexId occ = unfold_rec(net, lex.entries[i].second, /*producer=*/true);
    net.vertex(occ).origin.word = static_cast<int>(i);
  }
  VertexId goal = unfold_rec(net, lex.goal, /*producer=*/false);
  net.vertex(goal).origin.goal = true;
  return net;
}

SlotGroups slot_groups(const ProofNet& frame) {
  SlotGroups out;
  for (const Vertex& v : frame.vertices()) {
    if (!v.is_slot()) continue;
    auto& [negs, poss] = out.by_atom[*v.atom];
    if (*v.polarity == Polarity::Negative)
      negs.push_back(v.id);
    else
      poss.push_back(v.id);
  }
  for (auto& [name, sides] : out.by_atom) {
    std::sort(sides.first.begin(), sides.first.end());
    std::sort(sides.second.begin(), sides.second.end());
  }
  return out;
}

MatchingEnumerator::MatchingEnumerator(const ProofNet& frame,
                                       const Matching& fixed) {
  SlotGroups groups = slot_groups(frame);
  std::set<VertexId> taken;
  for (const auto& [neg, pos] : fixed.pairs) {
    const Vertex& vn = frame.vertex(neg);
    const Vertex& vp = frame.vertex(pos);
    if (!vn.is_slot() || !vp.is_slot() ||
        *vn.polarity != Polarity::Negative ||
        *vp.polarity != Polarity::Positive || *vn.atom != *vp.atom)
      throw std::invalid_argument(
          "fixed pair must join a negative and a positive slot of one atom");
    if (!taken.insert(neg).second || !taken.insert(pos).second)
      throw std::invalid_argument("fixed pairs reuse a slot");
    fixed_pairs_.emplace_back(neg, pos);
  }
  for (auto& [name, sides] : groups.by_atom) {
    Group g;
    g.atom = name;
    for (VertexId v : sides.first)
      if (!taken.count(v)) g.negatives.push_back(v);
    for (VertexId v : sides.second)
      if (!taken.count(v)) g.positives.push_back(v);
    if (g.negatives.size() != g.positives.size()) {
      balanced_ = false;
      diagnostic_ += (diagnostic_.empty() ? "" : "; ") + name + ": " +
                     std::to_string(g.negatives.size()) + " negative vs " +
                     std::to_string(g.positives.size()) + " positive";
    }
    if (!g.negatives.empty() || !g.positives.empty())
      groups_.push_back(std::move(g));
  }
}

std::uint64_t MatchingEnumerator::count() const {
  if (!balanced_) return 0;
  std::uint64_t total = 1;
  for (const Group& g : groups_) {
    for (std::uint64_t k = 2; k <= g.negatives.size(); ++k) {
      if (total > UINT64_MAX / k)
        throw std::overflow_error("matching count overflows 64 bits");
      total *= k;
    }
  }
  return total;
}

Matching MatchingEnumerator::at(std::uint64_t index) const {
  if (!balanced_) throw std::out_of_range("unbalanced frame has no matchings");
  Matching m;
  m.pairs = fixed_pairs_;
  // Mixed-radix decomposition: each group contributes a permutation indexed
  // in lexicographic order (factorial number system).
  std::uint64_t rem = index;
  std::vector<std::vector<int>> perms;
  for (auto it = groups_.rbegin(); it != groups_.rend(); ++it) {
    const Group& g = *it;
    std::uint64_t fact = 1;
    for (std::uint64_t k = 2; k <= g.negatives.size(); ++k) fact *= k;
    std::uint64_t local = rem % fact;
    rem /= fact;
    // local -> permutation (lexicographic rank decoding)
    std::size_t n = g.negatives.size();
    std::vector<int> avail(n);
    for (std::size_t i = 0; i < n; ++i) avail[i] = static_cast<int>(i);
    std::vector<int> perm;
    std::uint64_t f = fact;
    for (std::size_t i = 0; i < n; ++i) {
      f /= (n - i);
      std::size_t pick = static_cast<std::size_t>(local / f);
      local %= f;
      perm.push_back(avail[pick]);
      avail.erase(avail.begin() + static_cast<long>(pick));
    }
    perms.push_back(std::move(perm));
  }
  if (rem != 0) throw std::out_of_range("matching index out of range");
  std::reverse(perms.begin(), perms.end());
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    const Group& g = groups_[gi];
    for (std::size_t i = 0; i < g.negatives.size(); ++i)
      m.pairs.emplace_back(g.negatives[i],
                           g.positives[static_cast<std::size_t>(perms[gi][i])]);
  }
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

bool MatchingEnumerator::next(Matching& out) {
  if (!balanced_) return false;
  if (cursor_ >= count()) return false;
  out = at(cursor_++);
  return true;
}

ProofNet apply_matching(const ProofNet& frame, const Matching& m) {
  // Totality check: every slot must be covered exactly once.
  std::set<VertexId> used;
  std::size_t slots = 0;
  for (const Vertex& v : frame.vertices())
    if (v.is_slot()) ++slots;
  for (const auto& [neg, pos] : m.pairs) {
    const Vertex& vn = frame.vertex(neg);
    const Vertex& vp = frame.vertex(pos);
    if (!vn.is_slot() || !vp.is_slot() ||
        *vn.polarity != Polarity::Negative ||
        *vp.polarity != Polarity::Positive || *vn.atom != *vp.atom)
      throw std::invalid_argument("matching pairs mismatched slots");
    if (!used.insert(neg).second || !used.insert(pos).second)
      throw std::invalid_argument("matching reuses a slot");
  }
  if (used.size() != slots)
    throw std::invalid_argument("matching is not total for this frame");
  ProofNet net = frame;
  for (const auto& [neg, pos] : m.pairs) net.merge_vertices(neg, pos);
  return net;
}

}  // namespace tlg
