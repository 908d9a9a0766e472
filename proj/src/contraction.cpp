#include "tlg/contraction.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace tlg {

const char* path_class_str(PathClass c) {
  switch (c) {
    case PathClass::NL: return "NL";
    case PathClass::L: return "L";
    case PathClass::BranchExt: return "BranchExt";
    case PathClass::LP: return "LP";
  }
  return "?";
}

PathClass path_class_from_str(const std::string& s) {
  if (s == "NL") return PathClass::NL;
  if (s == "L") return PathClass::L;
  if (s == "BranchExt") return PathClass::BranchExt;
  if (s == "LP") return PathClass::LP;
  throw std::invalid_argument("unknown path class: " + s);
}

PathClass Regime::class_for(Tag dir, int mode) const {
  auto it2 = per_mode_dir_.find({mode, dir});
  if (it2 != per_mode_dir_.end()) return it2->second;
  auto it = per_mode_.find(mode);
  if (it != per_mode_.end()) return it->second;
  return default_;
}

Regime Regime::from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  Regime r;
  if (j.contains("default"))
    r.set_default(path_class_from_str(j["default"].get<std::string>()));
  if (j.contains("modes")) {
    for (auto it = j["modes"].begin(); it != j["modes"].end(); ++it) {
      int mode = std::stoi(it.key());
      const auto& v = it.value();
      if (v.is_string()) {
        r.set_mode(mode, path_class_from_str(v.get<std::string>()));
      } else {
        if (v.contains("class"))
          r.set_mode(mode, path_class_from_str(v["class"].get<std::string>()));
        if (v.contains("over"))
          r.set_mode_dir(mode, Tag::Over,
                         path_class_from_str(v["over"].get<std::string>()));
        if (v.contains("under"))
          r.set_mode_dir(mode, Tag::Under,
                         path_class_from_str(v["under"].get<std::string>()));
      }
    }
  }
  if (j.contains("structural")) {
    for (const auto& s : j["structural"]) {
      if (s.get<std::string>() == "mode1-insert")
        r.structural.push_back(StructuralRule{1});
      else
        throw std::invalid_argument("unknown structural rule: " +
                                    s.get<std::string>());
    }
  }
  return r;
}

std::string Regime::to_json() const {
  nlohmann::json j;
  j["default"] = path_class_str(default_);
  nlohmann::json modes = nlohmann::json::object();
  for (const auto& [m, c] : per_mode_) modes[std::to_string(m)] = path_class_str(c);
  if (!modes.empty()) j["modes"] = modes;
  if (!structural.empty()) {
    j["structural"] = nlohmann::json::array();
    for (const auto& s : structural) j["structural"].push_back("mode1-insert");
  }
  return j.dump();
}

bool path_accepts(PathClass cls, char side, const std::string& word) {
  if (word.empty()) return false;
  switch (cls) {
    case PathClass::NL:
      return word.size() == 1 && word[0] == side;
    case PathClass::L:
      return std::all_of(word.begin(), word.end(),
                         [&](char c) { return c == side; });
    case PathClass::BranchExt:
      return word.back() == side;
    case PathClass::LP:
      return true;
  }
  return false;
}

std::vector<Redex> find_redexes(const ProofNet& net, const Regime& regime) {
  NetIndex idx(net);
  std::vector<Redex> out;
  for (std::size_t pi = 0; pi < net.links().size(); ++pi) {
    const Link& p = net.links()[pi];
    if (!p.is_par()) continue;
    PathClass cls = regime.class_for(p.tag, p.mode);
    // Upward walk from the premise through tensor links only. Paths form a
    // tree, so the withdrawn vertex is reached along at most one of them.
    std::function<void(VertexId, std::string&, std::vector<std::size_t>&)> walk =
        [&](VertexId at, std::string& word, std::vector<std::size_t>& tensors) {
          if (at == p.withdrawn && !word.empty()) {
            bool ok = false;
            if (p.tag == Tag::Lambda || p.tag == Tag::None || p.tag == Tag::App)
              ok = path_accepts(cls, 'l', word) || path_accepts(cls, 'r', word);
            else if (p.tag == Tag::Under)
              ok = path_accepts(cls, 'l', word);
            else
              ok = path_accepts(cls, 'r', word);
            if (ok) {
              Redex r;
              r.par_link = pi;
              r.tensors = tensors;
              r.word = word;
              r.cls = cls;
              r.par_mode = p.mode;
              r.par_tag = p.tag;
              out.push_back(std::move(r));
            }
            return;  // the withdrawn vertex has nothing above it
          }
          auto ab = idx.above(at);
          if (!ab) return;
          const Link& l = net.links()[*ab];
          if (!l.is_tensor()) return;  // the path may not cross par links
          tensors.push_back(*ab);
          word.push_back('l');
          walk(l.left, word, tensors);
          word.back() = 'r';
          walk(l.right, word, tensors);
          word.pop_back();
          tensors.pop_back();
        };
    std::string word;
    std::vector<std::size_t> tensors;
    walk(p.premise, word, tensors);
  }
  return out;
}

ProofNet contract(const ProofNet& net, const Redex& redex) {
  if (redex.par_link >= net.links().size() || redex.tensors.empty())
    throw std::invalid_argument("stale redex");
  const Link p = net.links()[redex.par_link];
  std::size_t ti = redex.tensors.back();
  if (ti >= net.links().size()) throw std::invalid_argument("stale redex");
  const Link t = net.links()[ti];
  if (!p.is_par() || !t.is_tensor())
    throw std::invalid_argument("stale redex");
  bool withdrawn_left = t.left == p.withdrawn;
  bool withdrawn_right = t.right == p.withdrawn;
  if (!withdrawn_left && !withdrawn_right)
    throw std::invalid_argument("stale redex: tensor no longer adjacent");

  ProofNet out = net;
  // Remove the two links (higher index first) and the withdrawn vertex.
  std::size_t a = redex.par_link, b = ti;
  out.remove_link(std::max(a, b));
  out.remove_link(std::min(a, b));
  out.remove_vertex(p.withdrawn);

  VertexId other = withdrawn_left ? t.right : t.left;
  // Splice: the surviving premise takes the tensor conclusion's place, and
  // the par's premise takes its arrow conclusion's place. In the length-one
  // case these chains share a vertex and collapse together.
  VertexId concl = t.conclusion;
  if (other != concl) out.merge_vertices(other, concl);
  VertexId prem = p.premise;
  if (!out.has_vertex(prem)) prem = other;  // was the tensor conclusion
  VertexId arrow = p.arrow;
  if (!out.has_vertex(arrow)) arrow = other;
  if (prem != arrow) out.merge_vertices(prem, arrow);
  return out;
}

bool is_tensor_tree(const ProofNet& net) {
  if (net.vertices().empty()) return false;
  for (const Link& l : net.links())
    if (l.is_par()) return false;
  NetIndex idx(net);
  return idx.components().size() == 1 && idx.roots().size() == 1;
}

namespace {

bool search_contract(const ProofNet& net, const Regime& regime,
                     std::unordered_map<std::string, bool>& memo,
                     std::vector<ContractionStep>& witness,
                     std::optional<ProofNet>& tree, std::mt19937* rng) {
  if (is_tensor_tree(net)) {
    tree = net;
    return true;
  }
  std::string key = canonical_key(net);
  auto it = memo.find(key);
  if (it != memo.end()) {
    if (!it->second) return false;
    // Known-contractible state reached along a different order: re-derive
    // the witness tail by continuing the search without the memo shortcut.
  }
  std::vector<Redex> redexes = find_redexes(net, regime);
  if (redexes.empty()) {
    memo[key] = false;
    return false;
  }
  if (rng) std::shuffle(redexes.begin(), redexes.end(), *rng);
  for (const Redex& r : redexes) {
    ProofNet next = contract(net, r);
    witness.push_back({r.word, r.cls, r.par_mode, r.par_tag});
    if (search_contract(next, regime, memo, witness, tree, rng)) {
      memo[key] = true;
      return true;
    }
    witness.pop_back();
  }
  memo[key] = false;
  return false;
}

}  // namespace

ProofNetCheck is_proof_net(const ProofNet& net, const Regime& regime,
                           std::optional<unsigned> shuffle_seed) {
  ProofNetCheck res;
  if (net.vertices().empty()) return res;
  {
    NetIndex idx(net);
    if (idx.components().size() != 1) return res;  // contraction never joins
    for (const Vertex& v : net.vertices())
      if (v.is_slot()) return res;  // dangling polarized slot
  }
  std::unordered_map<std::string, bool> memo;
  std::optional<std::mt19937> rng;
  if (shuffle_seed) rng.emplace(*shuffle_seed);
  res.ok = search_contract(net, regime, memo, res.witness, res.tree,
                           rng ? &*rng : nullptr);
  if (!res.ok) {
    res.witness.clear();
    res.tree.reset();
  }
  return res;
}

std::vector<ProofNet> apply_structural(const ProofNet& tree,
                                       const StructuralRule& rule) {
  std::vector<ProofNet> out;
  if (!is_tensor_tree(tree)) return out;
  NetIndex idx(tree);
  for (std::size_t li = 0; li < tree.links().size(); ++li) {
    const Link& t = tree.links()[li];
    if (!t.is_tensor() || t.mode != rule.mode) continue;
    for (VertexId v : idx.subtree(t.left)) {
      ProofNet next = tree;
      Link moved = t;
      next.remove_link(li);
      VertexId w = next.fresh_vertex();
      Link ins;
      ins.kind = LinkKind::Tensor;
      ins.mode = moved.mode;
      ins.tag = moved.tag;
      ins.left = v;
      ins.right = moved.right;
      ins.conclusion = w;
      if (v == moved.left) {
        // Re-attachment at the left daughter's root: the new link slots
        // straight into the removed link's place.
        next.add_link(ins);
        next.merge_vertices(w, moved.conclusion);
      } else {
        // v sits strictly inside the left subtree; w takes v's place in
        // v's parent link, and the left daughter takes the conclusion's.
        for (Link& l : next.links())
          for (VertexId* f : {&l.left, &l.right, &l.premise})
            if (*f == v) *f = w;
        next.add_link(ins);
        next.merge_vertices(moved.left, moved.conclusion);
      }
      out.push_back(std::move(next));
    }
  }
  return out;
}

std::vector<int> tree_yield(const ProofNet& tree) {
  NetIndex idx(tree);
  auto roots = idx.roots();
  if (roots.size() != 1)
    throw std::invalid_argument("yield requires a single-rooted tree");
  std::vector<int> out;
  std::function<void(VertexId)> rec = [&](VertexId v) {
    auto ab = idx.above(v);
    if (!ab) {
      const Vertex& vx = tree.vertex(v);
      if (vx.origin.word) out.push_back(*vx.origin.word);
      return;
    }
    const Link& l = tree.links()[*ab];
    if (!l.is_tensor())
      throw std::invalid_argument("yield requires a pure tensor tree");
    rec(l.left);
    rec(l.right);
  };
  rec(roots[0]);
  return out;
}

std::optional<ProofNet> repair_yield(const ProofNet& tree,
                                     const std::vector<StructuralRule>& rules,
                                     int n_words, int max_steps) {
  std::vector<int> want(static_cast<std::size_t>(n_words));
  for (int i = 0; i < n_words; ++i) want[static_cast<std::size_t>(i)] = i;
  if (tree_yield(tree) == want) return tree;
  std::unordered_set<std::string> seen;
  std::deque<std::pair<ProofNet, int>> queue;
  queue.emplace_back(tree, 0);
  seen.insert(canonical_key(tree));
  while (!queue.empty()) {
    auto [cur, depth] = std::move(queue.front());
    queue.pop_front();
    if (depth >= max_steps) continue;
    for (const StructuralRule& rule : rules) {
      for (ProofNet& next : apply_structural(cur, rule)) {
        std::string key = canonical_key(next);
        if (!seen.insert(key).second) continue;
        if (tree_yield(next) == want) return next;
        queue.emplace_back(std::move(next), depth + 1);
      }
    }
  }
  return std::nullopt;
}

}  // namespace tlg
