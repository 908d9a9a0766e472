#include "tlg/net.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tlg {

VertexId ProofNet::add_vertex(Vertex v) {
  if (v.id == kNoVertex) v.id = next_id_;
  if (pos_.count(v.id)) throw std::invalid_argument("duplicate vertex id");
  next_id_ = std::max(next_id_, v.id + 1);
  pos_[v.id] = vertices_.size();
  vertices_.push_back(std::move(v));
  return vertices_.back().id;
}

VertexId ProofNet::fresh_vertex() { return add_vertex(Vertex{}); }

void ProofNet::add_link(Link l) { links_.push_back(l); }

const Vertex& ProofNet::vertex(VertexId id) const {
  auto it = pos_.find(id);
  if (it == pos_.end()) throw std::out_of_range("no such vertex");
  return vertices_[it->second];
}

Vertex& ProofNet::vertex(VertexId id) {
  auto it = pos_.find(id);
  if (it == pos_.end()) throw std::out_of_range("no such vertex");
  return vertices_[it->second];
}

bool ProofNet::has_vertex(VertexId id) const { return pos_.count(id) > 0; }

void ProofNet::reindex() {
  pos_.clear();
  for (std::size_t i = 0; i < vertices_.size(); ++i) pos_[vertices_[i].id] = i;
}

void ProofNet::remove_vertex(VertexId id) {
  auto it = pos_.find(id);
  if (it == pos_.end()) throw std::out_of_range("no such vertex");
  vertices_.erase(vertices_.begin() + static_cast<long>(it->second));
  reindex();
}

void ProofNet::remove_link(std::size_t index) {
  links_.erase(links_.begin() + static_cast<long>(index));
}

void ProofNet::merge_vertices(VertexId into, VertexId from) {
  if (into == from) return;
  Vertex& a = vertex(into);
  Vertex& b = vertex(from);
  if (b.atom && !a.atom) a.atom = b.atom;
  if (b.origin.word && !a.origin.word) a.origin.word = b.origin.word;
  a.origin.goal = a.origin.goal || b.origin.goal;
  a.polarity.reset();
  for (Link& l : links_) {
    for (VertexId* f : {&l.left, &l.right, &l.conclusion, &l.premise, &l.arrow,
                        &l.withdrawn})
      if (*f == from) *f = into;
  }
  remove_vertex(from);
  int above = 0, below = 0;
  for (const Link& l : links_) {
    if (l.conclusion == into || l.arrow == into) ++above;
    if (l.left == into || l.right == into || l.premise == into) ++below;
  }
  if (above > 1 || below > 1)
    throw std::runtime_error(
        "merge would give a vertex two links above or below");
}

NetIndex::NetIndex(const ProofNet& net) : net_(net) {
  for (std::size_t i = 0; i < net.links().size(); ++i) {
    const Link& l = net.links()[i];
    auto put = [&](std::unordered_map<VertexId, std::size_t>& m, VertexId v) {
      if (v == kNoVertex) return;
      if (m.count(v))
        throw std::runtime_error("vertex occupies the same position twice");
      m[v] = i;
    };
    if (l.is_tensor()) {
      put(below_, l.left);
      put(below_, l.right);
      put(above_, l.conclusion);
    } else {
      put(below_, l.premise);
      put(above_, l.arrow);
      put(withdrawing_, l.withdrawn);
    }
  }
  // Union-find over vertices for components.
  std::unordered_map<VertexId, VertexId> parent;
  std::function<VertexId(VertexId)> find = [&](VertexId v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (const Vertex& v : net.vertices()) parent[v.id] = v.id;
  auto unite = [&](VertexId a, VertexId b) {
    if (a == kNoVertex || b == kNoVertex) return;
    parent[find(a)] = find(b);
  };
  for (const Link& l : net.links()) {
    if (l.is_tensor()) {
      unite(l.left, l.conclusion);
      unite(l.right, l.conclusion);
    } else {
      unite(l.premise, l.arrow);
      unite(l.withdrawn, l.arrow);
    }
  }
  std::map<VertexId, std::vector<VertexId>> groups;
  for (const Vertex& v : net.vertices()) groups[find(v.id)].push_back(v.id);
  for (auto& [rep, members] : groups) {
    std::sort(members.begin(), members.end());
    for (VertexId m : members) comp_of_[m] = static_cast<int>(components_.size());
    components_.push_back(std::move(members));
  }
}

std::optional<std::size_t> NetIndex::above(VertexId v) const {
  auto it = above_.find(v);
  if (it == above_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> NetIndex::below(VertexId v) const {
  auto it = below_.find(v);
  if (it == below_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> NetIndex::withdrawing(VertexId v) const {
  auto it = withdrawing_.find(v);
  if (it == withdrawing_.end()) return std::nullopt;
  return it->second;
}

std::vector<VertexId> NetIndex::roots() const {
  std::vector<VertexId> out;
  for (const Vertex& v : net_.vertices())
    if (is_root(v.id)) out.push_back(v.id);
  std::sort(out.begin(), out.end());
  return out;
}

int NetIndex::component_of(VertexId v) const {
  auto it = comp_of_.find(v);
  if (it == comp_of_.end()) throw std::out_of_range("no such vertex");
  return it->second;
}

std::vector<VertexId> NetIndex::subtree(VertexId v) const {
  std::vector<VertexId> out;
  std::function<void(VertexId)> rec = [&](VertexId u) {
    out.push_back(u);
    auto ab = above(u);
    if (!ab) return;
    const Link& l = net_.links()[*ab];
    if (l.is_tensor()) {
      rec(l.left);
      rec(l.right);
    } else {
      rec(l.premise);
    }
  };
  rec(v);
  std::sort(out.begin(), out.end());
  return out;
}

VertexId NetIndex::root_of(VertexId v) const {
  VertexId cur = v;
  while (true) {
    auto be = below(cur);
    if (!be) return cur;
    const Link& l = net_.links()[*be];
    cur = l.is_tensor() ? l.conclusion : l.arrow;
  }
}

// ---------------------------------------------------------------------------
// Canonical form: colour refinement with individualisation. Nets here are
// small (tens of vertices), so the simple scheme is plenty.

namespace {

struct Canonicalizer {
  const ProofNet& net;
  CanonOptions opts;
  std::vector<VertexId> ids;
  std::unordered_map<VertexId, int> index_of;

  explicit Canonicalizer(const ProofNet& n, const CanonOptions& o)
      : net(n), opts(o) {
    for (const Vertex& v : n.vertices()) ids.push_back(v.id);
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i)
      index_of[ids[i]] = static_cast<int>(i);
  }

  std::string initial_color(const Vertex& v) const {
    std::ostringstream os;
    if (opts.include_words) os << 'w' << (v.origin.word ? *v.origin.word : -1);
    if (opts.include_goal) os << (v.origin.goal ? 'g' : '.');
    if (opts.include_atoms) {
      os << 'a' << (v.atom ? *v.atom : std::string("-"));
      os << 'p'
         << (v.polarity ? (*v.polarity == Polarity::Negative ? "n" : "p") : "-");
    }
    return os.str();
  }

  static std::size_t distinct(const std::vector<int>& color) {
    std::set<int> s(color.begin(), color.end());
    return s.size();
  }

  // Refinement rounds extend each colour with the link-role signature until
  // the partition stops splitting. Classes never merge, so this terminates
  // after at most n rounds.
  std::vector<int> refine(std::vector<int> color) const {
    std::size_t n = ids.size();
    std::size_t classes = distinct(color);
    while (true) {
      std::vector<std::vector<std::string>> sigs(n);
      for (const Link& l : net.links()) {
        std::ostringstream base;
        base << (l.is_tensor() ? 'T' : 'P') << l.mode << tag_str(l.tag);
        auto c = [&](VertexId v) {
          return v == kNoVertex ? -2 : color[index_of.at(v)];
        };
        if (l.is_tensor()) {
          std::ostringstream all;
          all << base.str() << '|' << c(l.left) << ',' << c(l.right) << ','
              << c(l.conclusion);
          if (l.left != kNoVertex)
            sigs[index_of.at(l.left)].push_back("L" + all.str());
          if (l.right != kNoVertex)
            sigs[index_of.at(l.right)].push_back("R" + all.str());
          if (l.conclusion != kNoVertex)
            sigs[index_of.at(l.conclusion)].push_back("C" + all.str());
        } else {
          std::ostringstream all;
          all << base.str() << '|' << c(l.premise) << ',' << c(l.arrow) << ','
              << c(l.withdrawn);
          if (l.premise != kNoVertex)
            sigs[index_of.at(l.premise)].push_back("M" + all.str());
          if (l.arrow != kNoVertex)
            sigs[index_of.at(l.arrow)].push_back("A" + all.str());
          if (l.withdrawn != kNoVertex)
            sigs[index_of.at(l.withdrawn)].push_back("W" + all.str());
        }
      }
      std::vector<std::string> combined(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::sort(sigs[i].begin(), sigs[i].end());
        std::ostringstream os;
        os << color[i];
        for (const auto& s : sigs[i]) os << ';' << s;
        combined[i] = os.str();
      }
      std::vector<std::string> sorted = combined;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      std::vector<int> next(n);
      for (std::size_t i = 0; i < n; ++i)
        next[i] = static_cast<int>(
            std::lower_bound(sorted.begin(), sorted.end(), combined[i]) -
            sorted.begin());
      std::size_t next_classes = distinct(next);
      if (next_classes == classes) return next;
      classes = next_classes;
      color = std::move(next);
    }
  }

  std::vector<int> initial() const {
    std::vector<std::string> init;
    init.reserve(ids.size());
    for (VertexId id : ids) init.push_back(initial_color(net.vertex(id)));
    std::vector<std::string> sorted = init;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> color(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
      color[i] = static_cast<int>(
          std::lower_bound(sorted.begin(), sorted.end(), init[i]) -
          sorted.begin());
    return color;
  }

  // Order from a discrete colouring.
  std::vector<VertexId> order_from(const std::vector<int>& color) const {
    std::vector<VertexId> order(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
      order[color[i]] = ids[i];
    return order;
  }

  std::string render(const std::vector<VertexId>& order) const {
    std::unordered_map<VertexId, int> num;
    for (std::size_t i = 0; i < order.size(); ++i)
      num[order[i]] = static_cast<int>(i);
    std::ostringstream os;
    os << "V[";
    for (VertexId id : order) {
      const Vertex& v = net.vertex(id);
      if (opts.include_words)
        os << (v.origin.word ? std::to_string(*v.origin.word) : "-");
      if (opts.include_goal && v.origin.goal) os << 'g';
      if (opts.include_atoms) {
        os << ':' << (v.atom ? *v.atom : "");
        if (v.polarity)
          os << (*v.polarity == Polarity::Negative ? '-' : '+');
      }
      os << ' ';
    }
    os << "]L[";
    std::vector<std::string> rendered;
    for (const Link& l : net.links()) {
      std::ostringstream ls;
      auto r = [&](VertexId v) { return v == kNoVertex ? -1 : num.at(v); };
      if (l.is_tensor())
        ls << 'T' << l.mode << tag_str(l.tag) << '(' << r(l.left) << ','
           << r(l.right) << ',' << r(l.conclusion) << ')';
      else
        ls << 'P' << l.mode << tag_str(l.tag) << '(' << r(l.premise) << ','
           << r(l.arrow) << ',' << r(l.withdrawn) << ')';
      rendered.push_back(ls.str());
    }
    std::sort(rendered.begin(), rendered.end());
    for (const auto& s : rendered) os << s << ' ';
    os << ']';
    return os.str();
  }

  bool discrete(const std::vector<int>& color) const {
    std::set<int> seen(color.begin(), color.end());
    return seen.size() == color.size();
  }

  // Full canonicalisation: refine, and when colour classes remain ambiguous
  // individualise every member of the first smallest class and keep the
  // lexicographically least rendering.
  std::string solve(std::vector<int> color, std::vector<VertexId>* best_order,
                    int depth = 0) const {
    color = refine(std::move(color));
    if (discrete(color)) {
      auto order = order_from(color);
      if (best_order) *best_order = order;
      return render(order);
    }
    // pick smallest non-trivial class with least colour value
    std::map<int, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < color.size(); ++i) classes[color[i]].push_back(i);
    const std::vector<std::size_t>* target = nullptr;
    for (const auto& [c, members] : classes) {
      if (members.size() > 1) {
        if (!target || members.size() < target->size()) target = &members;
      }
    }
    std::string best;
    std::vector<VertexId> best_ord;
    for (std::size_t pick : *target) {
      std::vector<int> next = color;
      for (std::size_t i = 0; i < next.size(); ++i)
        next[i] = next[i] * 2 + (i == pick ? 1 : 0);
      std::vector<VertexId> ord;
      std::string key = solve(next, &ord, depth + 1);
      if (best.empty() || key < best) {
        best = key;
        best_ord = ord;
      }
    }
    if (best_order) *best_order = best_ord;
    return best;
  }
};

}  // namespace

std::string canonical_key(const ProofNet& net, const CanonOptions& opts) {
  if (net.vertices().empty()) return "V[]L[]";
  Canonicalizer c(net, opts);
  return c.solve(c.initial(), nullptr);
}

std::unordered_map<VertexId, VertexId> canonical_numbering(
    const ProofNet& net, const CanonOptions& opts) {
  std::unordered_map<VertexId, VertexId> out;
  if (net.vertices().empty()) return out;
  Canonicalizer c(net, opts);
  std::vector<VertexId> order;
  c.solve(c.initial(), &order);
  for (std::size_t i = 0; i < order.size(); ++i)
    out[order[i]] = static_cast<VertexId>(i);
  return out;
}

ProofNet canonical_renumber(const ProofNet& net, const CanonOptions& opts) {
  auto num = canonical_numbering(net, opts);
  ProofNet out;
  std::vector<const Vertex*> ordered(net.vertices().size());
  for (const Vertex& v : net.vertices()) ordered[num.at(v.id)] = &v;
  for (const Vertex* v : ordered) {
    Vertex copy = *v;
    copy.id = num.at(v->id);
    out.add_vertex(copy);
  }
  std::vector<Link> ls = net.links();
  for (Link& l : ls) {
    for (VertexId* f : {&l.left, &l.right, &l.conclusion, &l.premise, &l.arrow,
                        &l.withdrawn})
      if (*f != kNoVertex) *f = num.at(*f);
  }
  std::sort(ls.begin(), ls.end(), [](const Link& a, const Link& b) {
    auto key = [](const Link& l) {
      return std::tuple(l.kind == LinkKind::Tensor ? 0 : 1, l.conclusion,
                        l.arrow, l.left, l.right, l.premise);
    };
    return key(a) < key(b);
  });
  for (const Link& l : ls) out.add_link(l);
  return out;
}

// ---------------------------------------------------------------------------
// JSON / DOT

const char* tag_str(Tag t) {
  switch (t) {
    case Tag::None: return "";
    case Tag::Over: return "/";
    case Tag::Under: return "\\";
    case Tag::App: return "@";
    case Tag::Lambda: return "lambda";
  }
  return "";
}

static Tag tag_from_str(const std::string& s) {
  if (s == "/") return Tag::Over;
  if (s == "\\") return Tag::Under;
  if (s == "@") return Tag::App;
  if (s == "lambda" || s == "\xce\xbb") return Tag::Lambda;
  if (s.empty()) return Tag::None;
  throw std::invalid_argument("unknown link tag: " + s);
}

std::string net_to_json(const ProofNet& net) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (const Vertex& v : net.vertices()) {
    nlohmann::json vj;
    vj["id"] = v.id;
    vj["kind"] = v.atom ? "atom" : "internal";
    if (v.atom) vj["atom"] = *v.atom;
    if (v.polarity)
      vj["polarity"] = *v.polarity == Polarity::Negative ? "neg" : "pos";
    if (v.origin.goal)
      vj["word"] = "goal";
    else if (v.origin.word)
      vj["word"] = *v.origin.word;
    j["vertices"].push_back(vj);
  }
  j["links"] = nlohmann::json::array();
  for (const Link& l : net.links()) {
    nlohmann::json lj;
    lj["kind"] = l.is_tensor() ? "tensor" : "par";
    lj["mode"] = l.mode;
    if (l.tag != Tag::None) lj["tag"] = tag_str(l.tag);
    if (l.is_tensor()) {
      lj["left"] = l.left;
      lj["right"] = l.right;
      lj["conclusion"] = l.conclusion;
    } else {
      lj["premise"] = l.premise;
      lj["arrow"] = l.arrow;
      lj["withdrawn"] = l.withdrawn;
    }
    j["links"].push_back(lj);
  }
  return j.dump();
}

ProofNet net_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  ProofNet net;
  for (const auto& vj : j.at("vertices")) {
    Vertex v;
    v.id = vj.at("id").get<int>();
    if (vj.contains("atom")) v.atom = vj["atom"].get<std::string>();
    if (vj.contains("polarity"))
      v.polarity = vj["polarity"].get<std::string>() == "neg"
                       ? Polarity::Negative
                       : Polarity::Positive;
    if (vj.contains("word")) {
      if (vj["word"].is_string())
        v.origin.goal = true;
      else
        v.origin.word = vj["word"].get<int>();
    }
    net.add_vertex(v);
  }
  for (const auto& lj : j.at("links")) {
    Link l;
    l.kind = lj.at("kind").get<std::string>() == "tensor" ? LinkKind::Tensor
                                                          : LinkKind::Par;
    l.mode = lj.value("mode", 0);
    l.tag = tag_from_str(lj.value("tag", ""));
    if (l.is_tensor()) {
      l.left = lj.at("left").get<int>();
      l.right = lj.at("right").get<int>();
      l.conclusion = lj.at("conclusion").get<int>();
    } else {
      l.premise = lj.at("premise").get<int>();
      l.arrow = lj.at("arrow").get<int>();
      l.withdrawn = lj.at("withdrawn").get<int>();
    }
    net.add_link(l);
  }
  return net;
}

std::string net_to_dot(const ProofNet& net,
                       const std::vector<std::string>* word_labels) {
  std::ostringstream os;
  os << "graph proofnet {\n  node [fontsize=10];\n";
  for (const Vertex& v : net.vertices()) {
    std::string label;
    if (v.atom) {
      label = *v.atom;
      if (v.polarity)
        label += *v.polarity == Polarity::Negative ? "-" : "+";
    }
    if (v.origin.word) {
      std::string w = word_labels && *v.origin.word <
                              static_cast<int>(word_labels->size())
                          ? (*word_labels)[*v.origin.word]
                          : "w" + std::to_string(*v.origin.word);
      label = label.empty() ? w : w + ":" + label;
    }
    if (v.origin.goal) label = label.empty() ? "goal" : label + ":goal";
    os << "  v" << v.id << " [shape=circle, label=\"" << label
       << "\", width=0.25];\n";
  }
  for (std::size_t i = 0; i < net.links().size(); ++i) {
    const Link& l = net.links()[i];
    std::string mode = l.mode != 0 ? std::to_string(l.mode) : "";
    if (l.is_tensor()) {
      os << "  t" << i << " [shape=point, style=filled, fillcolor=black, "
         << "xlabel=\"" << tag_str(l.tag) << mode << "\"];\n";
      os << "  v" << l.left << " -- t" << i << ";\n";
      os << "  v" << l.right << " -- t" << i << ";\n";
      os << "  t" << i << " -- v" << l.conclusion << ";\n";
    } else {
      os << "  t" << i << " [shape=circle, label=\"" << tag_str(l.tag) << mode
         << "\", width=0.18];\n";
      os << "  v" << l.premise << " -- t" << i << ";\n";
      os << "  t" << i << " -- v" << l.arrow << " [dir=forward];\n";
      os << "  t" << i << " -- v" << l.withdrawn
         << " [style=dashed, constraint=false];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace tlg
