#include "tlg/generate.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "tlg/contraction.hpp"

namespace tlg {

CanonOptions gen_canon_options() {
  CanonOptions o;
  o.include_atoms = false;
  o.include_words = true;
  o.include_goal = false;
  return o;
}

bool ParserAction::operator==(const ParserAction& o) const {
  return op == o.op && functor == o.functor && argument == o.argument &&
         root == o.root && descendant == o.descendant;
}

std::string ParserAction::str() const {
  std::ostringstream os;
  switch (op) {
    case Op::Compose:
      os << "compose(" << functor << "," << argument << ")";
      break;
    case Op::ExpandFunctor:
      os << "expand_f(" << root << "," << descendant << ")";
      break;
    case Op::ExpandArgument:
      os << "expand_a(" << root << "," << descendant << ")";
      break;
    case Op::Stop:
      os << "stop";
      break;
  }
  return os.str();
}

static nlohmann::json action_json_obj(const ParserAction& a) {
  nlohmann::json j;
  switch (a.op) {
    case ParserAction::Op::Compose:
      j["op"] = "compose";
      j["functor"] = a.functor;
      j["argument"] = a.argument;
      break;
    case ParserAction::Op::ExpandFunctor:
      j["op"] = "expand_f";
      j["root"] = a.root;
      j["descendant"] = a.descendant;
      break;
    case ParserAction::Op::ExpandArgument:
      j["op"] = "expand_a";
      j["root"] = a.root;
      j["descendant"] = a.descendant;
      break;
    case ParserAction::Op::Stop:
      j["op"] = "stop";
      break;
  }
  return j;
}

static ParserAction action_from_obj(const nlohmann::json& j) {
  ParserAction a;
  std::string op = j.at("op").get<std::string>();
  if (op == "compose") {
    a.op = ParserAction::Op::Compose;
    a.functor = j.at("functor").get<int>();
    a.argument = j.at("argument").get<int>();
  } else if (op == "expand_f") {
    a.op = ParserAction::Op::ExpandFunctor;
    a.root = j.at("root").get<int>();
    a.descendant = j.at("descendant").get<int>();
  } else if (op == "expand_a") {
    a.op = ParserAction::Op::ExpandArgument;
    a.root = j.at("root").get<int>();
    a.descendant = j.at("descendant").get<int>();
  } else if (op == "stop") {
    a.op = ParserAction::Op::Stop;
  } else {
    throw std::invalid_argument("unknown action op: " + op);
  }
  return a;
}

std::string action_to_json(const ParserAction& a) {
  return action_json_obj(a).dump();
}

ParserAction action_from_json(const std::string& json_text) {
  return action_from_obj(nlohmann::json::parse(json_text));
}

std::string actions_to_json(const std::vector<ParserAction>& actions) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : actions) arr.push_back(action_json_obj(a));
  nlohmann::json j;
  j["actions"] = arr;
  return j.dump();
}

std::vector<ParserAction> actions_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  std::vector<ParserAction> out;
  for (const auto& aj : j.at("actions")) out.push_back(action_from_obj(aj));
  return out;
}

GenState init_state(int n_words) {
  if (n_words < 1)
    throw std::invalid_argument("a sentence contains at least one word");
  GenState s;
  s.n_words = n_words;
  for (int i = 0; i < n_words; ++i) {
    Vertex v;
    v.origin.word = i;
    s.net.add_vertex(v);
  }
  return s;
}

namespace {

struct StateView {
  NetIndex idx;
  std::vector<VertexId> comp_roots;          // one per component
  std::unordered_map<VertexId, int> min_word;  // root -> leftmost word
  std::set<VertexId> lambda_vertices;        // par arrow conclusions
  std::set<VertexId> left_premises;          // functor slots of tensors

  explicit StateView(const GenState& s) : idx(s.net) {
    for (const auto& comp : idx.components()) {
      VertexId root = kNoVertex;
      int mw = INT_MAX;
      for (VertexId v : comp) {
        if (idx.is_root(v)) {
          if (root != kNoVertex)
            throw std::logic_error("component with two roots");
          root = v;
        }
        const Vertex& vx = s.net.vertex(v);
        if (vx.origin.word) mw = std::min(mw, *vx.origin.word);
      }
      if (root == kNoVertex) throw std::logic_error("component without root");
      comp_roots.push_back(root);
      min_word[root] = mw;
    }
    std::sort(comp_roots.begin(), comp_roots.end(),
              [&](VertexId a, VertexId b) { return min_word[a] < min_word[b]; });
    for (const Link& l : s.net.links()) {
      if (l.is_par())
        lambda_vertices.insert(l.arrow);
      else
        left_premises.insert(l.left);
    }
  }
};

}  // namespace

std::vector<ParserAction> legal_actions(const GenState& s) {
  std::vector<ParserAction> out;
  if (s.stopped) return out;
  StateView view(s);

  if (view.comp_roots.size() == 1) {
    ParserAction stop;
    stop.op = ParserAction::Op::Stop;
    out.push_back(stop);
  }

  // Compositions: ordered root pairs. An abstraction as functor would put
  // a lambda on the left branch of the new application, i.e. a beta redex,
  // so those pairs are excluded.
  for (VertexId f : view.comp_roots) {
    if (view.lambda_vertices.count(f)) continue;
    for (VertexId a : view.comp_roots) {
      if (a == f) continue;
      ParserAction act;
      act.op = ParserAction::Op::Compose;
      act.functor = f;
      act.argument = a;
      out.push_back(act);
    }
  }

  // Expansions: roots are component roots plus previously introduced
  // variables. A root sitting on the left branch of an application link is
  // excluded (the new abstraction would land in functor position), and an
  // abstraction cannot become the functor of the inserted application.
  std::vector<VertexId> exp_roots = view.comp_roots;
  for (VertexId v : s.variables)
    if (s.net.has_vertex(v)) exp_roots.push_back(v);
  std::sort(exp_roots.begin(), exp_roots.end());
  exp_roots.erase(std::unique(exp_roots.begin(), exp_roots.end()),
                  exp_roots.end());
  for (VertexId r : exp_roots) {
    if (view.left_premises.count(r)) continue;
    for (VertexId d : view.idx.subtree(r)) {
      ParserAction f;
      f.op = ParserAction::Op::ExpandFunctor;
      f.root = r;
      f.descendant = d;
      out.push_back(f);
      if (!view.lambda_vertices.count(d)) {
        ParserAction a;
        a.op = ParserAction::Op::ExpandArgument;
        a.root = r;
        a.descendant = d;
        out.push_back(a);
      }
    }
  }
  return out;
}

GenState apply_action(const GenState& s, const ParserAction& a) {
  auto legal = legal_actions(s);
  if (std::find(legal.begin(), legal.end(), a) == legal.end())
    throw std::invalid_argument("illegal action: " + a.str());
  GenState next = s;
  switch (a.op) {
    case ParserAction::Op::Stop:
      next.stopped = true;
      return next;
    case ParserAction::Op::Compose: {
      VertexId c = next.net.fresh_vertex();
      Link l;
      l.kind = LinkKind::Tensor;
      l.tag = Tag::App;
      l.left = a.functor;
      l.right = a.argument;
      l.conclusion = c;
      next.net.add_link(l);
      return next;
    }
    case ParserAction::Op::ExpandFunctor:
    case ParserAction::Op::ExpandArgument: {
      NetIndex idx(next.net);
      auto parent_of_r = idx.below(a.root);
      auto parent_of_d = idx.below(a.descendant);
      VertexId x = next.net.fresh_vertex();
      VertexId w = next.net.fresh_vertex();
      VertexId v = next.net.fresh_vertex();
      next.variables.push_back(x);

      if (a.descendant != a.root) {
        // w takes the descendant's place in its parent; the abstraction
        // wraps the whole component, whose root is `root`.
        Link& parent = next.net.links()[*parent_of_d];
        for (VertexId* f : {&parent.left, &parent.right, &parent.premise})
          if (*f == a.descendant) *f = w;
      } else if (parent_of_r) {
        // Expansion at an introduced variable: the abstraction slots into
        // the variable's old position.
        Link& parent = next.net.links()[*parent_of_r];
        for (VertexId* f : {&parent.left, &parent.right, &parent.premise})
          if (*f == a.root) *f = v;
      }

      Link t;
      t.kind = LinkKind::Tensor;
      t.tag = Tag::App;
      if (a.op == ParserAction::Op::ExpandFunctor) {
        t.left = x;
        t.right = a.descendant;
      } else {
        t.left = a.descendant;
        t.right = x;
      }
      t.conclusion = w;
      next.net.add_link(t);

      Link p;
      p.kind = LinkKind::Par;
      p.tag = Tag::Lambda;
      p.premise = a.descendant == a.root ? w : a.root;
      p.arrow = v;
      p.withdrawn = x;
      next.net.add_link(p);
      return next;
    }
  }
  throw std::logic_error("unreachable");
}

int expansion_action_count(const GenState& s, VertexId member) {
  NetIndex idx(s.net);
  int comp = idx.component_of(member);
  int count = 0;
  for (const ParserAction& a : legal_actions(s)) {
    if (a.op != ParserAction::Op::ExpandFunctor &&
        a.op != ParserAction::Op::ExpandArgument)
      continue;
    if (idx.component_of(a.root) == comp) ++count;
  }
  long n = static_cast<long>(idx.components()[static_cast<std::size_t>(comp)].size());
  if (count > expansion_bound_limit(n))
    throw std::logic_error("expansion count exceeds the stated bound");
  return count;
}

long expansion_bound_limit(long n) { return 2 * (n * n + n - 1); }

std::vector<ProofNet> component_nets(const GenState& s) {
  NetIndex idx(s.net);
  std::vector<ProofNet> out;
  for (const auto& comp : idx.components()) {
    ProofNet sub;
    std::set<VertexId> keep(comp.begin(), comp.end());
    for (const Vertex& v : s.net.vertices())
      if (keep.count(v.id)) sub.add_vertex(v);
    for (const Link& l : s.net.links()) {
      VertexId anchor = l.is_tensor() ? l.conclusion : l.arrow;
      if (keep.count(anchor)) sub.add_link(l);
    }
    out.push_back(std::move(sub));
  }
  return out;
}

std::vector<double> RandomScorer::score(const GenState&,
                                        const std::vector<ParserAction>& actions) {
  std::vector<double> out;
  out.reserve(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    // xorshift64
    state_ ^= state_ << 13;
    state_ ^= state_ >> 7;
    state_ ^= state_ << 17;
    out.push_back(static_cast<double>(state_ % 1000000) / 999999.0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

struct GoldPair {
  std::size_t par = 0;
  std::size_t tensor = 0;
  VertexId var = kNoVertex;
  bool functor_kind = false;  // variable on the left premise
  VertexId nonvar_premise = kNoVertex;
  VertexId tensor_conclusion = kNoVertex;
  VertexId par_premise = kNoVertex;
  VertexId par_arrow = kNoVertex;
};

struct GoldInfo {
  ProofNet net;
  int n_words = 0;
  std::vector<GoldPair> pairs;
  std::vector<std::size_t> compose_links;
  std::unordered_map<VertexId, std::size_t> pair_by_nonvar;  // tensor bridges
  std::unordered_map<int, VertexId> word_vertex;

  explicit GoldInfo(const ProofNet& gold);

 private:
  void set_pairing(const std::vector<GoldPair>& assignment);
};

// Gold vertices a state vertex can stand for right now: its image plus
// everything below it across bridges of *unused* expansion tensors.
std::vector<VertexId> reach_down(const GoldInfo& gold,
                                 const std::set<std::size_t>& used,
                                 VertexId gold_v) {
  std::vector<VertexId> out{gold_v};
  VertexId cur = gold_v;
  while (true) {
    auto it = gold.pair_by_nonvar.find(cur);
    if (it == gold.pair_by_nonvar.end()) break;
    const GoldPair& gp = gold.pairs[it->second];
    if (used.count(gp.tensor)) break;
    cur = gp.tensor_conclusion;
    out.push_back(cur);
  }
  return out;
}

struct Consistency {
  std::vector<std::size_t> links;  // gold links realized by the action
  // gold images of the vertices the action creates, allocation order
  std::vector<VertexId> created;
};

// Weight-1 test for a legal action of a tracked state. `phi` looks a state
// vertex up in gold coordinates.
template <typename Phi>
std::optional<Consistency> action_consistent(const GoldInfo& gold,
                                             const std::set<std::size_t>& used,
                                             const Phi& phi,
                                             const ParserAction& a) {
  switch (a.op) {
    case ParserAction::Op::Stop: {
      if (used.size() != gold.net.links().size()) return std::nullopt;
      return Consistency{};
    }
    case ParserAction::Op::Compose: {
      auto f = phi(a.functor);
      auto g = phi(a.argument);
      if (!f || !g) return std::nullopt;
      auto fr = reach_down(gold, used, *f);
      auto ar = reach_down(gold, used, *g);
      for (std::size_t li : gold.compose_links) {
        if (used.count(li)) continue;
        const Link& l = gold.net.links()[li];
        bool fok = std::find(fr.begin(), fr.end(), l.left) != fr.end();
        bool aok = std::find(ar.begin(), ar.end(), l.right) != ar.end();
        if (fok && aok) return Consistency{{li}, {l.conclusion}};
      }
      return std::nullopt;
    }
    case ParserAction::Op::ExpandFunctor:
    case ParserAction::Op::ExpandArgument: {
      bool want_functor = a.op == ParserAction::Op::ExpandFunctor;
      auto d = phi(a.descendant);
      auto r = phi(a.root);
      if (!d || !r) return std::nullopt;
      // The descendant stands for the pair tensor's non-variable premise
      // across unused tensor bridges (later expansions may have rewritten
      // that slot); candidates are scanned shallowest first, which matches
      // creation order when several pairs share a chain. The abstraction
      // site is the pair par's premise, which the root stands for the same
      // way; when root and descendant coincide the chain runs through the
      // pair's own tensor.
      auto dr = reach_down(gold, used, *d);
      auto rr = reach_down(gold, used, *r);
      for (VertexId nv : dr) {
        auto it = gold.pair_by_nonvar.find(nv);
        if (it == gold.pair_by_nonvar.end()) continue;
        const GoldPair& gp = gold.pairs[it->second];
        if (used.count(gp.tensor)) continue;
        if (gp.functor_kind != want_functor) continue;
        if (std::find(rr.begin(), rr.end(), gp.par_premise) == rr.end())
          continue;
        // apply_action allocates x, w, v in that order
        return Consistency{{gp.tensor, gp.par},
                           {gp.var, gp.tensor_conclusion, gp.par_arrow}};
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// Greedy gold-consistent run from the initial state, tracking the
// embedding in raw state ids. Returns the action sequence iff it reaches
// gold; used both to linearize and to validate a candidate pairing.
std::optional<std::vector<ParserAction>> linearize(const GoldInfo& gold);

void GoldInfo::set_pairing(const std::vector<GoldPair>& assignment) {
  pairs = assignment;
  pair_by_nonvar.clear();
  compose_links.clear();
  std::set<std::size_t> pair_links;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    pair_by_nonvar[pairs[i].nonvar_premise] = i;
    pair_links.insert(pairs[i].par);
    pair_links.insert(pairs[i].tensor);
  }
  for (std::size_t i = 0; i < net.links().size(); ++i)
    if (net.links()[i].is_tensor() && !pair_links.count(i))
      compose_links.push_back(i);
}

GoldInfo::GoldInfo(const ProofNet& gold) : net(to_semantic(gold)) {
  for (const Vertex& v : net.vertices()) {
    if (v.origin.word) {
      if (word_vertex.count(*v.origin.word))
        throw std::invalid_argument("gold net: duplicate word origin");
      word_vertex[*v.origin.word] = v.id;
      n_words = std::max(n_words, *v.origin.word + 1);
    }
  }
  if (static_cast<int>(word_vertex.size()) != n_words || n_words == 0)
    throw std::invalid_argument("gold net: word origins must be 0..n-1");

  // Each par was created together with one tensor, but later expansions
  // may have rewritten that tensor's variable slot, so the creation
  // pairing is not recoverable by inspection alone. Enumerate candidate
  // par-to-(tensor, side) assignments and keep the first one under which
  // a greedy replay rebuilds the net. Candidates are ordered so the
  // common pairing (the tensor currently holding the withdrawn vertex) is
  // tried first.
  std::vector<std::size_t> par_links;
  std::vector<std::size_t> tensor_links;
  for (std::size_t i = 0; i < net.links().size(); ++i) {
    if (net.links()[i].is_par())
      par_links.push_back(i);
    else
      tensor_links.push_back(i);
  }
  NetIndex idx(net);
  auto make_pair = [&](std::size_t par, std::size_t tensor,
                       bool var_left) -> GoldPair {
    const Link& P = net.links()[par];
    const Link& T = net.links()[tensor];
    GoldPair gp;
    gp.par = par;
    gp.tensor = tensor;
    gp.var = P.withdrawn;
    gp.functor_kind = var_left;
    gp.nonvar_premise = var_left ? T.right : T.left;
    gp.tensor_conclusion = T.conclusion;
    gp.par_premise = P.premise;
    gp.par_arrow = P.arrow;
    return gp;
  };
  // A variable slot can only hold the variable itself, another par's
  // arrow, or another pair tensor's conclusion.
  auto plausible_slot = [&](VertexId z) {
    if (net.vertex(z).origin.word || net.vertex(z).origin.goal) return false;
    return true;
  };
  std::vector<GoldPair> acc;
  std::set<std::size_t> taken;
  std::function<bool(std::size_t)> assign = [&](std::size_t i) -> bool {
    if (i == par_links.size()) {
      set_pairing(acc);
      return linearize(*this).has_value();
    }
    std::size_t par = par_links[i];
    const Link& P = net.links()[par];
    // candidate order: the tensor holding the withdrawn vertex first
    std::vector<std::pair<std::size_t, bool>> cands;
    auto below = idx.below(P.withdrawn);
    if (below && net.links()[*below].is_tensor()) {
      const Link& T = net.links()[*below];
      if (T.left == P.withdrawn) cands.emplace_back(*below, true);
      if (T.right == P.withdrawn) cands.emplace_back(*below, false);
    }
    for (std::size_t t : tensor_links) {
      const Link& T = net.links()[t];
      if (T.left != P.withdrawn && plausible_slot(T.left))
        cands.emplace_back(t, true);
      if (T.right != P.withdrawn && plausible_slot(T.right))
        cands.emplace_back(t, false);
    }
    for (auto [t, var_left] : cands) {
      if (taken.count(t)) continue;
      taken.insert(t);
      acc.push_back(make_pair(par, t, var_left));
      if (assign(i + 1)) return true;
      acc.pop_back();
      taken.erase(t);
    }
    return false;
  };
  if (!assign(0))
    throw std::invalid_argument(
        "gold net is not reachable by the generation rules");
}

std::optional<std::vector<ParserAction>> linearize(const GoldInfo& gold) {
  GenState s = init_state(gold.n_words);
  std::unordered_map<VertexId, VertexId> phi;
  for (int i = 0; i < gold.n_words; ++i) phi[i] = gold.word_vertex.at(i);
  std::set<std::size_t> used;
  auto lookup = [&](VertexId v) -> std::optional<VertexId> {
    auto it = phi.find(v);
    if (it == phi.end()) return std::nullopt;
    return it->second;
  };
  std::vector<ParserAction> out;
  while (!s.stopped) {
    bool progressed = false;
    for (const ParserAction& a : legal_actions(s)) {
      auto cons = action_consistent(gold, used, lookup, a);
      if (!cons) continue;
      VertexId first_created = s.net.max_id() + 1;
      s = apply_action(s, a);
      for (std::size_t li : cons->links) used.insert(li);
      for (std::size_t c = 0; c < cons->created.size(); ++c)
        phi[first_created + static_cast<VertexId>(c)] = cons->created[c];
      out.push_back(a);
      progressed = true;
      break;
    }
    if (!progressed) return std::nullopt;
  }
  if (canonical_key(s.net, gen_canon_options()) !=
      canonical_key(gold.net, gen_canon_options()))
    return std::nullopt;
  return out;
}

// Progress of one on-course state: which gold links are realized and where
// each state vertex lands in gold. The embedding is stored in canonical
// coordinates so isomorphic states built along different action orders
// share one tracker. Word origins make state automorphisms trivial, so the
// canonical numbering is a well-defined bijection between such states.
struct Tracker {
  std::unordered_map<VertexId, VertexId> phi;  // canonical id -> gold vertex
  std::set<std::size_t> used_links;            // gold link indices realized
};

}  // namespace

struct OracleScorer::Impl {
  GoldInfo gold;
  std::unordered_map<std::string, Tracker> tracked;

  explicit Impl(const ProofNet& g) : gold(g) {
    GenState init = init_state(gold.n_words);
    Tracker t;
    auto num = canonical_numbering(init.net, gen_canon_options());
    for (int i = 0; i < gold.n_words; ++i)
      t.phi[num.at(i)] = gold.word_vertex.at(i);
    tracked[canonical_key(init.net, gen_canon_options())] = t;
  }
};

OracleScorer::OracleScorer(const ProofNet& gold)
    : impl_(std::make_unique<Impl>(gold)) {}

OracleScorer::~OracleScorer() = default;

int OracleScorer::gold_words() const { return impl_->gold.n_words; }

std::vector<double> OracleScorer::score(const GenState& s,
                                        const std::vector<ParserAction>& actions) {
  std::vector<double> out(actions.size(), 0.0);
  auto it = impl_->tracked.find(canonical_key(s.net, gen_canon_options()));
  if (it == impl_->tracked.end()) return out;
  Tracker base = it->second;  // the map may rehash as successors are added
  auto num_s = canonical_numbering(s.net, gen_canon_options());
  auto phi_raw = [&](VertexId v) -> std::optional<VertexId> {
    auto n = num_s.find(v);
    if (n == num_s.end()) return std::nullopt;
    auto p = base.phi.find(n->second);
    if (p == base.phi.end()) return std::nullopt;
    return p->second;
  };
  for (std::size_t i = 0; i < actions.size(); ++i) {
    auto cons =
        action_consistent(impl_->gold, base.used_links, phi_raw, actions[i]);
    if (!cons) continue;
    out[i] = 1.0;
    if (actions[i].op == ParserAction::Op::Stop) continue;
    GenState after = apply_action(s, actions[i]);
    std::string key = canonical_key(after.net, gen_canon_options());
    if (impl_->tracked.count(key)) continue;
    auto num_a = canonical_numbering(after.net, gen_canon_options());
    Tracker next;
    next.used_links = base.used_links;
    for (std::size_t li : cons->links) next.used_links.insert(li);
    for (const Vertex& v : s.net.vertices())
      if (auto img = phi_raw(v.id)) next.phi[num_a.at(v.id)] = *img;
    VertexId first_created = s.net.max_id() + 1;
    for (std::size_t c = 0; c < cons->created.size(); ++c)
      next.phi[num_a.at(first_created + static_cast<VertexId>(c))] =
          cons->created[c];
    impl_->tracked.emplace(std::move(key), std::move(next));
  }
  return out;
}

std::vector<ActionScore> oracle_score(const GenState& s, const ProofNet& gold) {
  // Walk the gold-consistent state space up to (and including) states with
  // the same shape as `s`, then score.
  OracleScorer scorer(gold);
  auto target = canonical_key(s.net, gen_canon_options());
  std::set<std::string> seen;
  std::deque<GenState> queue;
  queue.push_back(init_state(scorer.gold_words()));
  seen.insert(canonical_key(queue.front().net, gen_canon_options()));
  while (!queue.empty()) {
    GenState cur = std::move(queue.front());
    queue.pop_front();
    auto acts = legal_actions(cur);
    auto weights = scorer.score(cur, acts);
    if (canonical_key(cur.net, gen_canon_options()) == target) break;
    for (std::size_t i = 0; i < acts.size(); ++i) {
      if (weights[i] != 1.0 || acts[i].op == ParserAction::Op::Stop) continue;
      GenState next = apply_action(cur, acts[i]);
      auto key = canonical_key(next.net, gen_canon_options());
      if (seen.insert(key).second) queue.push_back(next);
    }
  }
  auto acts = legal_actions(s);
  auto weights = scorer.score(s, acts);
  std::vector<ActionScore> out;
  for (std::size_t i = 0; i < acts.size(); ++i)
    out.push_back({acts[i], weights[i]});
  return out;
}

// ---------------------------------------------------------------------------
// Canonical sequence and replay

namespace {

// Deterministic preference order used to linearize gold-consistent action
// sets: compositions (leftmost word first) before expansions, stop last.
int action_rank(const ParserAction& a) {
  switch (a.op) {
    case ParserAction::Op::Compose: return 0;
    case ParserAction::Op::ExpandFunctor: return 1;
    case ParserAction::Op::ExpandArgument: return 2;
    case ParserAction::Op::Stop: return 3;
  }
  return 4;
}

int leftmost_word(const GenState& s, VertexId member) {
  NetIndex idx(s.net);
  int best = INT_MAX;
  for (VertexId v : idx.components()[static_cast<std::size_t>(
           idx.component_of(member))]) {
    const Vertex& vx = s.net.vertex(v);
    if (vx.origin.word) best = std::min(best, *vx.origin.word);
  }
  return best;
}

bool action_less(const GenState& s, const ParserAction& a,
                 const ParserAction& b) {
  if (action_rank(a) != action_rank(b)) return action_rank(a) < action_rank(b);
  if (a.op == ParserAction::Op::Compose) {
    auto ka = std::tuple(leftmost_word(s, a.functor),
                         leftmost_word(s, a.argument), a.functor, a.argument);
    auto kb = std::tuple(leftmost_word(s, b.functor),
                         leftmost_word(s, b.argument), b.functor, b.argument);
    return ka < kb;
  }
  if (a.op != ParserAction::Op::Stop) {
    auto ka = std::tuple(leftmost_word(s, a.root), a.root, a.descendant);
    auto kb = std::tuple(leftmost_word(s, b.root), b.root, b.descendant);
    return ka < kb;
  }
  return false;
}

}  // namespace

std::vector<ParserAction> canonical_sequence(const ProofNet& gold) {
  GoldInfo info(gold);
  GenState s = init_state(info.n_words);
  std::unordered_map<VertexId, VertexId> phi;
  for (int i = 0; i < info.n_words; ++i) phi[i] = info.word_vertex.at(i);
  std::set<std::size_t> used;
  auto lookup = [&](VertexId v) -> std::optional<VertexId> {
    auto it = phi.find(v);
    if (it == phi.end()) return std::nullopt;
    return it->second;
  };
  std::vector<ParserAction> out;
  while (!s.stopped) {
    std::optional<ParserAction> pick;
    std::optional<Consistency> pick_cons;
    for (const ParserAction& a : legal_actions(s)) {
      auto cons = action_consistent(info, used, lookup, a);
      if (!cons) continue;
      if (!pick || action_less(s, a, *pick)) {
        pick = a;
        pick_cons = cons;
      }
    }
    if (!pick)
      throw std::invalid_argument(
          "gold net is not reachable by the generation rules");
    VertexId first_created = s.net.max_id() + 1;
    s = apply_action(s, *pick);
    for (std::size_t li : pick_cons->links) used.insert(li);
    for (std::size_t c = 0; c < pick_cons->created.size(); ++c)
      phi[first_created + static_cast<VertexId>(c)] = pick_cons->created[c];
    out.push_back(*pick);
  }
  return out;
}

GenState replay(int n_words, const std::vector<ParserAction>& actions) {
  GenState s = init_state(n_words);
  for (const ParserAction& a : actions) s = apply_action(s, a);
  return s;
}

// ---------------------------------------------------------------------------
// Beam search

std::vector<BeamResult> beam_search(int n_words, Scorer& scorer,
                                    const BeamOptions& opts) {
  if (opts.k < 1) throw std::invalid_argument("beam width must be >= 1");
  int max_exp = opts.max_expansions >= 0 ? opts.max_expansions : n_words;

  struct Live {
    GenState state;
    double score = 1.0;
    int expansions = 0;
    std::vector<ParserAction> actions;
    std::vector<double> weights;
  };
  std::vector<Live> frontier{{init_state(n_words), 1.0, 0, {}, {}}};
  std::map<std::string, BeamResult> finished;
  int steps = 0;

  auto finish = [&](Live&& l) {
    l.state.stopped = true;
    std::string key = canonical_key(l.state.net, gen_canon_options());
    auto it = finished.find(key);
    if (it == finished.end() || it->second.score < l.score)
      finished[key] = BeamResult{std::move(l.state), l.score,
                                 std::move(l.actions), std::move(l.weights)};
  };

  while (!frontier.empty() && steps++ < opts.max_steps) {
    std::vector<Live> candidates;
    for (Live& live : frontier) {
      auto acts = legal_actions(live.state);
      auto weights = scorer.score(live.state, acts);
      if (weights.size() != acts.size())
        throw ScorerError("scorer returned wrong number of weights", "");
      bool any_above = false;
      for (std::size_t i = 0; i < acts.size(); ++i) {
        double w = weights[i];
        if (w < 0.0 || w > 1.0)
          throw ScorerError("scorer weight out of [0,1]", std::to_string(w));
        if (w <= opts.threshold) continue;
        any_above = true;
        bool is_exp = acts[i].op == ParserAction::Op::ExpandFunctor ||
                      acts[i].op == ParserAction::Op::ExpandArgument;
        if (is_exp && live.expansions >= max_exp) continue;
        Live next;
        next.state = apply_action(live.state, acts[i]);
        next.score = live.score * w;
        next.expansions = live.expansions + (is_exp ? 1 : 0);
        next.actions = live.actions;
        next.actions.push_back(acts[i]);
        next.weights = live.weights;
        next.weights.push_back(w);
        if (acts[i].op == ParserAction::Op::Stop)
          finish(std::move(next));
        else
          candidates.push_back(std::move(next));
      }
      if (!any_above) {
        // Nothing promising: a connected graph stops where it is.
        NetIndex idx(live.state.net);
        if (idx.components().size() == 1) finish(std::move(live));
      }
    }
    // Deduplicate by canonical shape, keep the k best.
    std::map<std::string, std::size_t> best_by_key;
    std::vector<Live> dedup;
    for (Live& c : candidates) {
      std::string key = canonical_key(c.state.net, gen_canon_options());
      auto it = best_by_key.find(key);
      if (it == best_by_key.end()) {
        best_by_key[key] = dedup.size();
        dedup.push_back(std::move(c));
      } else if (dedup[it->second].score < c.score) {
        dedup[it->second] = std::move(c);
      }
    }
    std::sort(dedup.begin(), dedup.end(), [](const Live& a, const Live& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.actions.size() < b.actions.size();
    });
    if (static_cast<int>(dedup.size()) > opts.k)
      dedup.resize(static_cast<std::size_t>(opts.k));
    frontier = std::move(dedup);
  }

  std::vector<BeamResult> out;
  for (auto& [key, r] : finished) out.push_back(std::move(r));
  std::sort(out.begin(), out.end(),
            [](const BeamResult& a, const BeamResult& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.actions.size() < b.actions.size();
            });
  if (static_cast<int>(out.size()) > opts.k)
    out.resize(static_cast<std::size_t>(opts.k));
  return out;
}

std::map<std::string, ProofNet> forward_enumerate(int n_words,
                                                  int max_expansions) {
  std::map<std::string, ProofNet> out;
  std::set<std::string> visited;
  std::function<void(const GenState&, int)> dfs = [&](const GenState& s,
                                                      int expansions) {
    std::string key =
        canonical_key(s.net, gen_canon_options()) + "#" +
        std::to_string(expansions);
    if (!visited.insert(key).second) return;
    for (const ParserAction& a : legal_actions(s)) {
      if (a.op == ParserAction::Op::Stop) {
        out.emplace(canonical_key(s.net, gen_canon_options()), s.net);
        continue;
      }
      bool is_exp = a.op != ParserAction::Op::Compose;
      if (is_exp && expansions >= max_expansions) continue;
      dfs(apply_action(s, a), expansions + (is_exp ? 1 : 0));
    }
  };
  dfs(init_state(n_words), 0);
  return out;
}

std::vector<std::string> canonical_action_strings(
    const GenState& final_state, const std::vector<ParserAction>& actions) {
  auto num = canonical_numbering(final_state.net, gen_canon_options());
  std::vector<std::string> out;
  for (const ParserAction& a : actions) {
    ParserAction c = a;
    for (VertexId* f : {&c.functor, &c.argument, &c.root, &c.descendant})
      if (*f != kNoVertex) *f = num.at(*f);
    out.push_back(c.str());
  }
  return out;
}

FScore action_fscore(const std::vector<std::string>& predicted,
                     const std::vector<std::string>& gold) {
  std::set<std::string> p(predicted.begin(), predicted.end());
  std::set<std::string> g(gold.begin(), gold.end());
  if (p.empty() && g.empty()) return {1.0, 1.0, 1.0};
  std::size_t inter = 0;
  for (const auto& s : p)
    if (g.count(s)) ++inter;
  FScore f;
  f.precision = p.empty() ? 0.0 : static_cast<double>(inter) / p.size();
  f.recall = g.empty() ? 0.0 : static_cast<double>(inter) / g.size();
  f.f1 = (f.precision + f.recall) == 0.0
             ? 0.0
             : 2 * f.precision * f.recall / (f.precision + f.recall);
  return f;
}

}  // namespace tlg
