#include "tlg/label.hpp"

#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "tlg/term.hpp"

namespace tlg {

TypeExpr TypeExpr::var(VertexId slot) {
  auto n = std::make_shared<Node>();
  n->var = slot;
  return TypeExpr(std::move(n));
}

TypeExpr TypeExpr::arrow(TypeExpr arg, TypeExpr result, VertexId conn_slot) {
  auto n = std::make_shared<Node>();
  n->conn = conn_slot;
  n->a = arg.node_;
  n->b = result.node_;
  return TypeExpr(std::move(n));
}

std::string TypeExpr::str(const std::map<VertexId, std::string>& letters) const {
  if (is_var()) {
    auto it = letters.find(var_slot());
    return it != letters.end() ? it->second : "?" + std::to_string(var_slot());
  }
  std::string a = arg().str(letters);
  if (!arg().is_var()) a = "(" + a + ")";
  return a + " -o " + result().str(letters);
}

namespace {

// Vertices a functor arrow points at: tensor functors and par arrows.
std::set<VertexId> arrow_targets(const ProofNet& net) {
  std::set<VertexId> out;
  for (const Link& l : net.links()) {
    if (l.is_tensor())
      out.insert(l.left);
    else
      out.insert(l.arrow);
  }
  return out;
}

std::string letter_name(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('A' + i));
  return "T" + std::to_string(i - 25);
}

}  // namespace

TypeVarTyping principal_typing(const ProofNet& net) {
  NetIndex idx(net);
  auto targets = arrow_targets(net);
  for (const Link& l : net.links())
    if (l.is_tensor() && l.tag != Tag::App)
      throw std::invalid_argument("principal typing expects a semantic net");

  std::map<VertexId, TypeExpr> memo;
  std::set<VertexId> in_progress;
  std::function<TypeExpr(VertexId)> type_of = [&](VertexId v) -> TypeExpr {
    auto it = memo.find(v);
    if (it != memo.end()) return it->second;
    if (!in_progress.insert(v).second)
      throw std::invalid_argument("cyclic structure; not a proof net");
    TypeExpr t = TypeExpr::var(v);
    if (targets.count(v)) {
      // v is the main formula of its link: arg -o result.
      bool found = false;
      for (const Link& l : net.links()) {
        if (l.is_tensor() && l.left == v) {
          t = TypeExpr::arrow(type_of(l.right), type_of(l.conclusion),
                              l.conclusion);
          found = true;
          break;
        }
        if (l.is_par() && l.arrow == v) {
          t = TypeExpr::arrow(type_of(l.withdrawn), type_of(l.premise), v);
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("arrow target without link");
    }
    in_progress.erase(v);
    memo.emplace(v, t);
    return t;
  };

  TypeVarTyping out{.word_types = {}, .goal_type = TypeExpr::var(kNoVertex),
                    .letters = {}};
  int max_word = -1;
  for (const Vertex& v : net.vertices())
    if (v.origin.word) max_word = std::max(max_word, *v.origin.word);
  std::vector<VertexId> word_vertex(static_cast<std::size_t>(max_word + 1),
                                    kNoVertex);
  for (const Vertex& v : net.vertices())
    if (v.origin.word) word_vertex[static_cast<std::size_t>(*v.origin.word)] = v.id;
  for (VertexId wv : word_vertex) {
    if (wv == kNoVertex)
      throw std::invalid_argument("net is missing a word vertex");
    out.word_types.push_back(type_of(wv));
  }
  auto roots = idx.roots();
  if (roots.size() != 1)
    throw std::invalid_argument("principal typing requires a unique root");
  out.goal_type = type_of(roots[0]);

  // Letters in order of first appearance across word types, then the goal.
  std::function<void(const TypeExpr&)> assign = [&](const TypeExpr& t) {
    if (t.is_var()) {
      if (!out.letters.count(t.var_slot()))
        out.letters[t.var_slot()] = letter_name(out.letters.size());
      return;
    }
    assign(t.arg());
    assign(t.result());
  };
  for (const TypeExpr& t : out.word_types) assign(t);
  assign(out.goal_type);
  return out;
}

LabelSlots label_slots(const ProofNet& net) {
  NetIndex idx(net);
  auto targets = arrow_targets(net);
  LabelSlots out;
  for (const Vertex& v : net.vertices()) {
    if (!targets.count(v.id)) out.atom_slots.push_back(v.id);
    if (!idx.is_leaf(v.id)) out.connective_slots.push_back(v.id);
  }
  return out;
}

namespace {

Formula build_formula(const TypeExpr& t, const Labelling& l,
                      const std::map<VertexId, std::string>& letters) {
  if (t.is_var()) {
    auto letter = letters.find(t.var_slot());
    if (letter == letters.end())
      throw std::invalid_argument("type variable without a letter");
    auto atom = l.atoms.find(letter->second);
    if (atom == l.atoms.end())
      throw std::invalid_argument("no atom label for type variable " +
                                  letter->second);
    return Formula::atom(atom->second);
  }
  Formula arg = build_formula(t.arg(), l, letters);
  Formula res = build_formula(t.result(), l, letters);
  auto conn = l.connectives.find(t.conn_slot());
  if (conn == l.connectives.end())
    throw std::invalid_argument("no connective label for slot vertex " +
                                std::to_string(t.conn_slot()));
  switch (conn->second.dir) {
    case Conn::Over:
      return Formula::over(res, conn->second.mode, arg);
    case Conn::Under:
      return Formula::under(arg, conn->second.mode, res);
    case Conn::Lolli:
      return Formula::lolli(arg, res);
  }
  throw std::logic_error("unreachable");
}

}  // namespace

Lexicon directionalize(const TypeVarTyping& typing, const Labelling& labelling,
                       const std::vector<std::string>& words) {
  std::vector<std::pair<std::string, Formula>> entries;
  for (std::size_t i = 0; i < typing.word_types.size(); ++i) {
    std::string w =
        i < words.size() ? words[i] : "w" + std::to_string(i + 1);
    entries.emplace_back(w,
                         build_formula(typing.word_types[i], labelling,
                                       typing.letters));
  }
  Formula goal = build_formula(typing.goal_type, labelling, typing.letters);
  return Lexicon(std::move(entries), std::move(goal));
}

Labelling gold_labels(const ProofNet& directional_net) {
  ProofNet sem = to_semantic(directional_net);
  TypeVarTyping typing = principal_typing(sem);
  Labelling out;
  for (const auto& [slot, letter] : typing.letters) {
    const Vertex& v = directional_net.vertex(slot);
    if (!v.atom)
      throw std::invalid_argument(
          "atom slot vertex carries no atom; unfold the net first");
    out.atoms[letter] = *v.atom;
  }
  // Connective labels sit at link outputs; ids survive to_semantic.
  for (const Link& l : directional_net.links()) {
    ConnectiveLabel cl;
    cl.mode = l.mode;
    VertexId slot;
    if (l.is_tensor()) {
      slot = l.conclusion;
      cl.dir = l.tag == Tag::Under ? Conn::Under
               : l.tag == Tag::App ? Conn::Lolli
                                   : Conn::Over;
    } else {
      slot = l.arrow;
      cl.dir = l.tag == Tag::Under ? Conn::Under
               : l.tag == Tag::Lambda ? Conn::Lolli
                                      : Conn::Over;
    }
    out.connectives[slot] = cl;
  }
  return out;
}

std::string labelling_to_json(const Labelling& l) {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::object();
  for (const auto& [letter, atom] : l.atoms) j["atoms"][letter] = atom;
  j["connectives"] = nlohmann::json::object();
  for (const auto& [slot, cl] : l.connectives) {
    nlohmann::json c;
    c["dir"] = cl.dir == Conn::Under ? "\\" : cl.dir == Conn::Over ? "/" : "-o";
    c["mode"] = cl.mode;
    j["connectives"][std::to_string(slot)] = c;
  }
  return j.dump();
}

Labelling labelling_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  Labelling out;
  if (j.contains("atoms"))
    for (auto it = j["atoms"].begin(); it != j["atoms"].end(); ++it)
      out.atoms[it.key()] = it.value().get<std::string>();
  if (j.contains("connectives")) {
    for (auto it = j["connectives"].begin(); it != j["connectives"].end(); ++it) {
      ConnectiveLabel cl;
      std::string dir = it.value().at("dir").get<std::string>();
      cl.dir = dir == "\\" ? Conn::Under : dir == "/" ? Conn::Over : Conn::Lolli;
      cl.mode = it.value().value("mode", 0);
      out.connectives[std::stoi(it.key())] = cl;
    }
  }
  return out;
}

std::string typing_to_json(const TypeVarTyping& t) {
  nlohmann::json j;
  j["words"] = nlohmann::json::array();
  for (std::size_t i = 0; i < t.word_types.size(); ++i)
    j["words"].push_back(t.word_str(i));
  j["goal"] = t.goal_str();
  nlohmann::json vars = nlohmann::json::object();
  for (const auto& [slot, letter] : t.letters)
    vars[letter] = slot;
  j["variables"] = vars;
  return j.dump();
}

}  // namespace tlg
