#ifndef TLG_LABEL_HPP
#define TLG_LABEL_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tlg/formula.hpp"
#include "tlg/net.hpp"

namespace tlg {

// Linear type over type variables. Variables are identified with the atom
// slot vertices they decorate; arrows remember the connective slot vertex
// they cross so the typing can later be directionalized.
class TypeExpr {
 public:
  static TypeExpr var(VertexId slot);
  static TypeExpr arrow(TypeExpr arg, TypeExpr result, VertexId conn_slot);

  bool is_var() const { return node_->var != kNoVertex; }
  VertexId var_slot() const { return node_->var; }
  VertexId conn_slot() const { return node_->conn; }
  TypeExpr arg() const { return TypeExpr(node_->a); }
  TypeExpr result() const { return TypeExpr(node_->b); }

  // Rendered with single-letter variables per `letters`, right-associated
  // arrows written -o.
  std::string str(const std::map<VertexId, std::string>& letters) const;

 private:
  struct Node {
    VertexId var = kNoVertex;
    VertexId conn = kNoVertex;
    std::shared_ptr<const Node> a, b;
  };
  explicit TypeExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TypeVarTyping {
  std::vector<TypeExpr> word_types;            // by word index
  TypeExpr goal_type;
  std::map<VertexId, std::string> letters;     // atom slot vertex -> A, B, ...

  std::string word_str(std::size_t i) const { return word_types[i].str(letters); }
  std::string goal_str() const { return goal_type.str(letters); }
};

struct LabelSlots {
  std::vector<VertexId> atom_slots;        // no arriving functor arrow
  std::vector<VertexId> connective_slots;  // non-leaf vertices
};

struct ConnectiveLabel {
  Conn dir = Conn::Over;
  int mode = 0;
};

struct Labelling {
  std::map<std::string, std::string> atoms;       // type letter -> atom name
  std::map<VertexId, ConnectiveLabel> connectives;  // slot vertex -> label
};

// Most general typing of a semantic proof net: fresh variables at the
// vertices no functor arrow reaches, the functor of every application
// typed arg -o result, every abstraction typed withdrawn -o body.
TypeVarTyping principal_typing(const ProofNet& net);

LabelSlots label_slots(const ProofNet& net);

// Rebuilds a directional lexicon from a typing and a total labelling.
// `words` supplies surface forms (defaults to w1..wn).
Lexicon directionalize(const TypeVarTyping& typing, const Labelling& labelling,
                       const std::vector<std::string>& words = {});

// Reads the labels a perfect labeller must produce off a directional net.
Labelling gold_labels(const ProofNet& directional_net);

std::string labelling_to_json(const Labelling& l);
Labelling labelling_from_json(const std::string& json_text);

std::string typing_to_json(const TypeVarTyping& t);

}  // namespace tlg

#endif
