#ifndef TLG_TERM_HPP
#define TLG_TERM_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tlg/net.hpp"

namespace tlg {

// Linear lambda terms: every variable, free or bound, occurs exactly once;
// no closed subterms; beta-normal.
class LambdaTerm {
 public:
  static LambdaTerm var(std::string name);
  static LambdaTerm app(LambdaTerm fun, LambdaTerm arg);
  static LambdaTerm abs(std::string var, LambdaTerm body);

  enum class Kind { Var, App, Abs };
  Kind kind() const { return node_->kind; }

  const std::string& name() const { return node_->name; }  // Var and Abs
  LambdaTerm fun() const { return LambdaTerm(node_->a); }
  LambdaTerm arg() const { return LambdaTerm(node_->b); }
  LambdaTerm body() const { return LambdaTerm(node_->a); }

  std::size_t size() const;

  std::vector<std::string> free_vars() const;  // in occurrence order

  bool is_linear() const;
  bool has_closed_subterm() const;
  bool is_beta_normal() const;

  // Alpha-equivalence (free variables compared by name).
  bool alpha_equal(const LambdaTerm& other) const;

  // Application left-to-right with every inner application parenthesised;
  // abstraction printed as \x.body.
  std::string str() const;

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::shared_ptr<const Node> a, b;
  };
  explicit LambdaTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

LambdaTerm parse_term(const std::string& text);

// Retags a directional net as its linear-logic counterpart: premises of
// backslash tensors swap so the functor always sits left, tensors become
// applications, pars become abstractions, modes are erased. Idempotent.
// Vertex ids are preserved.
ProofNet to_semantic(const ProofNet& net);

// Reads the term at the root of a semantic proof net. `vars` names the
// word vertices (defaults to x1..xn by word position); abstraction
// variables take names from `abs_vars` in traversal order, then fall back
// to y1, y2, ...
LambdaTerm extract_term(const ProofNet& net,
                        const std::vector<std::string>& vars = {},
                        const std::vector<std::string>& abs_vars = {});

// Builds the unique semantic proof net whose extracted term is `t`.
// Free variables named x<k> become word k-1; otherwise words are assigned
// in order of occurrence, or per `var_order` when given.
ProofNet term_to_net(const LambdaTerm& t,
                     const std::vector<std::string>& var_order = {});

}  // namespace tlg

#endif
