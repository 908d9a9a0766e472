#include "tlg/term.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tlg {

LambdaTerm LambdaTerm::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return LambdaTerm(std::move(n));
}

LambdaTerm LambdaTerm::app(LambdaTerm fun, LambdaTerm arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->a = fun.node_;
  n->b = arg.node_;
  return LambdaTerm(std::move(n));
}

LambdaTerm LambdaTerm::abs(std::string var, LambdaTerm body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Abs;
  n->name = std::move(var);
  n->a = body.node_;
  return LambdaTerm(std::move(n));
}

std::size_t LambdaTerm::size() const {
  switch (kind()) {
    case Kind::Var: return 1;
    case Kind::App: return 1 + fun().size() + arg().size();
    case Kind::Abs: return 1 + body().size();
  }
  return 0;
}

namespace {

void collect_vars(const LambdaTerm& t, std::vector<std::string>& bound_stack,
                  std::vector<std::string>& free_out) {
  switch (t.kind()) {
    case LambdaTerm::Kind::Var: {
      for (auto it = bound_stack.rbegin(); it != bound_stack.rend(); ++it)
        if (*it == t.name()) return;
      free_out.push_back(t.name());
      return;
    }
    case LambdaTerm::Kind::App:
      collect_vars(t.fun(), bound_stack, free_out);
      collect_vars(t.arg(), bound_stack, free_out);
      return;
    case LambdaTerm::Kind::Abs:
      bound_stack.push_back(t.name());
      collect_vars(t.body(), bound_stack, free_out);
      bound_stack.pop_back();
      return;
  }
}

// Counts occurrences of the outermost binding of `name` in a body.
int count_occurrences(const LambdaTerm& t, const std::string& name) {
  switch (t.kind()) {
    case LambdaTerm::Kind::Var:
      return t.name() == name ? 1 : 0;
    case LambdaTerm::Kind::App:
      return count_occurrences(t.fun(), name) + count_occurrences(t.arg(), name);
    case LambdaTerm::Kind::Abs:
      if (t.name() == name) return 0;  // shadowed
      return count_occurrences(t.body(), name);
  }
  return 0;
}

}  // namespace

std::vector<std::string> LambdaTerm::free_vars() const {
  std::vector<std::string> bound, free;
  collect_vars(*this, bound, free);
  return free;
}

bool LambdaTerm::is_linear() const {
  // Every bound variable occurs exactly once in its body, every free
  // variable exactly once overall.
  std::function<bool(const LambdaTerm&)> rec = [&](const LambdaTerm& t) {
    switch (t.kind()) {
      case Kind::Var:
        return true;
      case Kind::App:
        return rec(t.fun()) && rec(t.arg());
      case Kind::Abs:
        return count_occurrences(t.body(), t.name()) == 1 && rec(t.body());
    }
    return false;
  };
  if (!rec(*this)) return false;
  auto fv = free_vars();
  std::set<std::string> uniq(fv.begin(), fv.end());
  return uniq.size() == fv.size();
}

bool LambdaTerm::has_closed_subterm() const {
  bool found = false;
  std::function<void(const LambdaTerm&)> rec = [&](const LambdaTerm& t) {
    if (found) return;
    if (t.free_vars().empty()) {
      found = true;
      return;
    }
    switch (t.kind()) {
      case Kind::Var: return;
      case Kind::App:
        rec(t.fun());
        rec(t.arg());
        return;
      case Kind::Abs:
        rec(t.body());
        return;
    }
  };
  rec(*this);
  return found;
}

bool LambdaTerm::is_beta_normal() const {
  switch (kind()) {
    case Kind::Var:
      return true;
    case Kind::App:
      if (fun().kind() == Kind::Abs) return false;
      return fun().is_beta_normal() && arg().is_beta_normal();
    case Kind::Abs:
      return body().is_beta_normal();
  }
  return false;
}

namespace {

bool alpha_rec(const LambdaTerm& a, const LambdaTerm& b,
               std::vector<std::pair<std::string, std::string>>& env) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case LambdaTerm::Kind::Var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        bool la = it->first == a.name(), lb = it->second == b.name();
        if (la || lb) return la && lb;
      }
      return a.name() == b.name();
    }
    case LambdaTerm::Kind::App:
      return alpha_rec(a.fun(), b.fun(), env) && alpha_rec(a.arg(), b.arg(), env);
    case LambdaTerm::Kind::Abs: {
      env.emplace_back(a.name(), b.name());
      bool ok = alpha_rec(a.body(), b.body(), env);
      env.pop_back();
      return ok;
    }
  }
  return false;
}

void print_rec(const LambdaTerm& t, std::ostream& os, bool top) {
  switch (t.kind()) {
    case LambdaTerm::Kind::Var:
      os << t.name();
      return;
    case LambdaTerm::Kind::Abs: {
      os << '\\' << t.name() << '.';
      std::ostringstream body;
      print_rec(t.body(), body, false);
      os << body.str();
      return;
    }
    case LambdaTerm::Kind::App: {
      std::ostringstream lhs, rhs;
      print_rec(t.fun(), lhs, false);
      print_rec(t.arg(), rhs, false);
      if (!top) os << '(';
      os << lhs.str();
      if (rhs.str().empty() || rhs.str()[0] != '(') os << ' ';
      os << rhs.str();
      if (!top) os << ')';
      return;
    }
  }
}

class TermParser {
 public:
  explicit TermParser(const std::string& text) : text_(text) {}

  LambdaTerm parse() {
    LambdaTerm t = term();
    skip_ws();
    if (pos_ != text_.size())
      throw std::invalid_argument("trailing input after term");
    return t;
  }

 private:
  LambdaTerm term() {
    std::vector<LambdaTerm> operands;
    while (true) {
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] == ')') break;
      operands.push_back(operand());
    }
    if (operands.empty()) throw std::invalid_argument("empty term");
    LambdaTerm t = operands[0];
    for (std::size_t i = 1; i < operands.size(); ++i)
      t = LambdaTerm::app(t, operands[i]);
    return t;
  }

  LambdaTerm operand() {
    skip_ws();
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      LambdaTerm t = term();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')')
        throw std::invalid_argument("expected ')'");
      ++pos_;
      return t;
    }
    if (c == '\\') {
      ++pos_;
      std::string v = ident();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != '.')
        throw std::invalid_argument("expected '.' after lambda binder");
      ++pos_;
      return LambdaTerm::abs(v, term());
    }
    return LambdaTerm::var(ident());
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      unsigned char u = static_cast<unsigned char>(text_[pos_]);
      if (std::isalnum(u) || text_[pos_] == '_' || text_[pos_] == '\'')
        ++pos_;
      else
        break;
    }
    if (start == pos_) throw std::invalid_argument("expected identifier");
    return text_.substr(start, pos_ - start);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

bool LambdaTerm::alpha_equal(const LambdaTerm& other) const {
  std::vector<std::pair<std::string, std::string>> env;
  return alpha_rec(*this, other, env);
}

std::string LambdaTerm::str() const {
  std::ostringstream os;
  print_rec(*this, os, true);
  return os.str();
}

LambdaTerm parse_term(const std::string& text) {
  return TermParser(text).parse();
}

ProofNet to_semantic(const ProofNet& net) {
  ProofNet out = net;
  for (Link& l : out.links()) {
    if (l.is_tensor()) {
      if (l.tag == Tag::Under) std::swap(l.left, l.right);
      l.tag = Tag::App;
    } else {
      l.tag = Tag::Lambda;
    }
    l.mode = 0;
  }
  return out;
}

LambdaTerm extract_term(const ProofNet& net,
                        const std::vector<std::string>& vars,
                        const std::vector<std::string>& abs_vars) {
  NetIndex idx(net);
  auto roots = idx.roots();
  if (roots.size() != 1)
    throw std::invalid_argument("term extraction requires a unique root");
  std::map<VertexId, std::string> bound_names;
  std::size_t next_abs = 0;
  std::function<LambdaTerm(VertexId)> rec = [&](VertexId v) -> LambdaTerm {
    auto ab = idx.above(v);
    if (!ab) {
      const Vertex& vx = net.vertex(v);
      auto it = bound_names.find(v);
      if (it != bound_names.end()) return LambdaTerm::var(it->second);
      if (vx.origin.word) {
        std::size_t w = static_cast<std::size_t>(*vx.origin.word);
        if (w < vars.size()) return LambdaTerm::var(vars[w]);
        return LambdaTerm::var("x" + std::to_string(w + 1));
      }
      throw std::invalid_argument(
          "leaf vertex is neither a word nor a withdrawn hypothesis");
    }
    const Link& l = net.links()[*ab];
    if (l.is_tensor())
      return LambdaTerm::app(rec(l.left), rec(l.right));
    std::string name = next_abs < abs_vars.size()
                           ? abs_vars[next_abs]
                           : "y" + std::to_string(next_abs + 1 - abs_vars.size());
    ++next_abs;
    bound_names[l.withdrawn] = name;
    return LambdaTerm::abs(name, rec(l.premise));
  };
  return rec(roots[0]);
}

ProofNet term_to_net(const LambdaTerm& t,
                     const std::vector<std::string>& var_order) {
  if (!t.is_linear())
    throw std::invalid_argument("term is not linear");
  if (t.has_closed_subterm())
    throw std::invalid_argument("term has a closed subterm");
  if (!t.is_beta_normal())
    throw std::invalid_argument("term is not beta normal");

  // Word index per free variable: explicit order, the x<k> convention, or
  // occurrence order.
  auto fv = t.free_vars();
  std::map<std::string, int> word_of;
  if (!var_order.empty()) {
    for (std::size_t i = 0; i < var_order.size(); ++i)
      word_of[var_order[i]] = static_cast<int>(i);
    for (const auto& v : fv)
      if (!word_of.count(v))
        throw std::invalid_argument("free variable missing from var order: " + v);
  } else {
    bool all_xk = true;
    for (const auto& v : fv) {
      if (v.size() < 2 || v[0] != 'x' ||
          !std::all_of(v.begin() + 1, v.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
          })) {
        all_xk = false;
        break;
      }
    }
    if (all_xk) {
      for (const auto& v : fv) word_of[v] = std::stoi(v.substr(1)) - 1;
    } else {
      for (const auto& v : fv)
        word_of[v] = static_cast<int>(word_of.size());
    }
  }

  ProofNet net;
  std::vector<std::map<std::string, VertexId>> binder_scopes;
  std::function<VertexId(const LambdaTerm&)> rec =
      [&](const LambdaTerm& term) -> VertexId {
    switch (term.kind()) {
      case LambdaTerm::Kind::Var: {
        for (auto it = binder_scopes.rbegin(); it != binder_scopes.rend(); ++it) {
          auto f = it->find(term.name());
          if (f != it->end()) return f->second;
        }
        Vertex v;
        v.origin.word = word_of.at(term.name());
        return net.add_vertex(v);
      }
      case LambdaTerm::Kind::App: {
        VertexId f = rec(term.fun());
        VertexId a = rec(term.arg());
        VertexId c = net.fresh_vertex();
        Link l;
        l.kind = LinkKind::Tensor;
        l.tag = Tag::App;
        l.left = f;
        l.right = a;
        l.conclusion = c;
        net.add_link(l);
        return c;
      }
      case LambdaTerm::Kind::Abs: {
        VertexId x = net.fresh_vertex();
        binder_scopes.push_back({{term.name(), x}});
        VertexId b = rec(term.body());
        binder_scopes.pop_back();
        VertexId c = net.fresh_vertex();
        Link l;
        l.kind = LinkKind::Par;
        l.tag = Tag::Lambda;
        l.premise = b;
        l.arrow = c;
        l.withdrawn = x;
        net.add_link(l);
        return c;
      }
    }
    throw std::logic_error("unreachable");
  };
  rec(t);
  return net;
}

}  // namespace tlg
