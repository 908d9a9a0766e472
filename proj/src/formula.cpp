#include "tlg/formula.hpp"

#include <cctype>
#include <sstream>

#include "json.hpp"

namespace tlg {

namespace {

bool valid_atom_name(const std::string& name) {
  if (name.empty()) return false;
  if (!std::islower(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name) {
    unsigned char u = static_cast<unsigned char>(c);
    if (!(std::islower(u) || std::isdigit(u) || c == '_')) return false;
  }
  return true;
}

}  // namespace

Formula Formula::atom(std::string name) {
  if (!valid_atom_name(name))
    throw std::invalid_argument("invalid atom name: '" + name + "'");
  auto n = std::make_shared<Node>();
  n->conn = kAtom;
  n->name = std::move(name);
  return Formula(std::move(n));
}

Formula Formula::over(Formula result, int mode, Formula arg) {
  if (mode < 0) throw std::invalid_argument("mode must be non-negative");
  auto n = std::make_shared<Node>();
  n->conn = static_cast<int>(Conn::Over);
  n->mode = mode;
  n->left = result.node_;
  n->right = arg.node_;
  n->directional = true;
  n->linear = result.uses_lolli() || arg.uses_lolli();
  if (n->linear)
    throw std::invalid_argument(
        "directional and linear connectives cannot be mixed in one formula");
  return Formula(std::move(n));
}

Formula Formula::under(Formula arg, int mode, Formula result) {
  if (mode < 0) throw std::invalid_argument("mode must be non-negative");
  auto n = std::make_shared<Node>();
  n->conn = static_cast<int>(Conn::Under);
  n->mode = mode;
  n->left = arg.node_;
  n->right = result.node_;
  n->directional = true;
  n->linear = arg.uses_lolli() || result.uses_lolli();
  if (n->linear)
    throw std::invalid_argument(
        "directional and linear connectives cannot be mixed in one formula");
  return Formula(std::move(n));
}

Formula Formula::lolli(Formula arg, Formula result) {
  auto n = std::make_shared<Node>();
  n->conn = static_cast<int>(Conn::Lolli);
  n->mode = 0;
  n->left = arg.node_;
  n->right = result.node_;
  n->linear = true;
  n->directional = arg.uses_directional() || result.uses_directional();
  if (n->directional)
    throw std::invalid_argument(
        "directional and linear connectives cannot be mixed in one formula");
  return Formula(std::move(n));
}

Conn Formula::conn() const {
  if (is_atom()) throw std::logic_error("conn() on atomic formula");
  return static_cast<Conn>(node_->conn);
}

Formula Formula::result_part() const {
  switch (conn()) {
    case Conn::Over:
      return left();
    case Conn::Under:
    case Conn::Lolli:
      return right();
  }
  throw std::logic_error("unreachable");
}

Formula Formula::arg_part() const {
  switch (conn()) {
    case Conn::Over:
      return right();
    case Conn::Under:
    case Conn::Lolli:
      return left();
  }
  throw std::logic_error("unreachable");
}

std::size_t Formula::size() const {
  if (is_atom()) return 1;
  return 1 + left().size() + right().size();
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (is_atom() != other.is_atom()) return false;
  if (is_atom()) return atom_name() == other.atom_name();
  return node_->conn == other.node_->conn && node_->mode == other.node_->mode &&
         left() == other.left() && right() == other.right();
}

namespace {

void print_rec(const Formula& f, std::ostream& os, bool top) {
  if (f.is_atom()) {
    os << f.atom_name();
    return;
  }
  if (!top) os << '(';
  print_rec(f.left(), os, false);
  switch (f.conn()) {
    case Conn::Over:
      os << '/';
      if (f.mode() != 0) os << f.mode();
      break;
    case Conn::Under:
      os << '\\';
      if (f.mode() != 0) os << f.mode();
      break;
    case Conn::Lolli:
      os << " -o ";
      break;
  }
  print_rec(f.right(), os, false);
  if (!top) os << ')';
}

class FormulaParser {
 public:
  explicit FormulaParser(const std::string& text) : text_(text) {}

  Formula parse() {
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after formula");
    return f;
  }

 private:
  Formula formula() {
    Formula lhs = operand();
    skip_ws();
    if (at_operator()) {
      auto [conn, mode] = read_operator();
      Formula rhs = operand();
      switch (conn) {
        case Conn::Over:
          return Formula::over(lhs, mode, rhs);
        case Conn::Under:
          return Formula::under(lhs, mode, rhs);
        case Conn::Lolli:
          return Formula::lolli(lhs, rhs);
      }
    }
    return lhs;
  }

  Formula operand() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == '(') {
      ++pos_;
      Formula f = formula();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return f;
    }
    if (std::islower(static_cast<unsigned char>(text_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < text_.size()) {
        unsigned char u = static_cast<unsigned char>(text_[pos_]);
        if (std::islower(u) || std::isdigit(u) || text_[pos_] == '_')
          ++pos_;
        else
          break;
      }
      return Formula::atom(text_.substr(start, pos_ - start));
    }
    fail("expected atom or '('");
  }

  bool at_operator() {
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return c == '/' || c == '\\' || (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'o');
  }

  std::pair<Conn, int> read_operator() {
    char c = text_[pos_];
    if (c == '-') {
      pos_ += 2;
      return {Conn::Lolli, 0};
    }
    ++pos_;
    int mode = 0;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      mode = text_[pos_] - '0';
      ++pos_;
    }
    return {c == '/' ? Conn::Over : Conn::Under, mode};
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("formula syntax error at position " + std::to_string(pos_) +
                         ": " + msg,
                     pos_);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Formula::str() const {
  std::ostringstream os;
  print_rec(*this, os, true);
  return os.str();
}

Formula parse_formula(const std::string& text) {
  return FormulaParser(text).parse();
}

Lexicon::Lexicon(std::vector<std::pair<std::string, Formula>> e, Formula g)
    : entries(std::move(e)), goal(std::move(g)) {
  if (entries.empty())
    throw std::invalid_argument("lexicon must contain at least one word");
}

Lexicon lexicon_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  std::vector<std::pair<std::string, Formula>> entries;
  for (const auto& w : j.at("words")) {
    entries.emplace_back(w.at("w").get<std::string>(),
                         parse_formula(w.at("f").get<std::string>()));
  }
  return Lexicon(std::move(entries), parse_formula(j.at("goal").get<std::string>()));
}

std::string lexicon_to_json(const Lexicon& lex) {
  nlohmann::json j;
  j["words"] = nlohmann::json::array();
  for (const auto& [w, f] : lex.entries)
    j["words"].push_back({{"w", w}, {"f", f.str()}});
  j["goal"] = lex.goal.str();
  return j.dump();
}

namespace {

void count_rec(const Formula& f, bool producer,
               std::map<std::string, AtomCounts>& out) {
  if (f.is_atom()) {
    if (producer)
      out[f.atom_name()].negatives++;
    else
      out[f.atom_name()].positives++;
    return;
  }
  // The result keeps the occurrence's polarity, the argument flips it.
  count_rec(f.result_part(), producer, out);
  count_rec(f.arg_part(), !producer, out);
}

}  // namespace

std::map<std::string, AtomCounts> count_check(const Lexicon& lex) {
  std::map<std::string, AtomCounts> out;
  for (const auto& [w, f] : lex.entries) count_rec(f, /*producer=*/true, out);
  count_rec(lex.goal, /*producer=*/false, out);
  return out;
}

bool counts_balanced(const std::map<std::string, AtomCounts>& counts) {
  for (const auto& [name, c] : counts)
    if (c.negatives != c.positives) return false;
  return true;
}

}  // namespace tlg
