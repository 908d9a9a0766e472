#ifndef TLG_FORMULA_HPP
#define TLG_FORMULA_HPP

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tlg {

// Connectives of the formula language. Over/Under are the directional
// implications (A/B looks right, A\C looks left); Lolli is linear
// implication. A formula is either fully directional or fully linear.
enum class Conn { Over, Under, Lolli };

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg), position(pos) {}
  std::size_t position;
};

class Formula {
 public:
  static Formula atom(std::string name);
  static Formula over(Formula result, int mode, Formula arg);   // result / arg
  static Formula under(Formula arg, int mode, Formula result);  // arg \ result
  static Formula lolli(Formula arg, Formula result);            // arg -o result

  bool is_atom() const { return node_->conn == kAtom; }
  const std::string& atom_name() const { return node_->name; }

  Conn conn() const;
  int mode() const { return node_->mode; }

  // For Over: left() is the result, right() the argument.
  // For Under: left() is the argument, right() the result.
  // For Lolli: left() is the argument, right() the result.
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }

  // The result/argument subformulas independent of surface order.
  Formula result_part() const;
  Formula arg_part() const;

  bool uses_directional() const { return node_->directional; }
  bool uses_lolli() const { return node_->linear; }

  std::size_t size() const;

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  std::string str() const;

 private:
  static constexpr int kAtom = -1;
  struct Node {
    int conn;  // kAtom or static_cast<int>(Conn)
    int mode = 0;
    std::string name;
    std::shared_ptr<const Node> left, right;
    bool directional = false;
    bool linear = false;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Parses the fully parenthesised surface syntax:
//   formula := operand | operand op operand
//   operand := atom | '(' formula ')'
//   op      := '/' [digit] | '\' [digit] | '-o'
// Nested binaries must be parenthesised; mode 0 is written without digits.
Formula parse_formula(const std::string& text);

struct Lexicon {
  std::vector<std::pair<std::string, Formula>> entries;
  Formula goal;

  Lexicon(std::vector<std::pair<std::string, Formula>> e, Formula g);
  std::size_t size() const { return entries.size(); }
};

Lexicon lexicon_from_json(const std::string& json_text);
std::string lexicon_to_json(const Lexicon& lex);

struct AtomCounts {
  int negatives = 0;  // producer occurrences
  int positives = 0;  // consumer occurrences
};

// Polarized occurrence counts over the whole sequent: lexical formulas
// unfold with producer polarity, the goal with consumer polarity. Balance
// of every row is necessary for provability.
std::map<std::string, AtomCounts> count_check(const Lexicon& lex);

bool counts_balanced(const std::map<std::string, AtomCounts>& counts);

}  // namespace tlg

#endif
