// Parser and printer for the plain-text TPDB formats: term rewrite systems
// with (VAR ...) / (RULES ...) blocks and string rewrite systems with
// comma-separated word rules. Strings become unary terms outermost-first,
// i.e. the leftmost letter is the outermost symbol.

#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kbo/term.hpp"

namespace kbo {

struct parse_error : std::runtime_error {
  int line = 0;
  int column = 0;

  parse_error(const std::string& msg, int l, int c)
      : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
        line(l),
        column(c) {}
};

namespace tpdb_detail {

struct Token {
  enum class Kind { lparen, rparen, comma, arrow, ident, end };
  Kind kind = Kind::end;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(msg, current_.line, current_.column);
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) step();
    current_.line = line_;
    current_.column = col_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::Kind::end;
      current_.text.clear();
      return;
    }
    char c = text_[pos_];
    if (c == '(' || c == ')' || c == ',') {
      current_.kind = c == '(' ? Token::Kind::lparen
                    : c == ')' ? Token::Kind::rparen
                               : Token::Kind::comma;
      current_.text = std::string(1, c);
      step();
      return;
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      current_.kind = Token::Kind::arrow;
      current_.text = "->";
      step();
      step();
      return;
    }
    std::string ident;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ',') break;
      if (d == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') break;
      ident += d;
      step();
    }
    current_.kind = Token::Kind::ident;
    current_.text = std::move(ident);
  }

  void step() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;
};

class TrsParser {
 public:
  explicit TrsParser(std::string_view text) : lex_(text) {}

  Trs parse() {
    bool saw_rules = false;
    while (lex_.peek().kind != Token::Kind::end) {
      expect(Token::Kind::lparen, "expected '(' opening a block");
      Token head = expect(Token::Kind::ident, "expected block name");
      if (head.text == "VAR") {
        if (saw_rules)
          throw parse_error("VAR block must precede RULES", head.line, head.column);
        parse_vars();
      } else if (head.text == "RULES") {
        parse_rules();
        saw_rules = true;
      } else if (head.text == "COMMENT") {
        skip_balanced();
      } else if (head.text == "STRATEGY" || head.text == "THEORY") {
        throw parse_error("unsupported " + head.text + " annotation", head.line, head.column);
      } else {
        throw parse_error("unknown block '" + head.text + "'", head.line, head.column);
      }
    }
    if (!saw_rules) lex_.fail("missing RULES block");
    return make_trs(std::move(rules_));
  }

 private:
  Token expect(Token::Kind k, const std::string& msg) {
    if (lex_.peek().kind != k) lex_.fail(msg);
    return lex_.next();
  }

  void parse_vars() {
    while (lex_.peek().kind == Token::Kind::ident) vars_.insert(lex_.next().text);
    expect(Token::Kind::rparen, "expected ')' closing VAR block");
  }

  void parse_rules() {
    while (lex_.peek().kind != Token::Kind::rparen) {
      Term lhs = parse_term();
      expect(Token::Kind::arrow, "expected '->' in rule");
      Term rhs = parse_term();
      rules_.push_back(Rule{std::move(lhs), std::move(rhs)});
      if (lex_.peek().kind == Token::Kind::comma) lex_.next();
    }
    lex_.next();
  }

  Term parse_term() {
    Token id = expect(Token::Kind::ident, "expected a term");
    bool is_var = vars_.count(id.text) > 0;
    if (lex_.peek().kind != Token::Kind::lparen) {
      return is_var ? Term::var(id.text) : Term::app(id.text);
    }
    if (is_var)
      throw parse_error("variable '" + id.text + "' used with arguments", id.line, id.column);
    lex_.next();
    std::vector<Term> args;
    if (lex_.peek().kind != Token::Kind::rparen) {
      args.push_back(parse_term());
      while (lex_.peek().kind == Token::Kind::comma) {
        lex_.next();
        args.push_back(parse_term());
      }
    }
    expect(Token::Kind::rparen, "expected ')' closing argument list");
    check_arity(id, static_cast<int>(args.size()));
    return Term::app(id.text, std::move(args));
  }

  void check_arity(const Token& id, int arity) {
    auto [it, inserted] = arities_.emplace(id.text, arity);
    if (!inserted && it->second != arity)
      throw parse_error("arity conflict for symbol '" + id.text + "': " +
                            std::to_string(it->second) + " vs " + std::to_string(arity),
                        id.line, id.column);
  }

  void skip_balanced() {
    int depth = 1;
    while (depth > 0) {
      Token t = lex_.next();
      if (t.kind == Token::Kind::end) lex_.fail("unterminated COMMENT block");
      if (t.kind == Token::Kind::lparen) ++depth;
      if (t.kind == Token::Kind::rparen) --depth;
    }
  }

  Lexer lex_;
  std::set<std::string> vars_;
  std::map<std::string, int> arities_;
  std::vector<Rule> rules_;
};

inline const char* srs_variable_name() { return "x"; }

class SrsParser {
 public:
  explicit SrsParser(std::string_view text) : lex_(text) {}

  Trs parse() {
    bool saw_rules = false;
    while (lex_.peek().kind != Token::Kind::end) {
      if (lex_.peek().kind != Token::Kind::lparen) lex_.fail("expected '(' opening a block");
      lex_.next();
      if (lex_.peek().kind != Token::Kind::ident) lex_.fail("expected block name");
      Token head = lex_.next();
      if (head.text == "RULES") {
        parse_rules();
        saw_rules = true;
      } else if (head.text == "COMMENT") {
        skip_balanced();
      } else if (head.text == "STRATEGY" || head.text == "THEORY") {
        throw parse_error("unsupported " + head.text + " annotation", head.line, head.column);
      } else {
        throw parse_error("unknown block '" + head.text + "'", head.line, head.column);
      }
    }
    if (!saw_rules) lex_.fail("missing RULES block");
    return make_trs(std::move(rules_), SystemKind::string_system);
  }

 private:
  void parse_rules() {
    while (lex_.peek().kind != Token::Kind::rparen) {
      rules_.push_back(parse_rule());
      if (lex_.peek().kind == Token::Kind::comma) lex_.next();
    }
    lex_.next();
  }

  Rule parse_rule() {
    std::vector<std::string> lhs = parse_word();
    if (lex_.peek().kind != Token::Kind::arrow) lex_.fail("expected '->' in rule");
    Token arrow = lex_.next();
    std::vector<std::string> rhs = parse_word();
    if (lhs.empty())
      throw parse_error("empty left-hand side", arrow.line, arrow.column);
    if (rhs.empty())
      throw parse_error("empty right-hand side", arrow.line, arrow.column);
    return Rule{word_to_term(lhs), word_to_term(rhs)};
  }

  std::vector<std::string> parse_word() {
    std::vector<std::string> word;
    while (lex_.peek().kind == Token::Kind::ident) word.push_back(lex_.next().text);
    return word;
  }

  static Term word_to_term(const std::vector<std::string>& word) {
    Term t = Term::var(srs_variable_name());
    for (auto it = word.rbegin(); it != word.rend(); ++it) t = Term::app(*it, {std::move(t)});
    return t;
  }

  void skip_balanced() {
    int depth = 1;
    while (depth > 0) {
      Token t = lex_.next();
      if (t.kind == Token::Kind::end) lex_.fail("unterminated COMMENT block");
      if (t.kind == Token::Kind::lparen) ++depth;
      if (t.kind == Token::Kind::rparen) --depth;
    }
  }

  Lexer lex_;
  std::vector<Rule> rules_;
};

inline void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name);
    return;
  }
  for (const Term& a : t.args) collect_vars(a, out);
}

// Unwraps a unary tower over the global SRS variable back into a word.
inline std::optional<std::vector<std::string>> term_to_word(const Term& t) {
  std::vector<std::string> word;
  const Term* c = &t;
  while (c->is_app()) {
    if (c->args.size() != 1) return std::nullopt;
    word.push_back(c->name);
    c = &c->args[0];
  }
  if (c->name != srs_variable_name()) return std::nullopt;
  return word;
}

}  // namespace tpdb_detail

/// Parses a TPDB term rewrite system. Identifiers in the VAR block are
/// variables, everything else a function symbol; arities are inferred from
/// usage and conflicts are reported with the offending symbol.
inline Trs parse_trs(std::string_view text) { return tpdb_detail::TrsParser(text).parse(); }

/// Parses a TPDB string rewrite system into a TRS over unary symbols and a
/// single variable.
inline Trs parse_srs(std::string_view text) { return tpdb_detail::SrsParser(text).parse(); }

/// Renders a system back to TPDB syntax. Reparsing the output yields a
/// structurally equal system.
inline std::string render_trs(const Trs& trs) {
  std::ostringstream out;
  if (trs.kind == SystemKind::string_system) {
    out << "(RULES\n";
    for (std::size_t i = 0; i < trs.rules.size(); ++i) {
      auto lhs = tpdb_detail::term_to_word(trs.rules[i].lhs);
      auto rhs = tpdb_detail::term_to_word(trs.rules[i].rhs);
      if (!lhs || !rhs)
        throw std::invalid_argument("string system contains a non-word rule: " +
                                    to_string(trs.rules[i]));
      out << "  ";
      for (const std::string& s : *lhs) out << s << ' ';
      out << "->";
      for (const std::string& s : *rhs) out << ' ' << s;
      if (i + 1 < trs.rules.size()) out << ',';
      out << '\n';
    }
    out << ")\n";
    return out.str();
  }
  std::set<std::string> vars;
  for (const Rule& r : trs.rules) {
    tpdb_detail::collect_vars(r.lhs, vars);
    tpdb_detail::collect_vars(r.rhs, vars);
  }
  out << "(VAR";
  for (const std::string& v : vars) out << ' ' << v;
  out << ")\n(RULES\n";
  for (const Rule& r : trs.rules) out << "  " << to_string(r) << '\n';
  out << ")\n";
  return out.str();
}

}  // namespace kbo
