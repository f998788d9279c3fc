#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gsynth/errors.hpp"

namespace gsynth {

/// A parsed s-expression: an atom or a list, with source position.
struct SExpr {
  std::variant<std::string, std::vector<SExpr>> data;
  int line = 0;
  int col = 0;

  bool is_atom() const { return std::holds_alternative<std::string>(data); }
  bool is_list() const { return !is_atom(); }

  const std::string &atom() const { return std::get<std::string>(data); }
  const std::vector<SExpr> &list() const { return std::get<std::vector<SExpr>>(data); }

  size_t size() const { return list().size(); }
  const SExpr &operator[](size_t i) const { return list()[i]; }

  /// Atom value if this is an atom matching `s`.
  bool is(std::string_view s) const { return is_atom() && atom() == s; }

  std::string to_string() const {
    if (is_atom())
      return atom();
    std::string out = "(";
    for (size_t i = 0; i < size(); ++i) {
      if (i > 0)
        out += ' ';
      out += (*this)[i].to_string();
    }
    out += ')';
    return out;
  }
};

/// Reader over SMT-LIB/SyGuS-flavoured s-expression text. Handles ';'
/// comments, |quoted symbols| and "string literals".
class SExprReader {
public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  /// Reads the next s-expression, or returns false at end of input.
  bool next(SExpr &out) {
    skip_trivia();
    if (pos_ >= text_.size())
      return false;
    out = read_expr();
    return true;
  }

  std::vector<SExpr> read_all() {
    std::vector<SExpr> result;
    SExpr e;
    while (next(e))
      result.push_back(std::move(e));
    return result;
  }

private:
  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  char peek() const { return text_[pos_]; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == ';') {
        while (pos_ < text_.size() && peek() != '\n')
          advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read_expr() {
    skip_trivia();
    if (pos_ >= text_.size())
      throw ParseError("unexpected end of input", line_, col_);
    int start_line = line_, start_col = col_;
    char c = peek();
    if (c == '(') {
      advance();
      std::vector<SExpr> items;
      while (true) {
        skip_trivia();
        if (pos_ >= text_.size())
          throw ParseError("unclosed '('", start_line, start_col);
        if (peek() == ')') {
          advance();
          break;
        }
        items.push_back(read_expr());
      }
      return SExpr{std::move(items), start_line, start_col};
    }
    if (c == ')')
      throw ParseError("unexpected ')'", line_, col_);
    if (c == '|')
      return read_quoted_symbol();
    if (c == '"')
      return read_string_literal();
    return read_atom();
  }

  SExpr read_atom() {
    int start_line = line_, start_col = col_;
    std::string s;
    while (pos_ < text_.size()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';')
        break;
      s += advance();
    }
    return SExpr{std::move(s), start_line, start_col};
  }

  SExpr read_quoted_symbol() {
    int start_line = line_, start_col = col_;
    advance(); // opening '|'
    std::string s;
    while (true) {
      if (pos_ >= text_.size())
        throw ParseError("unclosed '|'", start_line, start_col);
      char c = advance();
      if (c == '|')
        break;
      s += c;
    }
    return SExpr{std::move(s), start_line, start_col};
  }

  SExpr read_string_literal() {
    int start_line = line_, start_col = col_;
    std::string s = "\"";
    advance();
    while (true) {
      if (pos_ >= text_.size())
        throw ParseError("unclosed string literal", start_line, start_col);
      char c = advance();
      s += c;
      if (c == '"') {
        // SMT-LIB escapes '"' by doubling.
        if (pos_ < text_.size() && peek() == '"') {
          s += advance();
          continue;
        }
        break;
      }
    }
    return SExpr{std::move(s), start_line, start_col};
  }
};

inline std::vector<SExpr> parse_sexprs(std::string_view text) {
  return SExprReader(text).read_all();
}

} // namespace gsynth
