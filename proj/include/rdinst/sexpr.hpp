#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rdinst {

struct SExpr {
  enum class Kind { Symbol, Keyword, Numeral, Decimal, String, List };

  Kind kind = Kind::List;
  std::string text;  // atom text; quoted symbols and strings are unescaped
  std::vector<SExpr> items;
  int line = 0;
  int column = 0;

  bool is_list() const { return kind == Kind::List; }
  bool is_symbol() const { return kind == Kind::Symbol; }
  bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
  bool is_atom() const { return kind != Kind::List; }
  /// True for a non-empty list whose first item is the symbol `s`.
  bool is_app_of(std::string_view s) const { return is_list() && !items.empty() && items[0].is_symbol(s); }

  std::string to_string() const;
};

/// Streaming reader over a text buffer. `next()` throws IncompleteInput when
/// the buffer ends inside an expression (or inside a trailing atom that may
/// continue) and ParseError on malformed input.
class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  /// Next top-level expression, or nullopt at clean end of input.
  std::optional<SExpr> next();
  /// Byte offset just past the last expression returned.
  std::size_t offset() const { return pos_; }
  /// When false, an atom touching the end of the buffer counts as complete.
  void set_streaming(bool streaming) { streaming_ = streaming; }

 private:
  void skip_space();
  SExpr read();
  SExpr read_atom();
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void advance();

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  bool streaming_ = false;
};

std::vector<SExpr> parse_sexprs(std::string_view text);

}  // namespace rdinst
