#include "rdinst/sexpr.hpp"

#include "rdinst/errors.hpp"

#include <cctype>

namespace rdinst {

namespace {
bool is_delim(char c) {
  return c == '(' || c == ')' || c == ';' || c == '"' || c == '|' || std::isspace(static_cast<unsigned char>(c));
}
}  // namespace

std::string SExpr::to_string() const {
  switch (kind) {
    case Kind::String: {
      std::string out = "\"";
      for (char c : text) {
        if (c == '"') out += '"';
        out += c;
      }
      return out + "\"";
    }
    case Kind::List: {
      std::string out = "(";
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ' ';
        out += items[i].to_string();
      }
      return out + ")";
    }
    default: return text;
  }
}

void SExprReader::advance() {
  if (text_[pos_] == '\n') {
    ++line_;
    column_ = 1;
  } else {
    ++column_;
  }
  ++pos_;
}

void SExprReader::skip_space() {
  while (pos_ < text_.size()) {
    char c = text_[pos_];
    if (c == ';') {
      while (pos_ < text_.size() && text_[pos_] != '\n') advance();
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
    } else {
      break;
    }
  }
}

std::optional<SExpr> SExprReader::next() {
  const std::size_t save_pos = pos_;
  const int save_line = line_, save_col = column_;
  skip_space();
  if (pos_ >= text_.size()) return std::nullopt;
  try {
    return read();
  } catch (const IncompleteInput&) {
    pos_ = save_pos;
    line_ = save_line;
    column_ = save_col;
    throw;
  }
}

SExpr SExprReader::read() {
  skip_space();
  if (pos_ >= text_.size()) throw IncompleteInput("unexpected end of input", line_, column_);
  char c = peek();
  if (c == ')') throw ParseError("unexpected ')'", line_, column_);
  if (c != '(') return read_atom();

  SExpr list;
  list.kind = SExpr::Kind::List;
  list.line = line_;
  list.column = column_;
  advance();
  while (true) {
    skip_space();
    if (pos_ >= text_.size()) throw IncompleteInput("unterminated list", list.line, list.column);
    if (peek() == ')') {
      advance();
      return list;
    }
    list.items.push_back(read());
  }
}

SExpr SExprReader::read_atom() {
  SExpr a;
  a.line = line_;
  a.column = column_;
  char c = peek();
  if (c == '"') {
    a.kind = SExpr::Kind::String;
    advance();
    while (true) {
      if (pos_ >= text_.size()) throw IncompleteInput("unterminated string literal", a.line, a.column);
      char d = peek();
      advance();
      if (d == '"') {
        if (peek() == '"' && pos_ < text_.size()) {
          a.text += '"';
          advance();
          continue;
        }
        if (pos_ >= text_.size() && streaming_) {
          // A doubled quote may follow in the next chunk.
          throw IncompleteInput("string literal may continue", a.line, a.column);
        }
        return a;
      }
      a.text += d;
    }
  }
  if (c == '|') {
    a.kind = SExpr::Kind::Symbol;
    advance();
    while (true) {
      if (pos_ >= text_.size()) throw IncompleteInput("unterminated quoted symbol", a.line, a.column);
      char d = peek();
      advance();
      if (d == '|') return a;
      a.text += d;
    }
  }

  const std::size_t start = pos_;
  while (pos_ < text_.size() && !is_delim(peek())) advance();
  if (pos_ >= text_.size() && streaming_) throw IncompleteInput("atom may continue", a.line, a.column);
  a.text = std::string(text_.substr(start, pos_ - start));

  const std::string& t = a.text;
  if (t.front() == ':') {
    a.kind = SExpr::Kind::Keyword;
  } else if (std::isdigit(static_cast<unsigned char>(t.front()))) {
    std::size_t dots = 0;
    for (char d : t) {
      if (d == '.') {
        ++dots;
      } else if (!std::isdigit(static_cast<unsigned char>(d))) {
        throw ParseError("malformed numeral '" + t + "'", a.line, a.column);
      }
    }
    if (dots > 1 || t.back() == '.') throw ParseError("malformed decimal '" + t + "'", a.line, a.column);
    a.kind = dots ? SExpr::Kind::Decimal : SExpr::Kind::Numeral;
  } else if (t.front() == '#') {
    throw ParseError("bit-vector and hexadecimal literals are not supported", a.line, a.column);
  } else {
    a.kind = SExpr::Kind::Symbol;
  }
  return a;
}

std::vector<SExpr> parse_sexprs(std::string_view text) {
  SExprReader reader(text);
  std::vector<SExpr> out;
  while (auto e = reader.next()) out.push_back(std::move(*e));
  return out;
}

}  // namespace rdinst
