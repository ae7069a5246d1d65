#include "kdb/syntax/lexer.hpp"

#include <cctype>

#include "kdb/syntax/parser.hpp"

namespace kdb {

const char * describe(Tok t)
{
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Tid: return "table identifier";
    case Tok::Loc: return "locality";
    case Tok::IntLit: return "integer";
    case Tok::StrLit: return "string";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Assign: return "':='";
    case Tok::DColon: return "'::'";
    case Tok::Bar: return "'|'";
    case Tok::BarBar: return "'||'";
    case Tok::Bang: return "'!'";
    case Tok::At: return "'@'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::PlusPlus: return "'++'";
    case Tok::AndAnd: return "'&&'";
    case Tok::End: return "end of input";
  }
  return "token";
}

namespace {

bool ident_char(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  explicit Lexer(const std::string & src) : src_(src) {}

  LexResult run()
  {
    LexResult out;
    out.tokens.reserve(src_.size() / 3 + 1);
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.tokens.push_back(std::move(t));
        break;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.text = word();
        t.kind = std::isupper(static_cast<unsigned char>(c)) ? Tok::Tid : Tok::Ident;
        out.names.insert(t.text);
      } else if (c == '$') {
        advance();
        if (pos_ >= src_.size() || !ident_char(src_[pos_]))
          throw ParseError(t.line, t.col, "expected a locality name after '$'");
        t.text = word();
        t.kind = Tok::Loc;
        out.names.insert(t.text);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          t.text += take();
        if (pos_ < src_.size() && ident_char(src_[pos_]))
          throw ParseError(t.line, t.col, "malformed integer literal");
        t.kind = Tok::IntLit;
      } else if (c == '"') {
        t.text = string_lit(t);
        t.kind = Tok::StrLit;
      } else {
        t.kind = punct(t);
      }
      out.tokens.push_back(std::move(t));
    }
    return out;
  }

 private:
  char take()
  {
    char c = src_[pos_];
    advance();
    return c;
  }

  void advance()
  {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool next_is(char c) const { return pos_ + 1 < src_.size() && src_[pos_ + 1] == c; }

  void skip_space()
  {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && next_is('/')) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string word()
  {
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
    if (pos_ < src_.size() && src_[pos_] == '#')
      throw ParseError(line_, col_, "'#' is reserved for generated names");
    return src_.substr(start, pos_ - start);
  }

  std::string string_lit(const Token & t)
  {
    advance();
    std::string out;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n')
        throw ParseError(t.line, t.col, "unterminated string literal");
      char c = take();
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= src_.size()) throw ParseError(t.line, t.col, "unterminated string literal");
      char e = take();
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: throw ParseError(line_, col_ - 1, std::string("unknown escape '\\") + e + "'");
      }
    }
    return out;
  }

  Tok punct(const Token & t)
  {
    char c = take();
    auto two = [&](char n, Tok yes, Tok no) {
      if (pos_ < src_.size() && src_[pos_] == n) {
        advance();
        return yes;
      }
      return no;
    };
    switch (c) {
      case '(': return Tok::LParen;
      case ')': return Tok::RParen;
      case '{': return Tok::LBrace;
      case '}': return Tok::RBrace;
      case '[': return Tok::LBrack;
      case ']': return Tok::RBrack;
      case ',': return Tok::Comma;
      case '.': return Tok::Dot;
      case ';': return Tok::Semi;
      case '@': return Tok::At;
      case '=': return Tok::Eq;
      case '*': return Tok::Star;
      case '/': return Tok::Slash;
      case '-': return Tok::Minus;
      case ':':
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          return Tok::Assign;
        }
        return two(':', Tok::DColon, Tok::Colon);
      case '|': return two('|', Tok::BarBar, Tok::Bar);
      case '!': return two('=', Tok::Ne, Tok::Bang);
      case '<': return two('=', Tok::Le, Tok::Lt);
      case '>': return two('=', Tok::Ge, Tok::Gt);
      case '+': return two('+', Tok::PlusPlus, Tok::Plus);
      case '&':
        if (pos_ < src_.size() && src_[pos_] == '&') {
          advance();
          return Tok::AndAnd;
        }
        break;
      default: break;
    }
    throw ParseError(t.line, t.col, std::string("unexpected character '") + c + "'");
  }

  const std::string & src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

}  // namespace

LexResult lex(const std::string & source)
{
  return Lexer(source).run();
}

}  // namespace kdb
