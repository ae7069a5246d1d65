#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace kdb {

enum class Tok : std::uint8_t {
  Ident,   // lowercase-initial identifier or keyword
  Tid,     // uppercase-initial identifier or keyword
  Loc,     // $name, text holds the name without '$'
  IntLit,  // decimal digits
  StrLit,  // text holds the decoded string
  LParen, RParen, LBrace, RBrace, LBrack, RBrack,
  Comma, Dot, Semi, Colon, Assign, DColon, Bar, BarBar,
  Bang, At, Eq, Ne, Lt, Le, Gt, Ge,
  Plus, Minus, Star, Slash, PlusPlus, AndAnd,
  End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::uint32_t line = 1;
  std::uint32_t col = 1;
};

const char * describe(Tok t);

struct LexResult {
  std::vector<Token> tokens;
  std::unordered_set<std::string> names;  // every identifier and locality name
};

// Throws ParseError on malformed input.
LexResult lex(const std::string & source);

}  // namespace kdb
