// parser.hpp - lexer and recursive-descent parser for the surface syntax.
//
//   types   T ::= unit | ch<T> | abs<T> | rec Z. T | Z
//   values  v ::= () | a | x | \x:T -> P | call k
//   procs   P ::= v(w) | v?(x:T).P | v!<w>.P | if v = w then P else Q
//               | nu a:T.(P) | P | Q | !P | 0 | res k <= v
//
// Prefixes bind tighter than |.  Comments run from -- to end of line.
// Input units may open with header lines "chan a : T" / "trigger k : T";
// trigger identifiers in call/res must be declared (by header or caller).
#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include "hopi/syntax.hpp"

namespace hopi {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" +
                           std::to_string(col_)),
        line(line_),
        col(col_) {}
};

// Parse a bare term.  `declaredTriggers` lists the identifiers that may
// appear in call/res position; anything else there is a ParseError.
TermPtr parse(const std::string& text,
              const std::set<std::string>& declaredTriggers = {});

TypePtr parseTypeText(const std::string& text);

// Parse a full input unit: header lines, then one configuration.
struct ParsedFile {
  Env env;
  TermPtr config;
};
ParsedFile parseFile(const std::string& text);

}  // namespace hopi
