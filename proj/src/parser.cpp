// parser.cpp - tokenizer and recursive-descent parser.
#include "hopi/parser.hpp"

#include <cctype>
#include <vector>

namespace hopi {

namespace {

enum class Tok {
  Ident, KwUnit, KwCh, KwAbs, KwRec, KwCall, KwRes, KwIf, KwThen, KwElse, KwNu,
  KwChan, KwTrigger,
  LParen, RParen, Lt, Gt, Bang, Question, Dot, Pipe, Eq, Colon, Backslash,
  Arrow, ResArrow, Zero, Newline, End,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    auto push = [&](Tok k, std::string t, int l, int c) {
      out.push_back(Token{k, std::move(t), l, c});
    };
    while (pos < src.size()) {
      char c = src[pos];
      int tl = line, tc = col;
      if (c == '\n') {
        push(Tok::Newline, "\n", tl, tc);
        advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (c == '-') {
        if (pos + 1 < src.size() && src[pos + 1] == '-') {
          while (pos < src.size() && src[pos] != '\n') advance();
          continue;
        }
        if (pos + 1 < src.size() && src[pos + 1] == '>') {
          advance();
          advance();
          push(Tok::Arrow, "->", tl, tc);
          continue;
        }
        fail("stray '-'");
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                src[pos] == '_' || src[pos] == '\'')) {
          id += src[pos];
          advance();
        }
        Tok k = Tok::Ident;
        if (id == "unit") k = Tok::KwUnit;
        else if (id == "ch") k = Tok::KwCh;
        else if (id == "abs") k = Tok::KwAbs;
        else if (id == "rec") k = Tok::KwRec;
        else if (id == "call") k = Tok::KwCall;
        else if (id == "res") k = Tok::KwRes;
        else if (id == "if") k = Tok::KwIf;
        else if (id == "then") k = Tok::KwThen;
        else if (id == "else") k = Tok::KwElse;
        else if (id == "nu") k = Tok::KwNu;
        else if (id == "chan") k = Tok::KwChan;
        else if (id == "trigger") k = Tok::KwTrigger;
        push(k, id, tl, tc);
        continue;
      }
      if (c == '0') {
        advance();
        push(Tok::Zero, "0", tl, tc);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) fail("identifiers may not start with a digit");
      advance();
      switch (c) {
        case '(': push(Tok::LParen, "(", tl, tc); break;
        case ')': push(Tok::RParen, ")", tl, tc); break;
        case '<':
          if (pos < src.size() && src[pos] == '=') {
            advance();
            push(Tok::ResArrow, "<=", tl, tc);
          } else {
            push(Tok::Lt, "<", tl, tc);
          }
          break;
        case '>': push(Tok::Gt, ">", tl, tc); break;
        case '!': push(Tok::Bang, "!", tl, tc); break;
        case '?': push(Tok::Question, "?", tl, tc); break;
        case '.': push(Tok::Dot, ".", tl, tc); break;
        case '|': push(Tok::Pipe, "|", tl, tc); break;
        case '=': push(Tok::Eq, "=", tl, tc); break;
        case ':': push(Tok::Colon, ":", tl, tc); break;
        case '\\': push(Tok::Backslash, "\\", tl, tc); break;
        default: fail(std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back(Token{Tok::End, "", line, col});
    return out;
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  std::set<std::string> triggers;

  const Token& cur() const { return toks[pos]; }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " (got '" + (cur().kind == Tok::End ? "<end>" : cur().text) +
                         "')",
                     cur().line, cur().col);
  }

  bool at(Tok k) const { return cur().kind == k; }

  bool eat(Tok k) {
    if (!at(k)) return false;
    ++pos;
    return true;
  }

  void expect(Tok k, const char* what) {
    if (!eat(k)) fail(std::string("expected ") + what);
  }

  void skipNewlines() {
    while (at(Tok::Newline)) ++pos;
  }

  std::string ident(const char* what) {
    if (!at(Tok::Ident)) fail(std::string("expected ") + what);
    return toks[pos++].text;
  }

  // ---- types ----

  TypePtr parseType() {
    if (eat(Tok::KwUnit)) return tyUnit();
    if (eat(Tok::KwCh)) {
      expect(Tok::Lt, "'<'");
      TypePtr t = parseType();
      expect(Tok::Gt, "'>'");
      return tyChan(t);
    }
    if (eat(Tok::KwAbs)) {
      expect(Tok::Lt, "'<'");
      TypePtr t = parseType();
      expect(Tok::Gt, "'>'");
      return tyAbs(t);
    }
    if (eat(Tok::KwRec)) {
      std::string z = ident("type variable after 'rec'");
      if (classifyIdent(z) != IdentClass::TypeVariable)
        fail("type variable must start with an uppercase letter");
      expect(Tok::Dot, "'.'");
      return tyRec(z, parseType());
    }
    if (at(Tok::Ident)) {
      std::string z = cur().text;
      if (classifyIdent(z) != IdentClass::TypeVariable) fail("expected a type");
      ++pos;
      return tyVar(z);
    }
    fail("expected a type");
  }

  // ---- values ----

  TermPtr parseValue() {
    if (at(Tok::LParen)) {
      // either the unit value or a parenthesised value
      size_t save = pos;
      ++pos;
      if (eat(Tok::RParen)) return mkUnit();
      pos = save;
      expect(Tok::LParen, "'('");
      TermPtr v = parseValue();
      expect(Tok::RParen, "')'");
      return v;
    }
    if (eat(Tok::Backslash)) {
      std::string x = ident("parameter after '\\'");
      if (classifyIdent(x) != IdentClass::Variable)
        fail("parameter must be a variable (starting with x, y or z)");
      expect(Tok::Colon, "':'");
      TypePtr ty = parseType();
      expect(Tok::Arrow, "'->'");
      TermPtr body = parseNonPar();
      return mkLambda(x, ty, body);
    }
    if (eat(Tok::KwCall)) {
      std::string k = ident("trigger identifier after 'call'");
      if (!triggers.count(k)) fail("undeclared trigger " + k);
      return mkTriggerCall(k);
    }
    if (at(Tok::Ident)) {
      std::string id = toks[pos++].text;
      switch (classifyIdent(id)) {
        case IdentClass::Variable: return mkVar(id);
        case IdentClass::ChannelName: return mkName(id);
        case IdentClass::TypeVariable: fail("type variable in value position");
      }
    }
    fail("expected a value");
  }

  // ---- processes ----

  // A process headed by a value: application, input or output.
  TermPtr parseValueHeaded(TermPtr v) {
    if (eat(Tok::LParen)) {
      TermPtr w = parseValue();
      expect(Tok::RParen, "')'");
      return mkApp(v, w);
    }
    if (eat(Tok::Question)) {
      expect(Tok::LParen, "'('");
      std::string x = ident("input parameter");
      if (classifyIdent(x) != IdentClass::Variable)
        fail("input parameter must be a variable (starting with x, y or z)");
      expect(Tok::Colon, "':'");
      TypePtr ty = parseType();
      expect(Tok::RParen, "')'");
      expect(Tok::Dot, "'.'");
      return mkInput(v, x, ty, parseNonPar());
    }
    if (eat(Tok::Bang)) {
      expect(Tok::Lt, "'<'");
      TermPtr w = parseValue();
      expect(Tok::Gt, "'>'");
      expect(Tok::Dot, "'.'");
      return mkOutput(v, w, parseNonPar());
    }
    fail("expected '(', '?' or '!' after value");
  }

  // Everything that binds tighter than |.
  TermPtr parseNonPar() {
    if (eat(Tok::Zero)) return mkNil();
    if (eat(Tok::Bang)) return mkRepl(parseNonPar());
    if (eat(Tok::KwNu)) {
      std::string a = ident("channel name after 'nu'");
      if (classifyIdent(a) != IdentClass::ChannelName)
        fail("restricted name must be a channel name");
      expect(Tok::Colon, "':'");
      TypePtr ty = parseType();
      expect(Tok::Dot, "'.'");
      expect(Tok::LParen, "'('");
      TermPtr body = parseProcess();
      expect(Tok::RParen, "')'");
      return mkNew(a, ty, body);
    }
    if (eat(Tok::KwIf)) {
      TermPtr l = parseValue();
      expect(Tok::Eq, "'='");
      TermPtr r = parseValue();
      expect(Tok::KwThen, "'then'");
      TermPtr thenB = parseNonPar();
      expect(Tok::KwElse, "'else'");
      TermPtr elseB = parseNonPar();
      return mkMatch(l, r, thenB, elseB);
    }
    if (eat(Tok::KwRes)) {
      std::string k = ident("trigger identifier after 'res'");
      if (!triggers.count(k)) fail("undeclared trigger " + k);
      expect(Tok::ResArrow, "'<='");
      return mkResource(k, parseValue());
    }
    if (at(Tok::LParen)) {
      // Either a parenthesised process or a value-headed process whose
      // subject is parenthesised ("(\x:T -> P)(v)", "()(v)", ...).
      size_t save = pos;
      try {
        TermPtr v = parseValue();
        if (at(Tok::LParen) || at(Tok::Question) || at(Tok::Bang))
          return parseValueHeaded(v);
      } catch (const ParseError&) {
        // fall through to the parenthesised-process reading
      }
      pos = save;
      expect(Tok::LParen, "'('");
      TermPtr p = parseProcess();
      expect(Tok::RParen, "')'");
      return p;
    }
    return parseValueHeaded(parseValue());
  }

  TermPtr parseProcess() {
    TermPtr p = parseNonPar();
    while (eat(Tok::Pipe)) p = mkPar(p, parseNonPar());
    return p;
  }

  // ---- input units ----

  ParsedFile parseUnit() {
    ParsedFile out;
    skipNewlines();
    while (at(Tok::KwChan) || at(Tok::KwTrigger)) {
      bool isChan = eat(Tok::KwChan);
      if (!isChan) expect(Tok::KwTrigger, "'trigger'");
      std::string id = ident(isChan ? "channel name" : "trigger identifier");
      if (isChan && classifyIdent(id) != IdentClass::ChannelName)
        fail("channel names may not start with x, y, z or an uppercase letter");
      if (!isChan && classifyIdent(id) != IdentClass::ChannelName)
        fail("trigger identifiers may not start with x, y, z or an uppercase letter");
      expect(Tok::Colon, "':'");
      TypePtr ty = parseType();
      auto& table = isChan ? out.env.channels : out.env.triggers;
      if (!table.insert({id, ty}).second) fail("duplicate declaration of " + id);
      if (out.env.channels.count(id) && out.env.triggers.count(id))
        fail(id + " declared as both channel and trigger");
      if (!isChan) triggers.insert(id);
      if (!at(Tok::End)) expect(Tok::Newline, "end of line after declaration");
      skipNewlines();
    }
    out.config = parseTop();
    return out;
  }

  TermPtr parseTop() {
    skipNewlines();
    // newlines inside the term are plain whitespace from here on
    std::vector<Token> rest;
    for (size_t i = pos; i < toks.size(); ++i)
      if (toks[i].kind != Tok::Newline) rest.push_back(toks[i]);
    toks = std::move(rest);
    pos = 0;
    TermPtr p = parseProcess();
    if (!at(Tok::End)) fail("trailing input after configuration");
    return p;
  }
};

}  // namespace

TermPtr parse(const std::string& text, const std::set<std::string>& declaredTriggers) {
  Parser p;
  p.toks = Lexer(text).run();
  p.triggers = declaredTriggers;
  return p.parseTop();
}

TypePtr parseTypeText(const std::string& text) {
  Parser p;
  p.toks = Lexer(text).run();
  p.skipNewlines();
  TypePtr t = p.parseType();
  p.skipNewlines();
  if (!p.at(Tok::End)) p.fail("trailing input after type");
  return t;
}

ParsedFile parseFile(const std::string& text) {
  Parser p;
  p.toks = Lexer(text).run();
  return p.parseUnit();
}

}  // namespace hopi
