// printer.cpp - precedence-aware rendering of the surface syntax.
#include "hopi/printer.hpp"

#include <stdexcept>

namespace hopi {

std::string printType(const TypePtr& t) {
  if (!t) throw std::invalid_argument("printType: null type");
  switch (t->kind) {
    case TypeKind::Unit: return "unit";
    case TypeKind::Chan: return "ch<" + printType(t->inner) + ">";
    case TypeKind::Abs: return "abs<" + printType(t->inner) + ">";
    case TypeKind::TypeVar: return t->name;
    case TypeKind::Rec: return "rec " + t->name + ". " + printType(t->inner);
  }
  return "?";
}

namespace {

std::string printTerm(const TermPtr& t, bool parLevel);

// Process at non-par level; wraps a parallel composition in parentheses.
std::string printSub(const TermPtr& t) { return printTerm(t, false); }

// Values in subject / function / operand positions print atomically.
std::string printValueAtom(const TermPtr& v) {
  if (v->kind == TermKind::Lambda || v->kind == TermKind::TriggerCall)
    return "(" + printTerm(v, false) + ")";
  return printTerm(v, false);
}

std::string printTerm(const TermPtr& t, bool parLevel) {
  if (!t) throw std::invalid_argument("print: null term");
  switch (t->kind) {
    case TermKind::UnitVal: return "()";
    case TermKind::Name:
    case TermKind::Var: return t->id;
    case TermKind::TriggerCall: return "call " + t->id;
    case TermKind::Lambda:
      return "\\" + t->id + ":" + printType(t->ty) + " -> " + printSub(t->t0);
    case TermKind::App:
      return printValueAtom(t->t0) + "(" + printTerm(t->t1, false) + ")";
    case TermKind::Input:
      return printValueAtom(t->t0) + "?(" + t->id + ":" + printType(t->ty) + ")." +
             printSub(t->t1);
    case TermKind::Output:
      return printValueAtom(t->t0) + "!<" + printTerm(t->t1, false) + ">." +
             printSub(t->t2);
    case TermKind::Match:
      return "if " + printValueAtom(t->t0) + " = " + printValueAtom(t->t1) + " then " +
             printSub(t->t2) + " else " + printSub(t->t3);
    case TermKind::New:
      return "nu " + t->id + ":" + printType(t->ty) + ".(" + printTerm(t->t0, true) +
             ")";
    case TermKind::Par: {
      // '|' parses left-associated, so only the left child may stay bare
      std::string s = printTerm(t->t0, true) + " | " + printTerm(t->t1, false);
      return parLevel ? s : "(" + s + ")";
    }
    case TermKind::Repl: return "!" + printSub(t->t0);
    case TermKind::Nil: return "0";
    case TermKind::Resource: return "res " + t->id + " <= " + printSub(t->t0);
  }
  return "?";
}

}  // namespace

std::string print(const TermPtr& t) { return printTerm(t, true); }

std::string printEnvHeader(const Env& env) {
  std::string out;
  for (const auto& [a, ty] : env.channels) out += "chan " + a + " : " + printType(ty) + "\n";
  for (const auto& [k, ty] : env.triggers)
    out += "trigger " + k + " : " + printType(ty) + "\n";
  return out;
}

std::string printFile(const Env& env, const TermPtr& c) {
  return printEnvHeader(env) + print(c) + "\n";
}

}  // namespace hopi
