// printer.hpp - surface-syntax rendering of types, terms and environments.
// Output is deterministic and reparses to an equal tree.
#pragma once

#include <string>

#include "hopi/syntax.hpp"

namespace hopi {

std::string printType(const TypePtr& t);
std::string print(const TermPtr& t);

// Environment header lines ("chan a : T" / "trigger k : T"), one per line,
// channels first, each namespace alphabetically.
std::string printEnvHeader(const Env& env);

// Whole input unit: header lines followed by the configuration.
std::string printFile(const Env& env, const TermPtr& c);

}  // namespace hopi
