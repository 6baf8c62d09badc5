// subst.hpp - capture-avoiding substitution, deterministic fresh-name
// supplies, and canonical alpha-renaming.
#pragma once

#include <set>
#include <string>

#include "hopi/syntax.hpp"

namespace hopi {

// Replace free occurrences of variable x by value v (capture-avoiding;
// bound channels and variables are renamed away from v's identifiers).
// Throws std::invalid_argument if v is not a value.
TermPtr substValue(const TermPtr& t, const std::string& x, const TermPtr& v);

// Replace every call of trigger k by value v.  The value held by a
// resource for k itself is left untouched; values of other resources are
// substituted like any other position.
TermPtr substTrigger(const TermPtr& t, const std::string& k, const TermPtr& v);

// Capture-avoiding substitution of a type for a free type variable.
TypePtr substTypeVar(const TypePtr& t, const std::string& z, const TypePtr& u);

// Rename one free channel name into another (capture-avoiding).
TermPtr renameFreeName(const TermPtr& t, const std::string& from, const std::string& to);

// Deterministic fresh identifiers: the first of the series not in `used`.
// Canonical binders use c0,c1,... / x0,x1,...; identifiers minted by the
// labelled semantics use b0,b1,... for channels and k0,k1,... for triggers.
std::string freshIdent(const char* stem, const std::set<std::string>& used);

// Canonical renaming: bound channels become c0,c1,..., bound variables
// x0,x1,..., recursion binders in type annotations Z0,Z1,..., allocated in
// a fixed left-to-right traversal and skipping everything in `avoid` (free
// identifiers of the term are always avoided).  Alpha-equivalent inputs
// yield identical outputs; the function is idempotent.
TermPtr alphaCanonical(const TermPtr& t, const std::set<std::string>& avoid = {});
TypePtr alphaCanonicalType(const TypePtr& t);

}  // namespace hopi
