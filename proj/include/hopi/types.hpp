// types.hpp - guarded recursive types, iso-equivalence, and the typing
// judgement for processes and augmented configurations.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hopi/syntax.hpp"

namespace hopi {

struct TypeError : std::runtime_error {
  std::string rule;     // which judgement failed
  std::string subject;  // offending subterm or identifier, printed
  TypeError(const std::string& rule_, const std::string& subject_,
            const std::string& detail)
      : std::runtime_error(rule_ + ": " + detail +
                           (subject_.empty() ? "" : " in `" + subject_ + "`")),
        rule(rule_),
        subject(subject_) {}
};

// Every recursion binder must occur only beneath a ch<> or abs<>
// constructor within its own body.
bool checkGuardedType(const TypePtr& t);

// One unfolding of rec Z. T into T[rec Z. T / Z]; requires a Rec head.
TypePtr unfoldRec(const TypePtr& t);

// Unfold Rec heads until a structural constructor (or type variable)
// appears.  Requires a guarded type.
TypePtr headNormal(const TypePtr& t);

// Iso-equivalence: types are compared coinductively after head
// normalization, with a visited-pair set closing the recursion.
bool typeIso(const TypePtr& a, const TypePtr& b);

// First-order types: those whose head normal form is unit or ch<>.
bool isBaseType(const TypePtr& t);

// A type usable in annotations/environments: guarded and closed.
void requireWellFormedType(const TypePtr& t, const std::string& where);

// Value typing; throws TypeError for non-values and lookup failures.
TypePtr inferValueType(const Env& env, const TermPtr& v);

// Process/configuration typing; throws TypeError on failure.
void checkProcess(const Env& env, const TermPtr& p);

// Full configuration check: environment well-formedness, structural
// validation (value positions, unique resources, namespaces), then typing.
void checkConfig(const Env& env, const TermPtr& c);

// Types every configuration reachable in at most `steps` reductions.
// On failure, `trace` holds the reduction path to the offending term and
// `message` the type error.
struct SubjectReductionReport {
  bool ok = true;
  std::vector<std::string> trace;
  std::string message;
};
SubjectReductionReport checkSubjectReduction(const Env& env, const TermPtr& c,
                                             int steps);

}  // namespace hopi
