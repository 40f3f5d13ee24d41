#pragma once

#include <map>
#include <string>

#include "polylap/instance.hpp"

namespace polylap {

// One problem file: the instance plus whatever reference values the file
// claims for its constants (recomputed and annotated by the hypothesis
// report).
struct ProblemFile {
    ProblemInstance instance;
    std::map<std::string, double> claims;
};

// Parses the JSON problem format documented in the README. Numbers may be
// JSON numbers or exact rational strings like "1/4000". Structural problems
// (malformed JSON, unknown keys, wrong types, unresolvable references) throw
// with a message naming the offender; data problems (negative weights,
// missing potentials, disconnected graphs) parse fine and are left to
// validate() and check_instance, so the validate command can report them.
ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);

// Canonical form: fixed key order, envelope columns written per vertex,
// doubles in shortest round-trip decimal. serialize(parse(s)) is a fixpoint
// and parse(serialize(pf)) reproduces pf exactly.
std::string serialize_problem(const ProblemFile& pf);

}  // namespace polylap
