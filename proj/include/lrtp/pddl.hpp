#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lrtp/strips.hpp"

namespace lrtp::pddl {

// The supported input language is the :strips + :typing subset of PDDL:
// positive conjunctive preconditions and goals, add/delete effects, typed
// parameters and objects, ";" comments. Identifiers are case-insensitive
// and normalized to lower case. Everything else is rejected loudly.

struct SourcePos {
    int line = 0;
    int col = 0;
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(SourcePos pos, const std::string& token, const std::string& message);
    SourcePos pos() const { return pos_; }
    const std::string& token() const { return token_; }

private:
    SourcePos pos_;
    std::string token_;
};

class UnsupportedFeature : public std::runtime_error {
public:
    UnsupportedFeature(SourcePos pos, const std::string& construct);
    SourcePos pos() const { return pos_; }
    const std::string& construct() const { return construct_; }

private:
    SourcePos pos_;
    std::string construct_;
};

class GroundingError : public std::runtime_error {
public:
    explicit GroundingError(const std::string& message) : std::runtime_error(message) {}
};

struct TypedName {
    std::string name;
    std::string type = "object";
    bool operator==(const TypedName&) const = default;
};

// Atom over schema variables ("?x") and/or constants; negated only in
// effect lists.
struct Literal {
    bool negated = false;
    std::string predicate;
    std::vector<std::string> args;
    bool operator==(const Literal&) const = default;
};

struct PredicateSchema {
    std::string name;
    std::vector<TypedName> params;
    bool operator==(const PredicateSchema&) const = default;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> params;
    std::vector<Literal> precondition; // positive atoms
    std::vector<Literal> effects;      // adds and deletes
    bool operator==(const ActionSchema&) const = default;
};

struct DomainAst {
    std::string name;
    std::vector<std::string> requirements;
    std::vector<std::pair<std::string, std::string>> types; // (type, parent), declaration order
    std::vector<TypedName> constants;
    std::vector<PredicateSchema> predicates;
    std::vector<ActionSchema> actions;
    bool operator==(const DomainAst&) const = default;
};

struct ProblemAst {
    std::string name;
    std::string domain_name;
    std::vector<TypedName> objects;
    std::vector<Literal> init; // ground positive atoms
    std::vector<Literal> goal; // ground positive atoms
    bool operator==(const ProblemAst&) const = default;
};

DomainAst parse_domain(std::string_view text);
ProblemAst parse_problem(std::string_view text);

DomainAst parse_domain_file(const std::string& path);
ProblemAst parse_problem_file(const std::string& path);

// Canonical pretty-printers; re-parsing the output yields an equal AST.
std::string to_pddl(const DomainAst& domain);
std::string to_pddl(const ProblemAst& problem);

struct GroundOptions {
    // Drop ground actions that are never applicable under delete relaxation
    // from the initial state. Does not change the reachable state set.
    bool prune_unreachable = true;
};

GroundProblem ground(const DomainAst& domain, const ProblemAst& problem,
                     const GroundOptions& options = {});

} // namespace lrtp::pddl
