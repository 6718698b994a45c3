#include "lrtp/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lrtp/heuristics.hpp"

namespace lrtp::pddl {

SyntaxError::SyntaxError(SourcePos pos, const std::string& token, const std::string& message)
    : std::runtime_error("syntax error at " + std::to_string(pos.line) + ":" +
                         std::to_string(pos.col) + " near '" + token + "': " + message),
      pos_(pos), token_(token) {}

UnsupportedFeature::UnsupportedFeature(SourcePos pos, const std::string& construct)
    : std::runtime_error("unsupported PDDL construct at " + std::to_string(pos.line) + ":" +
                         std::to_string(pos.col) + ": " + construct),
      pos_(pos), construct_(construct) {}

namespace {

// --- s-expression reader ---

struct Sexp {
    bool is_atom = false;
    std::string atom; // lowercased
    std::vector<Sexp> items;
    SourcePos pos;
};

struct Lexer {
    std::string_view text;
    size_t i = 0;
    int line = 1;
    int col = 1;

    void advance() {
        if (i < text.size() && text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    }

    void skip_ws_and_comments() {
        while (i < text.size()) {
            char c = text[i];
            if (c == ';') {
                while (i < text.size() && text[i] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    bool at_end() {
        skip_ws_and_comments();
        return i >= text.size();
    }
};

bool is_symbol_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ';';
}

Sexp read_sexp(Lexer& lex) {
    lex.skip_ws_and_comments();
    SourcePos pos{lex.line, lex.col};
    if (lex.i >= lex.text.size())
        throw SyntaxError(pos, "<eof>", "unexpected end of input");
    char c = lex.text[lex.i];
    if (c == ')')
        throw SyntaxError(pos, ")", "unexpected ')'");
    if (c == '(') {
        lex.advance();
        Sexp list;
        list.pos = pos;
        for (;;) {
            lex.skip_ws_and_comments();
            if (lex.i >= lex.text.size())
                throw SyntaxError({lex.line, lex.col}, "<eof>", "unclosed '('");
            if (lex.text[lex.i] == ')') {
                lex.advance();
                return list;
            }
            list.items.push_back(read_sexp(lex));
        }
    }
    Sexp atom;
    atom.is_atom = true;
    atom.pos = pos;
    while (lex.i < lex.text.size() && is_symbol_char(lex.text[lex.i])) {
        atom.atom.push_back(static_cast<char>(
            std::tolower(static_cast<unsigned char>(lex.text[lex.i]))));
        lex.advance();
    }
    return atom;
}

Sexp read_single(std::string_view text) {
    Lexer lex{text};
    Sexp root = read_sexp(lex);
    if (!lex.at_end())
        throw SyntaxError({lex.line, lex.col}, std::string(1, lex.text[lex.i]),
                          "trailing content after top-level form");
    return root;
}

const std::string& atom_of(const Sexp& s, const char* what) {
    if (!s.is_atom)
        throw SyntaxError(s.pos, "(", std::string("expected ") + what);
    return s.atom;
}

// --- typed lists ---

// names... [- type names... [- type ...]]; a trailing group without a type
// defaults to "object".
std::vector<TypedName> parse_typed_names(const std::vector<Sexp>& items, size_t begin,
                                         bool require_variables) {
    std::vector<TypedName> out;
    std::vector<size_t> pending;
    for (size_t k = begin; k < items.size(); ++k) {
        const std::string& tok = atom_of(items[k], "name in typed list");
        if (tok == "-") {
            if (k + 1 >= items.size())
                throw SyntaxError(items[k].pos, "-", "dangling '-' in typed list");
            const Sexp& type_form = items[k + 1];
            if (!type_form.is_atom)
                throw UnsupportedFeature(type_form.pos, "(either ...) types");
            if (pending.empty())
                throw SyntaxError(items[k].pos, "-", "'-' with no preceding names");
            for (size_t idx : pending)
                out[idx].type = type_form.atom;
            pending.clear();
            ++k;
            continue;
        }
        bool is_var = !tok.empty() && tok[0] == '?';
        if (require_variables && !is_var)
            throw SyntaxError(items[k].pos, tok, "expected a '?variable'");
        if (!require_variables && is_var)
            throw SyntaxError(items[k].pos, tok, "variables are not allowed here");
        pending.push_back(out.size());
        out.push_back(TypedName{tok, "object"});
    }
    return out;
}

// --- formula walking ---

const std::unordered_set<std::string> kAdlConnectives = {
    "or", "not", "imply", "exists", "forall", "when", "=", "increase",
    "decrease", "assign", "scale-up", "scale-down", "preference"};

Literal parse_atom(const Sexp& form, bool require_ground) {
    if (form.is_atom || form.items.empty() || !form.items[0].is_atom)
        throw SyntaxError(form.pos, form.is_atom ? form.atom : "(", "expected an atom (pred args...)");
    const std::string& head = form.items[0].atom;
    if (kAdlConnectives.count(head))
        throw UnsupportedFeature(form.pos, head);
    Literal lit;
    lit.predicate = head;
    for (size_t k = 1; k < form.items.size(); ++k) {
        const std::string& arg = atom_of(form.items[k], "atom argument");
        if (require_ground && !arg.empty() && arg[0] == '?')
            throw SyntaxError(form.items[k].pos, arg, "variable in a ground atom");
        lit.args.push_back(arg);
    }
    return lit;
}

// Conjunction of positive atoms; bare atom or the empty conjunction allowed.
std::vector<Literal> parse_positive_conjunction(const Sexp& form, bool require_ground) {
    std::vector<Literal> out;
    if (!form.is_atom && form.items.empty())
        return out;
    if (!form.is_atom && !form.items.empty() && form.items[0].is_atom &&
        form.items[0].atom == "and") {
        for (size_t k = 1; k < form.items.size(); ++k) {
            const Sexp& sub = form.items[k];
            if (!sub.is_atom && !sub.items.empty() && sub.items[0].is_atom &&
                sub.items[0].atom == "not")
                throw UnsupportedFeature(sub.pos, "not");
            out.push_back(parse_atom(sub, require_ground));
        }
        return out;
    }
    if (!form.is_atom && !form.items.empty() && form.items[0].is_atom &&
        form.items[0].atom == "not")
        throw UnsupportedFeature(form.pos, "not");
    out.push_back(parse_atom(form, require_ground));
    return out;
}

// Conjunction of literals; (not atom) allowed.
std::vector<Literal> parse_effect(const Sexp& form) {
    std::vector<Literal> out;
    auto one = [&](const Sexp& sub) {
        if (!sub.is_atom && !sub.items.empty() && sub.items[0].is_atom &&
            sub.items[0].atom == "not") {
            if (sub.items.size() != 2)
                throw SyntaxError(sub.pos, "not", "(not ...) takes exactly one atom");
            Literal lit = parse_atom(sub.items[1], false);
            lit.negated = true;
            out.push_back(std::move(lit));
        } else {
            out.push_back(parse_atom(sub, false));
        }
    };
    if (!form.is_atom && !form.items.empty() && form.items[0].is_atom &&
        form.items[0].atom == "and") {
        for (size_t k = 1; k < form.items.size(); ++k)
            one(form.items[k]);
    } else {
        one(form);
    }
    return out;
}

// --- AST validation shared by domain parsing ---

struct PredicateTable {
    std::unordered_map<std::string, size_t> arity;
};

void check_literal_against_schema(const Literal& lit, const PredicateTable& preds,
                                  SourcePos pos) {
    auto it = preds.arity.find(lit.predicate);
    if (it == preds.arity.end())
        throw SyntaxError(pos, lit.predicate, "undeclared predicate");
    if (it->second != lit.args.size())
        throw SyntaxError(pos, lit.predicate,
                          "arity mismatch: declared " + std::to_string(it->second) +
                              ", used with " + std::to_string(lit.args.size()));
}

const std::unordered_set<std::string> kSupportedRequirements = {":strips", ":typing"};

} // namespace

DomainAst parse_domain(std::string_view text) {
    Sexp root = read_single(text);
    if (root.is_atom || root.items.size() < 2 || !root.items[0].is_atom ||
        root.items[0].atom != "define")
        throw SyntaxError(root.pos, root.is_atom ? root.atom : "(", "expected (define (domain ...) ...)");
    const Sexp& head = root.items[1];
    if (head.is_atom || head.items.size() != 2 || !head.items[0].is_atom ||
        head.items[0].atom != "domain")
        throw SyntaxError(head.pos, "", "expected (domain <name>)");

    DomainAst domain;
    domain.name = atom_of(head.items[1], "domain name");

    PredicateTable preds;
    std::unordered_set<std::string> declared_types = {"object"};

    for (size_t si = 2; si < root.items.size(); ++si) {
        const Sexp& section = root.items[si];
        if (section.is_atom || section.items.empty() || !section.items[0].is_atom)
            throw SyntaxError(section.pos, section.is_atom ? section.atom : "(",
                              "expected a domain section (:...)");
        const std::string& tag = section.items[0].atom;

        if (tag == ":requirements") {
            for (size_t k = 1; k < section.items.size(); ++k) {
                const std::string& req = atom_of(section.items[k], "requirement flag");
                if (!kSupportedRequirements.count(req))
                    throw UnsupportedFeature(section.items[k].pos, ":requirements " + req);
                domain.requirements.push_back(req);
            }
        } else if (tag == ":types") {
            auto typed = parse_typed_names(section.items, 1, false);
            for (const auto& tn : typed) {
                domain.types.emplace_back(tn.name, tn.type);
                declared_types.insert(tn.name);
            }
            // Parents referenced but never declared act as direct children
            // of object.
            for (const auto& [name, parent] : domain.types) {
                (void)name;
                if (!declared_types.count(parent)) {
                    domain.types.emplace_back(parent, "object");
                    declared_types.insert(parent);
                }
            }
            // Reject cyclic hierarchies.
            std::unordered_map<std::string, std::string> parent_of(domain.types.begin(),
                                                                   domain.types.end());
            for (const auto& [name, unused] : domain.types) {
                (void)unused;
                std::string cur = name;
                size_t steps = 0;
                while (cur != "object") {
                    cur = parent_of.at(cur);
                    if (++steps > parent_of.size())
                        throw SyntaxError(section.pos, name, "cyclic type hierarchy");
                }
            }
        } else if (tag == ":constants") {
            domain.constants = parse_typed_names(section.items, 1, false);
        } else if (tag == ":predicates") {
            for (size_t k = 1; k < section.items.size(); ++k) {
                const Sexp& p = section.items[k];
                if (p.is_atom || p.items.empty() || !p.items[0].is_atom)
                    throw SyntaxError(p.pos, "", "expected (predicate ?args...)");
                PredicateSchema schema;
                schema.name = p.items[0].atom;
                if (schema.name == "=")
                    throw UnsupportedFeature(p.pos, "=");
                schema.params = parse_typed_names(p.items, 1, true);
                if (preds.arity.count(schema.name))
                    throw SyntaxError(p.pos, schema.name, "duplicate predicate");
                preds.arity[schema.name] = schema.params.size();
                domain.predicates.push_back(std::move(schema));
            }
        } else if (tag == ":action") {
            if (section.items.size() < 2 || !section.items[1].is_atom)
                throw SyntaxError(section.pos, ":action", "expected an action name");
            ActionSchema action;
            action.name = section.items[1].atom;
            if ((section.items.size() - 2) % 2 != 0)
                throw SyntaxError(section.pos, atom_of(section.items.back(), "action keyword"),
                                  "action keyword without a value");
            for (size_t k = 2; k + 1 < section.items.size(); k += 2) {
                const std::string& key = atom_of(section.items[k], "action keyword");
                const Sexp& value = section.items[k + 1];
                if (key == ":parameters") {
                    if (value.is_atom)
                        throw SyntaxError(value.pos, value.atom, "expected (?params...)");
                    action.params = parse_typed_names(value.items, 0, true);
                } else if (key == ":precondition") {
                    action.precondition = parse_positive_conjunction(value, false);
                } else if (key == ":effect") {
                    action.effects = parse_effect(value);
                } else if (key == ":duration" || key == ":condition") {
                    throw UnsupportedFeature(section.items[k].pos, key);
                } else {
                    throw SyntaxError(section.items[k].pos, key, "unknown action keyword");
                }
            }
            for (const auto& existing : domain.actions)
                if (existing.name == action.name)
                    throw SyntaxError(section.pos, action.name, "duplicate action");
            std::unordered_set<std::string> param_names;
            for (const auto& p : action.params) {
                if (!param_names.insert(p.name).second)
                    throw SyntaxError(section.pos, p.name, "duplicate parameter");
                if (!declared_types.count(p.type))
                    throw SyntaxError(section.pos, p.type, "undeclared type");
            }
            auto check_vars = [&](const std::vector<Literal>& lits) {
                for (const auto& lit : lits) {
                    check_literal_against_schema(lit, preds, section.pos);
                    for (const auto& arg : lit.args)
                        if (!arg.empty() && arg[0] == '?' && !param_names.count(arg))
                            throw SyntaxError(section.pos, arg, "unbound variable");
                }
            };
            check_vars(action.precondition);
            check_vars(action.effects);
            domain.actions.push_back(std::move(action));
        } else if (tag == ":functions" || tag == ":derived" || tag == ":axiom" ||
                   tag == ":durative-action" || tag == ":constraints") {
            throw UnsupportedFeature(section.pos, tag);
        } else {
            throw SyntaxError(section.pos, tag, "unknown domain section");
        }
    }

    for (const auto& schema : domain.predicates)
        for (const auto& p : schema.params)
            if (!declared_types.count(p.type))
                throw SyntaxError(root.pos, p.type, "undeclared type");
    for (const auto& c : domain.constants)
        if (!declared_types.count(c.type))
            throw SyntaxError(root.pos, c.type, "undeclared type");

    return domain;
}

ProblemAst parse_problem(std::string_view text) {
    Sexp root = read_single(text);
    if (root.is_atom || root.items.size() < 2 || !root.items[0].is_atom ||
        root.items[0].atom != "define")
        throw SyntaxError(root.pos, root.is_atom ? root.atom : "(",
                          "expected (define (problem ...) ...)");
    const Sexp& head = root.items[1];
    if (head.is_atom || head.items.size() != 2 || !head.items[0].is_atom ||
        head.items[0].atom != "problem")
        throw SyntaxError(head.pos, "", "expected (problem <name>)");

    ProblemAst problem;
    problem.name = atom_of(head.items[1], "problem name");

    for (size_t si = 2; si < root.items.size(); ++si) {
        const Sexp& section = root.items[si];
        if (section.is_atom || section.items.empty() || !section.items[0].is_atom)
            throw SyntaxError(section.pos, section.is_atom ? section.atom : "(",
                              "expected a problem section (:...)");
        const std::string& tag = section.items[0].atom;
        if (tag == ":domain") {
            if (section.items.size() != 2)
                throw SyntaxError(section.pos, ":domain", "expected (:domain <name>)");
            problem.domain_name = atom_of(section.items[1], "domain name");
        } else if (tag == ":objects") {
            problem.objects = parse_typed_names(section.items, 1, false);
        } else if (tag == ":init") {
            for (size_t k = 1; k < section.items.size(); ++k) {
                const Sexp& sub = section.items[k];
                if (!sub.is_atom && !sub.items.empty() && sub.items[0].is_atom &&
                    (sub.items[0].atom == "not" || sub.items[0].atom == "="))
                    throw UnsupportedFeature(sub.pos, sub.items[0].atom + " in :init");
                problem.init.push_back(parse_atom(sub, true));
            }
        } else if (tag == ":goal") {
            if (section.items.size() != 2)
                throw SyntaxError(section.pos, ":goal", "expected (:goal <conjunction>)");
            problem.goal = parse_positive_conjunction(section.items[1], true);
        } else if (tag == ":metric" || tag == ":length" || tag == ":constraints") {
            throw UnsupportedFeature(section.pos, tag);
        } else {
            throw SyntaxError(section.pos, tag, "unknown problem section");
        }
    }

    if (problem.domain_name.empty())
        throw SyntaxError(root.pos, "", "missing (:domain ...) section");
    return problem;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw GroundingError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

DomainAst parse_domain_file(const std::string& path) {
    return parse_domain(read_file(path));
}

ProblemAst parse_problem_file(const std::string& path) {
    return parse_problem(read_file(path));
}

// --- pretty printing ---

namespace {

void print_typed_names(std::ostream& os, const std::vector<TypedName>& names) {
    for (size_t k = 0; k < names.size(); ++k) {
        if (k)
            os << ' ';
        os << names[k].name << " - " << names[k].type;
    }
}

void print_literal(std::ostream& os, const Literal& lit) {
    if (lit.negated)
        os << "(not ";
    os << '(' << lit.predicate;
    for (const auto& a : lit.args)
        os << ' ' << a;
    os << ')';
    if (lit.negated)
        os << ')';
}

void print_conjunction(std::ostream& os, const std::vector<Literal>& lits) {
    os << "(and";
    for (const auto& lit : lits) {
        os << ' ';
        print_literal(os, lit);
    }
    os << ')';
}

} // namespace

std::string to_pddl(const DomainAst& domain) {
    std::ostringstream os;
    os << "(define (domain " << domain.name << ")\n";
    if (!domain.requirements.empty()) {
        os << "  (:requirements";
        for (const auto& r : domain.requirements)
            os << ' ' << r;
        os << ")\n";
    }
    if (!domain.types.empty()) {
        os << "  (:types";
        for (const auto& [name, parent] : domain.types)
            os << ' ' << name << " - " << parent;
        os << ")\n";
    }
    if (!domain.constants.empty()) {
        os << "  (:constants ";
        print_typed_names(os, domain.constants);
        os << ")\n";
    }
    os << "  (:predicates";
    for (const auto& p : domain.predicates) {
        os << " (" << p.name;
        if (!p.params.empty()) {
            os << ' ';
            print_typed_names(os, p.params);
        }
        os << ')';
    }
    os << ")\n";
    for (const auto& a : domain.actions) {
        os << "  (:action " << a.name << "\n    :parameters (";
        print_typed_names(os, a.params);
        os << ")\n    :precondition ";
        print_conjunction(os, a.precondition);
        os << "\n    :effect ";
        print_conjunction(os, a.effects);
        os << ")\n";
    }
    os << ")\n";
    return os.str();
}

std::string to_pddl(const ProblemAst& problem) {
    std::ostringstream os;
    os << "(define (problem " << problem.name << ")\n";
    os << "  (:domain " << problem.domain_name << ")\n";
    if (!problem.objects.empty()) {
        os << "  (:objects ";
        print_typed_names(os, problem.objects);
        os << ")\n";
    }
    os << "  (:init";
    for (const auto& lit : problem.init) {
        os << ' ';
        print_literal(os, lit);
    }
    os << ")\n  (:goal ";
    print_conjunction(os, problem.goal);
    os << ")\n)\n";
    return os.str();
}

// --- grounding ---

namespace {

struct TypeHierarchy {
    std::unordered_map<std::string, std::string> parent;

    bool declared(const std::string& t) const { return t == "object" || parent.count(t); }

    bool is_subtype(const std::string& t, const std::string& ancestor) const {
        std::string cur = t;
        for (;;) {
            if (cur == ancestor)
                return true;
            if (cur == "object")
                return false;
            auto it = parent.find(cur);
            if (it == parent.end())
                return false;
            cur = it->second;
        }
    }
};

std::string ground_atom_name(const std::string& predicate, const std::vector<std::string>& args) {
    std::string name = predicate;
    for (const auto& a : args) {
        name.push_back(' ');
        name += a;
    }
    return name;
}

struct Binding {
    const std::vector<TypedName>* params = nullptr;
    std::vector<std::string> values;

    std::string resolve(const std::string& arg) const {
        if (arg.empty() || arg[0] != '?')
            return arg;
        for (size_t k = 0; k < params->size(); ++k)
            if ((*params)[k].name == arg)
                return values[k];
        throw GroundingError("unbound variable " + arg);
    }
};

} // namespace

GroundProblem ground(const DomainAst& domain, const ProblemAst& problem,
                     const GroundOptions& options) {
    if (problem.domain_name != domain.name)
        throw GroundingError("problem '" + problem.name + "' declares domain '" +
                             problem.domain_name + "' but was grounded against '" +
                             domain.name + "'");

    TypeHierarchy types;
    for (const auto& [name, parent] : domain.types)
        types.parent[name] = parent;

    // Constants and problem objects form one object pool, declaration order.
    std::vector<TypedName> objects = domain.constants;
    objects.insert(objects.end(), problem.objects.begin(), problem.objects.end());
    std::unordered_map<std::string, std::string> object_type;
    for (const auto& obj : objects) {
        if (!types.declared(obj.type))
            throw GroundingError("object '" + obj.name + "' has undeclared type '" + obj.type + "'");
        if (!object_type.emplace(obj.name, obj.type).second)
            throw GroundingError("duplicate object '" + obj.name + "'");
    }

    std::unordered_map<std::string, size_t> predicate_arity;
    for (const auto& p : domain.predicates)
        predicate_arity[p.name] = p.params.size();
    auto check_ground_atom = [&](const Literal& lit, const char* where) {
        auto it = predicate_arity.find(lit.predicate);
        if (it == predicate_arity.end())
            throw GroundingError(std::string(where) + ": undeclared predicate '" +
                                 lit.predicate + "'");
        if (it->second != lit.args.size())
            throw GroundingError(std::string(where) + ": arity mismatch for '" +
                                 lit.predicate + "'");
        for (const auto& arg : lit.args)
            if (!object_type.count(arg))
                throw GroundingError(std::string(where) + ": undeclared object '" + arg + "'");
    };
    for (const auto& lit : problem.init)
        check_ground_atom(lit, ":init");
    for (const auto& lit : problem.goal)
        check_ground_atom(lit, ":goal");

    GroundProblem raw;
    std::vector<std::string> warnings;

    // Interning order is fixed: init atoms, then each ground action's
    // pre/add/del in enumeration order, then goal atoms.
    std::vector<PropId> init_ids;
    for (const auto& lit : problem.init)
        init_ids.push_back(raw.intern_prop(ground_atom_name(lit.predicate, lit.args)));

    for (const auto& schema : domain.actions) {
        // Candidate objects per parameter, respecting the type hierarchy.
        std::vector<std::vector<std::string>> candidates(schema.params.size());
        for (size_t k = 0; k < schema.params.size(); ++k)
            for (const auto& obj : objects)
                if (types.is_subtype(obj.type, schema.params[k].type))
                    candidates[k].push_back(obj.name);

        Binding binding;
        binding.params = &schema.params;
        binding.values.assign(schema.params.size(), "");

        auto instantiate = [&]() {
            Action action;
            action.id = static_cast<ActionId>(raw.actions.size());
            action.name = ground_atom_name(schema.name, binding.values);
            auto intern_args = [&](const Literal& lit) {
                std::vector<std::string> args;
                args.reserve(lit.args.size());
                for (const auto& a : lit.args)
                    args.push_back(binding.resolve(a));
                return raw.intern_prop(ground_atom_name(lit.predicate, args));
            };
            for (const auto& lit : schema.precondition)
                action.pre.push_back(intern_args(lit));
            for (const auto& lit : schema.effects)
                (lit.negated ? action.del : action.add).push_back(intern_args(lit));
            auto normalize = [](std::vector<PropId>& v) {
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
            };
            normalize(action.pre);
            normalize(action.add);
            normalize(action.del);
            // Conflicting effects: add wins, matching (s - del) u add.
            std::vector<PropId> cleaned_del;
            for (PropId p : action.del) {
                if (std::binary_search(action.add.begin(), action.add.end(), p))
                    warnings.push_back("action '" + action.name + "' both adds and deletes '" +
                                       raw.prop_names[static_cast<size_t>(p)] +
                                       "'; keeping the add");
                else
                    cleaned_del.push_back(p);
            }
            action.del = std::move(cleaned_del);
            raw.actions.push_back(std::move(action));
        };

        // Depth-first cartesian instantiation over parameter candidates.
        std::vector<size_t> cursor(schema.params.size(), 0);
        if (schema.params.empty()) {
            instantiate();
        } else {
            size_t depth = 0;
            for (;;) {
                if (cursor[depth] == candidates[depth].size()) {
                    if (depth == 0)
                        break;
                    cursor[depth] = 0;
                    --depth;
                    ++cursor[depth];
                    continue;
                }
                binding.values[depth] = candidates[depth][cursor[depth]];
                if (depth + 1 == schema.params.size()) {
                    instantiate();
                    ++cursor[depth];
                } else {
                    ++depth;
                }
            }
        }
    }

    std::vector<PropId> goal_ids;
    for (const auto& lit : problem.goal)
        goal_ids.push_back(raw.intern_prop(ground_atom_name(lit.predicate, lit.args)));

    raw.init = State(raw.num_props());
    for (PropId p : init_ids)
        raw.init.set(p);
    raw.goal = goal_ids;
    std::sort(raw.goal.begin(), raw.goal.end());
    raw.goal.erase(std::unique(raw.goal.begin(), raw.goal.end()), raw.goal.end());

    if (!options.prune_unreachable) {
        raw.grounding_warnings = std::move(warnings);
        return raw;
    }

    // Delete-relaxation reachability pruning: keep exactly the actions that
    // fire in the relaxed fixpoint from s0, then re-intern densely.
    RelaxedPlanningGraph rpg = build_rpg(raw.actions, raw.init);

    GroundProblem pruned;
    std::vector<PropId> pruned_init;
    for (PropId p : init_ids)
        pruned_init.push_back(pruned.intern_prop(raw.prop_name(p)));
    for (const Action& a : raw.actions) {
        if (rpg.act_level[static_cast<size_t>(a.id)] < 0)
            continue;
        Action kept;
        kept.id = static_cast<ActionId>(pruned.actions.size());
        kept.name = a.name;
        auto remap = [&](const std::vector<PropId>& ids) {
            std::vector<PropId> out;
            out.reserve(ids.size());
            for (PropId p : ids)
                out.push_back(pruned.intern_prop(raw.prop_name(p)));
            std::sort(out.begin(), out.end());
            return out;
        };
        kept.pre = remap(a.pre);
        kept.add = remap(a.add);
        kept.del = remap(a.del);
        pruned.actions.push_back(std::move(kept));
    }
    for (PropId p : raw.goal)
        pruned.goal.push_back(pruned.intern_prop(raw.prop_name(p)));
    std::sort(pruned.goal.begin(), pruned.goal.end());

    pruned.init = State(pruned.num_props());
    for (PropId p : pruned_init)
        pruned.init.set(p);
    pruned.grounding_warnings = std::move(warnings);
    return pruned;
}

} // namespace lrtp::pddl
