#pragma once

// Untyped lambda calculus with integers, addition and a zero test, and three small-step
// semantics: full (nondeterministic, congruence everywhere except inside if0 branches and a
// beta-redex's operands), lazy (beta first, function before argument) and strict (function and
// argument to values, then beta).
//
// Concrete syntax:  \x -> e   |   e e   |   e + e   |   if0 e then e else e   |   x   |   n
// Abstraction bodies extend as far right as possible; application binds tighter than `+`.

#include "sosw/render.hpp"
#include "sosw/sos.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sosw::lambda {

using Int = boost::multiprecision::cpp_int;

struct Node;

/// Immutable, structurally compared term. Copies share the underlying tree.
class Term {
public:
    enum class Kind { var, app, lam, val, add, if0 };

    static Term var(std::string name);
    static Term app(Term fun, Term arg);
    static Term lam(std::string binder, Term body);
    static Term val(Int n);
    static Term add(Term lhs, Term rhs);
    static Term if0(Term guard, Term then_branch, Term else_branch);

    [[nodiscard]] Kind kind() const;
    /// Variable name or binder.
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] const Int& value() const;
    [[nodiscard]] const Term& child(std::size_t i) const;
    [[nodiscard]] std::size_t arity() const;
    [[nodiscard]] std::size_t hash() const;
    /// Number of nodes.
    [[nodiscard]] std::size_t size() const;

    [[nodiscard]] bool is(Kind k) const { return kind() == k; }
    /// Integers and abstractions.
    [[nodiscard]] bool is_value() const { return is(Kind::val) || is(Kind::lam); }

    bool operator==(const Term& other) const;

private:
    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

struct Node {
    Term::Kind kind;
    std::string name;
    Int value;
    std::vector<Term> children;
    std::size_t hash = 0;
    std::size_t size = 1;
};

/// Pretty form, re-parseable.
std::string to_string(const Term& t);
/// Constructor form, e.g. `App(Lam(x,Add(Var(x),Val(1))),Val(2))`.
std::string debug_string(const Term& t);

Term parse_lambda(std::string_view text);

std::set<std::string> free_vars(const Term& t);

/// Capture-avoiding substitution of `arg` for the free occurrences of `x` in `body`.
Term subst(const Term& body, const std::string& x, const Term& arg);

using Steps = std::vector<std::pair<Label, Term>>;

Steps full_next(const Term& t);
Steps lazy_next(const Term& t);
Steps strict_next(const Term& t);

struct FullSemantics {
    using State = Term;
    [[nodiscard]] Steps next(const Term& t) const { return full_next(t); }
};

struct LazySemantics {
    using State = Term;
    [[nodiscard]] Steps next(const Term& t) const { return lazy_next(t); }
};

struct StrictSemantics {
    using State = Term;
    [[nodiscard]] Steps next(const Term& t) const { return strict_next(t); }
};

TreeNode to_tree(const Term& t);

inline View to_mermaid(const Term& t) { return ast_to_mermaid(to_tree(t)); }

} // namespace sosw::lambda

template <>
struct std::hash<sosw::lambda::Term> {
    std::size_t operator()(const sosw::lambda::Term& t) const noexcept { return t.hash(); }
};
