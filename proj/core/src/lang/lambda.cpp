#include "sosw/lang/lambda.hpp"

#include "lexer.hpp"

#include <boost/functional/hash.hpp>

#include <stdexcept>

namespace sosw::lambda {
namespace {

std::shared_ptr<const Node> make_node(Term::Kind kind, std::string name, Int value, std::vector<Term> children)
{
    auto node = std::make_shared<Node>(Node{kind, std::move(name), std::move(value), std::move(children)});
    std::size_t seed = static_cast<std::size_t>(kind);
    boost::hash_combine(seed, node->name);
    boost::hash_combine(seed, hash_value(node->value));
    for (const auto& c : node->children) {
        boost::hash_combine(seed, c.hash());
        node->size += c.size();
    }
    node->hash = seed;
    return node;
}

} // namespace

Term Term::var(std::string name) { return Term(make_node(Kind::var, std::move(name), 0, {})); }
Term Term::app(Term fun, Term arg) { return Term(make_node(Kind::app, {}, 0, {std::move(fun), std::move(arg)})); }
Term Term::lam(std::string binder, Term body)
{
    return Term(make_node(Kind::lam, std::move(binder), 0, {std::move(body)}));
}
Term Term::val(Int n) { return Term(make_node(Kind::val, {}, std::move(n), {})); }
Term Term::add(Term lhs, Term rhs) { return Term(make_node(Kind::add, {}, 0, {std::move(lhs), std::move(rhs)})); }
Term Term::if0(Term guard, Term then_branch, Term else_branch)
{
    return Term(make_node(Kind::if0, {}, 0, {std::move(guard), std::move(then_branch), std::move(else_branch)}));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Int& Term::value() const { return node_->value; }
const Term& Term::child(std::size_t i) const { return node_->children.at(i); }
std::size_t Term::arity() const { return node_->children.size(); }
std::size_t Term::hash() const { return node_->hash; }
std::size_t Term::size() const { return node_->size; }

bool Term::operator==(const Term& other) const
{
    if (node_ == other.node_)
        return true;
    const Node& a = *node_;
    const Node& b = *other.node_;
    return a.hash == b.hash && a.kind == b.kind && a.name == b.name && a.value == b.value &&
           a.children == b.children;
}

// ---------------------------------------------------------------------------------------------
// Printing

namespace {

enum class Pos { top, add_left, add_right, app_fun, app_arg };

std::string print(const Term& t, Pos pos)
{
    auto paren = [](bool wrap, std::string s) { return wrap ? "(" + s + ")" : s; };
    switch (t.kind()) {
    case Term::Kind::var:
        return t.name();
    case Term::Kind::val:
        return paren(t.value() < 0, t.value().str());
    case Term::Kind::lam:
        return paren(pos != Pos::top, "\\" + t.name() + " -> " + print(t.child(0), Pos::top));
    case Term::Kind::if0:
        return paren(pos != Pos::top, "if0 " + print(t.child(0), Pos::top) + " then " + print(t.child(1), Pos::top) +
                                          " else " + print(t.child(2), Pos::top));
    case Term::Kind::add:
        return paren(pos == Pos::add_right || pos == Pos::app_fun || pos == Pos::app_arg,
                     print(t.child(0), Pos::add_left) + " + " + print(t.child(1), Pos::add_right));
    case Term::Kind::app:
        return paren(pos == Pos::app_arg, print(t.child(0), Pos::app_fun) + " " + print(t.child(1), Pos::app_arg));
    }
    return {};
}

} // namespace

std::string to_string(const Term& t) { return print(t, Pos::top); }

std::string debug_string(const Term& t)
{
    switch (t.kind()) {
    case Term::Kind::var:
        return "Var(" + t.name() + ")";
    case Term::Kind::val:
        return "Val(" + t.value().str() + ")";
    case Term::Kind::lam:
        return "Lam(" + t.name() + "," + debug_string(t.child(0)) + ")";
    case Term::Kind::app:
        return "App(" + debug_string(t.child(0)) + "," + debug_string(t.child(1)) + ")";
    case Term::Kind::add:
        return "Add(" + debug_string(t.child(0)) + "," + debug_string(t.child(1)) + ")";
    case Term::Kind::if0:
        return "If0(" + debug_string(t.child(0)) + "," + debug_string(t.child(1)) + "," + debug_string(t.child(2)) +
               ")";
    }
    return {};
}

TreeNode to_tree(const Term& t)
{
    TreeNode node;
    switch (t.kind()) {
    case Term::Kind::var:
        node.label = t.name();
        break;
    case Term::Kind::val:
        node.label = t.value().str();
        break;
    case Term::Kind::lam:
        node.label = "λ" + t.name();
        break;
    case Term::Kind::app:
        node.label = "App";
        break;
    case Term::Kind::add:
        node.label = "+";
        break;
    case Term::Kind::if0:
        node.label = "if0";
        break;
    }
    for (std::size_t i = 0; i < t.arity(); ++i)
        node.children.push_back(to_tree(t.child(i)));
    return node;
}

// ---------------------------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(std::string_view text)
        : in_(detail::tokenize(text, {"\\", "λ", "->", "(", ")", "+"}, {"if0", "then", "else"}))
    {
    }

    Term parse()
    {
        Term t = expr();
        if (!in_.at_end())
            in_.fail({"'+'", "end of input"});
        return t;
    }

private:
    bool at_binder() const { return in_.is("\\") || in_.is("λ"); }
    bool at_atom() const
    {
        auto k = in_.peek().kind;
        return k == detail::Token::Kind::ident || k == detail::Token::Kind::number || in_.is("(");
    }

    Term expr()
    {
        if (at_binder())
            return abstraction();
        if (in_.is("if0"))
            return conditional();
        return sum();
    }

    Term abstraction()
    {
        in_.next();
        std::string x = in_.expect_ident("binder name").text;
        in_.expect("->");
        return Term::lam(std::move(x), expr());
    }

    Term conditional()
    {
        in_.expect("if0");
        Term guard = expr();
        in_.expect("then");
        Term then_branch = expr();
        in_.expect("else");
        Term else_branch = expr();
        return Term::if0(std::move(guard), std::move(then_branch), std::move(else_branch));
    }

    Term sum()
    {
        Term lhs = application();
        while (in_.accept("+")) {
            Term rhs = (at_binder() || in_.is("if0")) ? expr() : application();
            lhs = Term::add(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Term application()
    {
        Term head = atom();
        while (true) {
            if (at_atom()) {
                head = Term::app(std::move(head), atom());
            } else if (at_binder() || in_.is("if0")) {
                // A trailing abstraction or conditional is the last argument.
                return Term::app(std::move(head), expr());
            } else {
                return head;
            }
        }
    }

    Term atom()
    {
        const detail::Token& t = in_.peek();
        if (t.kind == detail::Token::Kind::ident)
            return Term::var(in_.next().text);
        if (t.kind == detail::Token::Kind::number)
            return Term::val(Int(in_.next().text));
        if (in_.accept("(")) {
            Term inner = expr();
            in_.expect(")");
            return inner;
        }
        in_.fail({"variable", "number", "'('", "'\\'", "'if0'"});
    }

    detail::TokenStream in_;
};

} // namespace

Term parse_lambda(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------------------------
// Substitution

namespace {

void collect_free(const Term& t, std::set<std::string>& bound, std::set<std::string>& out)
{
    switch (t.kind()) {
    case Term::Kind::var:
        if (!bound.count(t.name()))
            out.insert(t.name());
        return;
    case Term::Kind::lam: {
        bool fresh = bound.insert(t.name()).second;
        collect_free(t.child(0), bound, out);
        if (fresh)
            bound.erase(t.name());
        return;
    }
    default:
        for (std::size_t i = 0; i < t.arity(); ++i)
            collect_free(t.child(i), bound, out);
    }
}

std::string fresh_name(const std::string& name, const std::set<std::string>& avoid)
{
    std::string base = name;
    while (!base.empty() && std::isdigit(static_cast<unsigned char>(base.back())))
        base.pop_back();
    if (base.empty())
        base = name;
    for (std::size_t n = 1;; ++n) {
        std::string candidate = base + std::to_string(n);
        if (!avoid.count(candidate))
            return candidate;
    }
}

Term rebuild(const Term& t, std::vector<Term> kids)
{
    switch (t.kind()) {
    case Term::Kind::app:
        return Term::app(std::move(kids[0]), std::move(kids[1]));
    case Term::Kind::lam:
        return Term::lam(t.name(), std::move(kids[0]));
    case Term::Kind::add:
        return Term::add(std::move(kids[0]), std::move(kids[1]));
    case Term::Kind::if0:
        return Term::if0(std::move(kids[0]), std::move(kids[1]), std::move(kids[2]));
    default:
        return t;
    }
}

Term subst_rec(const Term& body, const std::string& x, const Term& arg, const std::set<std::string>& arg_free)
{
    switch (body.kind()) {
    case Term::Kind::var:
        return body.name() == x ? arg : body;
    case Term::Kind::val:
        return body;
    case Term::Kind::lam: {
        const std::string& y = body.name();
        if (y == x)
            return body;
        std::set<std::string> body_free = free_vars(body.child(0));
        if (!body_free.count(x))
            return body;
        if (!arg_free.count(y))
            return Term::lam(y, subst_rec(body.child(0), x, arg, arg_free));
        std::set<std::string> avoid = arg_free;
        avoid.insert(body_free.begin(), body_free.end());
        avoid.insert(x);
        std::string z = fresh_name(y, avoid);
        Term renamed = subst_rec(body.child(0), y, Term::var(z), {z});
        return Term::lam(z, subst_rec(renamed, x, arg, arg_free));
    }
    default: {
        std::vector<Term> kids;
        for (std::size_t i = 0; i < body.arity(); ++i)
            kids.push_back(subst_rec(body.child(i), x, arg, arg_free));
        return rebuild(body, std::move(kids));
    }
    }
}

} // namespace

std::set<std::string> free_vars(const Term& t)
{
    std::set<std::string> bound;
    std::set<std::string> out;
    collect_free(t, bound, out);
    return out;
}

Term subst(const Term& body, const std::string& x, const Term& arg)
{
    return subst_rec(body, x, arg, free_vars(arg));
}

// ---------------------------------------------------------------------------------------------
// Semantics

namespace {

Steps beta(const Term& redex)
{
    const Term& fun = redex.child(0);
    return {{Label("beta-" + fun.name()), subst(fun.child(0), fun.name(), redex.child(1))}};
}

/// Re-wraps every step of child `i` of `t`.
Steps congruence(const Term& t, std::size_t i, const Steps& inner)
{
    Steps out;
    for (const auto& [label, to] : inner) {
        std::vector<Term> kids;
        for (std::size_t k = 0; k < t.arity(); ++k)
            kids.push_back(k == i ? to : t.child(k));
        out.emplace_back(label, rebuild(t, std::move(kids)));
    }
    return out;
}

Steps first_only(Steps steps)
{
    if (steps.size() > 1)
        steps.erase(steps.begin() + 1, steps.end());
    return steps;
}

Steps fire_add(const Term& t)
{
    return {{Label("add"), Term::val(t.child(0).value() + t.child(1).value())}};
}

Steps fire_if0(const Term& t)
{
    if (t.child(0).value() == 0)
        return {{Label("if0-tt"), t.child(1)}};
    return {{Label("if0-ff"), t.child(2)}};
}

using NextFn = Steps (*)(const Term&);

/// Shared lazy/strict handling of `+` and `if0`: operands left to right, then fire.
Steps ordered_arith(const Term& t, NextFn next)
{
    if (t.is(Term::Kind::add)) {
        Steps left = first_only(next(t.child(0)));
        if (!left.empty())
            return congruence(t, 0, left);
        if (!t.child(0).is(Term::Kind::val))
            return {};
        Steps right = first_only(next(t.child(1)));
        if (!right.empty())
            return congruence(t, 1, right);
        if (!t.child(1).is(Term::Kind::val))
            return {};
        return fire_add(t);
    }
    Steps guard = first_only(next(t.child(0)));
    if (!guard.empty())
        return congruence(t, 0, guard);
    if (!t.child(0).is(Term::Kind::val))
        return {};
    return fire_if0(t);
}

} // namespace

Steps full_next(const Term& t)
{
    switch (t.kind()) {
    case Term::Kind::var:
    case Term::Kind::val:
        return {};
    case Term::Kind::lam:
        return congruence(t, 0, full_next(t.child(0)));
    case Term::Kind::app: {
        if (t.child(0).is(Term::Kind::lam))
            return beta(t);
        Steps out = congruence(t, 0, full_next(t.child(0)));
        Steps right = congruence(t, 1, full_next(t.child(1)));
        out.insert(out.end(), right.begin(), right.end());
        return out;
    }
    case Term::Kind::add: {
        if (t.child(0).is(Term::Kind::val) && t.child(1).is(Term::Kind::val))
            return fire_add(t);
        Steps out = congruence(t, 0, full_next(t.child(0)));
        Steps right = congruence(t, 1, full_next(t.child(1)));
        out.insert(out.end(), right.begin(), right.end());
        return out;
    }
    case Term::Kind::if0:
        if (t.child(0).is(Term::Kind::val))
            return fire_if0(t);
        return congruence(t, 0, full_next(t.child(0)));
    }
    return {};
}

Steps lazy_next(const Term& t)
{
    switch (t.kind()) {
    case Term::Kind::var:
    case Term::Kind::val:
        return {};
    case Term::Kind::lam:
        return congruence(t, 0, lazy_next(t.child(0)));
    case Term::Kind::app: {
        if (t.child(0).is(Term::Kind::lam))
            return beta(t);
        Steps fun = first_only(lazy_next(t.child(0)));
        if (!fun.empty())
            return congruence(t, 0, fun);
        return congruence(t, 1, first_only(lazy_next(t.child(1))));
    }
    case Term::Kind::add:
    case Term::Kind::if0:
        return ordered_arith(t, &lazy_next);
    }
    return {};
}

Steps strict_next(const Term& t)
{
    switch (t.kind()) {
    case Term::Kind::var:
    case Term::Kind::val:
        return {};
    case Term::Kind::lam:
        return congruence(t, 0, strict_next(t.child(0)));
    case Term::Kind::app: {
        const Term& fun = t.child(0);
        const Term& arg = t.child(1);
        if (fun.is(Term::Kind::lam)) {
            Steps a = first_only(strict_next(arg));
            if (!a.empty())
                return congruence(t, 1, a);
            if (arg.is_value())
                return beta(t);
            return {};
        }
        Steps f = first_only(strict_next(fun));
        if (!f.empty())
            return congruence(t, 0, f);
        return congruence(t, 1, first_only(strict_next(arg)));
    }
    case Term::Kind::add:
    case Term::Kind::if0:
        return ordered_arith(t, &strict_next);
    }
    return {};
}

} // namespace sosw::lambda
