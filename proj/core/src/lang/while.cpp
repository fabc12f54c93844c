#include "sosw/lang/while.hpp"

#include "lexer.hpp"

#include <boost/functional/hash.hpp>

#include <algorithm>
#include <set>

namespace sosw::whilelang {

struct AExp::Data {
    Op op;
    Int value;
    std::string name;
    std::vector<AExp> kids;
    std::size_t hash = 0;
};

struct BExp::Data {
    Op op;
    std::vector<AExp> exps;
    std::vector<BExp> kids;
    std::size_t hash = 0;
};

struct Cmd::Data {
    Op op;
    std::string var;
    std::optional<AExp> value;
    std::optional<BExp> cond;
    std::optional<BExp> invariant;
    std::vector<Cmd> kids;
    std::size_t hash = 0;
};

namespace {

[[noreturn]] void wrong_shape(const char* what) { throw std::logic_error(std::string("no ") + what + " here"); }

template <class T>
std::size_t hash_opt(const std::optional<T>& v)
{
    return v ? v->hash() : 0x9e37;
}

} // namespace

// ---------------------------------------------------------------------------------------------
// Construction and access

AExp AExp::num(Int n)
{
    auto d = std::make_shared<Data>(Data{Op::num, std::move(n), {}, {}});
    d->hash = hash_value(d->value);
    return AExp(std::move(d));
}

AExp AExp::var(std::string name)
{
    auto d = std::make_shared<Data>(Data{Op::var, 0, std::move(name), {}});
    d->hash = std::hash<std::string>{}(d->name) ^ 0x51;
    return AExp(std::move(d));
}

AExp AExp::bin(Op op, AExp lhs, AExp rhs)
{
    if (op == Op::num || op == Op::var)
        throw std::invalid_argument("not a binary arithmetic operator");
    auto d = std::make_shared<Data>(Data{op, 0, {}, {std::move(lhs), std::move(rhs)}});
    std::size_t seed = static_cast<std::size_t>(op);
    boost::hash_combine(seed, d->kids[0].hash());
    boost::hash_combine(seed, d->kids[1].hash());
    d->hash = seed;
    return AExp(std::move(d));
}

AExp::Op AExp::op() const { return d_->op; }
const Int& AExp::value() const { return d_->value; }
const std::string& AExp::name() const { return d_->name; }
const AExp& AExp::lhs() const
{
    if (d_->kids.empty())
        wrong_shape("operand");
    return d_->kids[0];
}
const AExp& AExp::rhs() const
{
    if (d_->kids.empty())
        wrong_shape("operand");
    return d_->kids[1];
}
std::size_t AExp::hash() const { return d_->hash; }

bool AExp::operator==(const AExp& o) const
{
    return d_ == o.d_ || (d_->hash == o.d_->hash && d_->op == o.d_->op && d_->value == o.d_->value &&
                          d_->name == o.d_->name && d_->kids == o.d_->kids);
}

BExp BExp::truth(bool value) { return BExp(std::make_shared<Data>(Data{value ? Op::tt : Op::ff, {}, {}, value ? 1u : 2u})); }

BExp BExp::compare(Op op, AExp lhs, AExp rhs)
{
    if (op != Op::eq && op != Op::le && op != Op::lt)
        throw std::invalid_argument("not a comparison operator");
    auto d = std::make_shared<Data>(Data{op, {std::move(lhs), std::move(rhs)}, {}});
    std::size_t seed = static_cast<std::size_t>(op) + 16;
    boost::hash_combine(seed, d->exps[0].hash());
    boost::hash_combine(seed, d->exps[1].hash());
    d->hash = seed;
    return BExp(std::move(d));
}

BExp BExp::negate(BExp operand)
{
    auto d = std::make_shared<Data>(Data{Op::negation, {}, {std::move(operand)}});
    std::size_t seed = 0x77;
    boost::hash_combine(seed, d->kids[0].hash());
    d->hash = seed;
    return BExp(std::move(d));
}

BExp BExp::bin(Op op, BExp lhs, BExp rhs)
{
    if (op != Op::conj && op != Op::disj && op != Op::implies)
        throw std::invalid_argument("not a boolean connective");
    auto d = std::make_shared<Data>(Data{op, {}, {std::move(lhs), std::move(rhs)}});
    std::size_t seed = static_cast<std::size_t>(op) + 32;
    boost::hash_combine(seed, d->kids[0].hash());
    boost::hash_combine(seed, d->kids[1].hash());
    d->hash = seed;
    return BExp(std::move(d));
}

BExp::Op BExp::op() const { return d_->op; }
const AExp& BExp::left_exp() const
{
    if (d_->exps.empty())
        wrong_shape("comparison");
    return d_->exps[0];
}
const AExp& BExp::right_exp() const
{
    if (d_->exps.empty())
        wrong_shape("comparison");
    return d_->exps[1];
}
const BExp& BExp::lhs() const
{
    if (d_->kids.empty())
        wrong_shape("operand");
    return d_->kids[0];
}
const BExp& BExp::rhs() const
{
    if (d_->kids.size() < 2)
        wrong_shape("right operand");
    return d_->kids[1];
}
std::size_t BExp::hash() const { return d_->hash; }

bool BExp::operator==(const BExp& o) const
{
    return d_ == o.d_ || (d_->hash == o.d_->hash && d_->op == o.d_->op && d_->exps == o.d_->exps &&
                          d_->kids == o.d_->kids);
}

namespace {

template <class D>
std::shared_ptr<D> finish(std::shared_ptr<D> d)
{
    std::size_t seed = static_cast<std::size_t>(d->op) + 64;
    boost::hash_combine(seed, d->var);
    boost::hash_combine(seed, hash_opt(d->value));
    boost::hash_combine(seed, hash_opt(d->cond));
    boost::hash_combine(seed, hash_opt(d->invariant));
    for (const auto& k : d->kids)
        boost::hash_combine(seed, k.hash());
    d->hash = seed;
    return d;
}

} // namespace

Cmd Cmd::skip()
{
    static const Cmd instance(finish(std::make_shared<Data>(Data{Op::skip, {}, {}, {}, {}, {}})));
    return instance;
}

Cmd Cmd::assign(std::string var, AExp value)
{
    return Cmd(finish(std::make_shared<Data>(Data{Op::assign, std::move(var), std::move(value), {}, {}, {}})));
}

Cmd Cmd::seq(Cmd first, Cmd second)
{
    return Cmd(finish(std::make_shared<Data>(Data{Op::seq, {}, {}, {}, {}, {std::move(first), std::move(second)}})));
}

Cmd Cmd::ite(BExp cond, Cmd then_branch, Cmd else_branch)
{
    return Cmd(finish(std::make_shared<Data>(
        Data{Op::ite, {}, {}, std::move(cond), {}, {std::move(then_branch), std::move(else_branch)}})));
}

Cmd Cmd::loop(BExp cond, std::optional<BExp> invariant, Cmd body)
{
    return Cmd(finish(
        std::make_shared<Data>(Data{Op::loop, {}, {}, std::move(cond), std::move(invariant), {std::move(body)}})));
}

Cmd Cmd::assertion(BExp cond)
{
    return Cmd(finish(std::make_shared<Data>(Data{Op::assertion, {}, {}, std::move(cond), {}, {}})));
}

Cmd::Op Cmd::op() const { return d_->op; }
const std::string& Cmd::var() const { return d_->var; }
const AExp& Cmd::value() const
{
    if (!d_->value)
        wrong_shape("assigned expression");
    return *d_->value;
}
const BExp& Cmd::cond() const
{
    if (!d_->cond)
        wrong_shape("condition");
    return *d_->cond;
}
const std::optional<BExp>& Cmd::invariant() const { return d_->invariant; }
const Cmd& Cmd::first() const
{
    if (d_->kids.empty())
        wrong_shape("sub-command");
    return d_->kids[0];
}
const Cmd& Cmd::second() const
{
    if (d_->kids.size() < 2)
        wrong_shape("second sub-command");
    return d_->kids[1];
}
std::size_t Cmd::hash() const { return d_->hash; }

bool Cmd::operator==(const Cmd& o) const
{
    return d_ == o.d_ || (d_->hash == o.d_->hash && d_->op == o.d_->op && d_->var == o.d_->var &&
                          d_->value == o.d_->value && d_->cond == o.d_->cond && d_->invariant == o.d_->invariant &&
                          d_->kids == o.d_->kids);
}

// ---------------------------------------------------------------------------------------------
// Printing

namespace {

int precedence(AExp::Op op)
{
    switch (op) {
    case AExp::Op::add:
    case AExp::Op::sub:
        return 1;
    case AExp::Op::mul:
        return 2;
    default:
        return 3;
    }
}

std::string print(const AExp& a, int min_prec)
{
    std::string out;
    switch (a.op()) {
    case AExp::Op::num:
        return a.value() < 0 ? "(0 - " + Int(-a.value()).str() + ")" : a.value().str();
    case AExp::Op::var:
        return a.name();
    case AExp::Op::add:
    case AExp::Op::sub:
    case AExp::Op::mul: {
        const int p = precedence(a.op());
        const char* sym = a.op() == AExp::Op::add ? " + " : a.op() == AExp::Op::sub ? " - " : " * ";
        out = print(a.lhs(), p) + sym + print(a.rhs(), p + 1);
        return p < min_prec ? "(" + out + ")" : out;
    }
    }
    return out;
}

int precedence(BExp::Op op)
{
    switch (op) {
    case BExp::Op::implies:
        return 1;
    case BExp::Op::disj:
        return 2;
    case BExp::Op::conj:
        return 3;
    case BExp::Op::negation:
        return 4;
    default:
        return 5;
    }
}

std::string print(const BExp& b, int min_prec)
{
    switch (b.op()) {
    case BExp::Op::tt:
        return "tt";
    case BExp::Op::ff:
        return "ff";
    case BExp::Op::eq:
        return print(b.left_exp(), 0) + " = " + print(b.right_exp(), 0);
    case BExp::Op::le:
        return print(b.left_exp(), 0) + " <= " + print(b.right_exp(), 0);
    case BExp::Op::lt:
        return print(b.left_exp(), 0) + " < " + print(b.right_exp(), 0);
    case BExp::Op::negation: {
        const BExp& inner = b.lhs();
        bool bare = inner.op() == BExp::Op::tt || inner.op() == BExp::Op::ff || inner.op() == BExp::Op::negation;
        return "not " + (bare ? print(inner, 4) : "(" + print(inner, 0) + ")");
    }
    case BExp::Op::conj:
    case BExp::Op::disj:
    case BExp::Op::implies: {
        const int p = precedence(b.op());
        const char* sym = b.op() == BExp::Op::conj ? " and " : b.op() == BExp::Op::disj ? " or " : " ==> ";
        // `==>` groups to the right, `and`/`or` to the left.
        bool right_assoc = b.op() == BExp::Op::implies;
        std::string out = print(b.lhs(), right_assoc ? p + 1 : p) + sym + print(b.rhs(), right_assoc ? p : p + 1);
        return p < min_prec ? "(" + out + ")" : out;
    }
    }
    return {};
}

std::string print(const Cmd& c, bool nested)
{
    switch (c.op()) {
    case Cmd::Op::skip:
        return "skip";
    case Cmd::Op::assign:
        return c.var() + " := " + print(c.value(), 0);
    case Cmd::Op::assertion:
        return "assert " + print(c.cond(), 0);
    case Cmd::Op::seq: {
        std::string out = print(c.first(), true) + "; " + print(c.second(), false);
        return nested ? "(" + out + ")" : out;
    }
    case Cmd::Op::ite:
        return "if " + print(c.cond(), 0) + " then " + print(c.first(), true) + " else " + print(c.second(), true);
    case Cmd::Op::loop: {
        std::string out = "while " + print(c.cond(), 0);
        if (c.invariant())
            out += " inv " + print(*c.invariant(), 0);
        return out + " do " + print(c.first(), true);
    }
    }
    return {};
}

} // namespace

std::string to_string(const AExp& a) { return print(a, 0); }
std::string to_string(const BExp& b) { return print(b, 0); }
std::string to_string(const Cmd& c) { return print(c, false); }

std::string to_string(const Store& store)
{
    std::string out = "{";
    bool first = true;
    for (const auto& [x, v] : store) {
        if (!first)
            out += ", ";
        first = false;
        out += x + " ↦ " + v.str();
    }
    return out + "}";
}

std::string to_string(const Config& cfg)
{
    switch (cfg.status) {
    case Config::Status::running:
        return "⟨" + to_string(cfg.cmd) + ", " + to_string(cfg.store) + "⟩";
    case Config::Status::done:
        return "⟨done, " + to_string(cfg.store) + "⟩";
    case Config::Status::failed:
        return "⟨assertion failed, " + to_string(cfg.store) + "⟩";
    }
    return {};
}

TreeNode to_tree(const Cmd& c)
{
    switch (c.op()) {
    case Cmd::Op::skip:
        return {"skip", {}};
    case Cmd::Op::assign:
        return {c.var() + " := " + to_string(c.value()), {}};
    case Cmd::Op::assertion:
        return {"assert " + to_string(c.cond()), {}};
    case Cmd::Op::seq:
        return {";", {to_tree(c.first()), to_tree(c.second())}};
    case Cmd::Op::ite:
        return {"if " + to_string(c.cond()), {to_tree(c.first()), to_tree(c.second())}};
    case Cmd::Op::loop:
        return {"while " + to_string(c.cond()), {to_tree(c.first())}};
    }
    return {};
}

// ---------------------------------------------------------------------------------------------
// Parsing

namespace {

const std::vector<std::string> kSymbols{":=", ";", "(", ")", "{", "}", "+", "-", "*", "=", "<=", "<", "==>"};
const std::set<std::string> kKeywords{"skip", "if", "then", "else", "while", "do", "inv",
                                      "assert", "tt", "ff", "not", "and", "or"};

class Parser {
public:
    explicit Parser(std::string_view text) : in_(detail::tokenize(text, kSymbols, kKeywords)) {}

    Cmd command_only()
    {
        Cmd c = command();
        if (!in_.at_end())
            in_.fail({"';'", "end of input"});
        return c;
    }

    BExp bexp_only()
    {
        BExp b = bexp();
        if (!in_.at_end())
            in_.fail({"end of input"});
        return b;
    }

private:
    Cmd command()
    {
        Cmd first = simple();
        if (in_.accept(";"))
            return Cmd::seq(std::move(first), command());
        return first;
    }

    Cmd simple()
    {
        if (in_.accept("skip"))
            return Cmd::skip();
        if (in_.accept("assert"))
            return Cmd::assertion(bexp());
        if (in_.accept("if")) {
            BExp b = bexp();
            in_.expect("then");
            Cmd c1 = simple();
            in_.expect("else");
            Cmd c2 = simple();
            return Cmd::ite(std::move(b), std::move(c1), std::move(c2));
        }
        if (in_.accept("while")) {
            BExp b = bexp();
            std::optional<BExp> inv;
            if (in_.accept("inv"))
                inv = bexp();
            in_.expect("do");
            return Cmd::loop(std::move(b), std::move(inv), simple());
        }
        if (in_.accept("(")) {
            Cmd c = command();
            in_.expect(")");
            return c;
        }
        if (in_.accept("{")) {
            Cmd c = command();
            in_.expect("}");
            return c;
        }
        if (in_.peek().kind == detail::Token::Kind::ident) {
            std::string x = in_.next().text;
            in_.expect(":=");
            return Cmd::assign(std::move(x), aexp());
        }
        in_.fail({"command"});
    }

    BExp bexp()
    {
        BExp lhs = disjunction();
        if (in_.accept("==>"))
            return BExp::bin(BExp::Op::implies, std::move(lhs), bexp());
        return lhs;
    }

    BExp disjunction()
    {
        BExp lhs = conjunction();
        while (in_.accept("or"))
            lhs = BExp::bin(BExp::Op::disj, std::move(lhs), conjunction());
        return lhs;
    }

    BExp conjunction()
    {
        BExp lhs = negation();
        while (in_.accept("and"))
            lhs = BExp::bin(BExp::Op::conj, std::move(lhs), negation());
        return lhs;
    }

    BExp negation()
    {
        if (in_.accept("not"))
            return BExp::negate(negation());
        return batom();
    }

    BExp batom()
    {
        if (in_.accept("tt"))
            return BExp::truth(true);
        if (in_.accept("ff"))
            return BExp::truth(false);
        if (in_.is("(")) {
            // Either a parenthesised arithmetic operand of a comparison or a parenthesised formula.
            const std::size_t mark = in_.position();
            try {
                return comparison();
            } catch (const ParseError&) {
                in_.rewind(mark);
            }
            in_.expect("(");
            BExp inner = bexp();
            in_.expect(")");
            return inner;
        }
        return comparison();
    }

    BExp comparison()
    {
        AExp lhs = aexp();
        BExp::Op op;
        if (in_.accept("="))
            op = BExp::Op::eq;
        else if (in_.accept("<="))
            op = BExp::Op::le;
        else if (in_.accept("<"))
            op = BExp::Op::lt;
        else
            in_.fail({"'='", "'<='", "'<'"});
        return BExp::compare(op, std::move(lhs), aexp());
    }

    AExp aexp()
    {
        AExp lhs = term();
        while (true) {
            if (in_.accept("+"))
                lhs = AExp::bin(AExp::Op::add, std::move(lhs), term());
            else if (in_.accept("-"))
                lhs = AExp::bin(AExp::Op::sub, std::move(lhs), term());
            else
                return lhs;
        }
    }

    AExp term()
    {
        AExp lhs = factor();
        while (in_.accept("*"))
            lhs = AExp::bin(AExp::Op::mul, std::move(lhs), factor());
        return lhs;
    }

    AExp factor()
    {
        const detail::Token& t = in_.peek();
        if (t.kind == detail::Token::Kind::number)
            return AExp::num(Int(in_.next().text));
        if (t.kind == detail::Token::Kind::ident)
            return AExp::var(in_.next().text);
        if (in_.accept("(")) {
            AExp inner = aexp();
            in_.expect(")");
            return inner;
        }
        in_.fail({"number", "variable", "'('"});
    }

    detail::TokenStream in_;
};

} // namespace

Cmd parse_while(std::string_view text) { return Parser(text).command_only(); }
BExp parse_bexp(std::string_view text) { return Parser(text).bexp_only(); }

// ---------------------------------------------------------------------------------------------
// Evaluation and substitution

Int eval(const AExp& a, const Store& store)
{
    switch (a.op()) {
    case AExp::Op::num:
        return a.value();
    case AExp::Op::var: {
        auto it = store.find(a.name());
        if (it == store.end())
            throw EvalError("unbound variable '" + a.name() + "'");
        return it->second;
    }
    case AExp::Op::add:
        return eval(a.lhs(), store) + eval(a.rhs(), store);
    case AExp::Op::sub:
        return eval(a.lhs(), store) - eval(a.rhs(), store);
    case AExp::Op::mul:
        return eval(a.lhs(), store) * eval(a.rhs(), store);
    }
    return 0;
}

bool eval(const BExp& b, const Store& store)
{
    switch (b.op()) {
    case BExp::Op::tt:
        return true;
    case BExp::Op::ff:
        return false;
    case BExp::Op::eq:
        return eval(b.left_exp(), store) == eval(b.right_exp(), store);
    case BExp::Op::le:
        return eval(b.left_exp(), store) <= eval(b.right_exp(), store);
    case BExp::Op::lt:
        return eval(b.left_exp(), store) < eval(b.right_exp(), store);
    case BExp::Op::negation:
        return !eval(b.lhs(), store);
    case BExp::Op::conj:
        return eval(b.lhs(), store) && eval(b.rhs(), store);
    case BExp::Op::disj:
        return eval(b.lhs(), store) || eval(b.rhs(), store);
    case BExp::Op::implies:
        return !eval(b.lhs(), store) || eval(b.rhs(), store);
    }
    return false;
}

AExp subst(const AExp& a, const std::string& x, const AExp& by)
{
    switch (a.op()) {
    case AExp::Op::num:
        return a;
    case AExp::Op::var:
        return a.name() == x ? by : a;
    default:
        return AExp::bin(a.op(), subst(a.lhs(), x, by), subst(a.rhs(), x, by));
    }
}

BExp subst(const BExp& b, const std::string& x, const AExp& by)
{
    switch (b.op()) {
    case BExp::Op::tt:
    case BExp::Op::ff:
        return b;
    case BExp::Op::eq:
    case BExp::Op::le:
    case BExp::Op::lt:
        return BExp::compare(b.op(), subst(b.left_exp(), x, by), subst(b.right_exp(), x, by));
    case BExp::Op::negation:
        return BExp::negate(subst(b.lhs(), x, by));
    default:
        return BExp::bin(b.op(), subst(b.lhs(), x, by), subst(b.rhs(), x, by));
    }
}

// ---------------------------------------------------------------------------------------------
// Small-step semantics

std::vector<std::pair<Label, Config>> small_step(const Config& cfg)
{
    if (cfg.status != Config::Status::running)
        return {};
    const Cmd& c = cfg.cmd;
    const Store& s = cfg.store;
    switch (c.op()) {
    case Cmd::Op::skip:
        return {};
    case Cmd::Op::assign: {
        Int v = eval(c.value(), s);
        Store next = s;
        next[c.var()] = v;
        return {{Label("asg[" + c.var() + ":=" + v.str() + "]"), Config::finished(std::move(next))}};
    }
    case Cmd::Op::seq: {
        if (c.first().op() == Cmd::Op::skip)
            return {{Label("skip"), Config::start(c.second(), s)}};
        auto inner = small_step(Config::start(c.first(), s));
        std::vector<std::pair<Label, Config>> out;
        for (auto& [label, to] : inner) {
            switch (to.status) {
            case Config::Status::done:
                out.emplace_back(label, Config::start(c.second(), std::move(to.store)));
                break;
            case Config::Status::failed:
                out.emplace_back(label, std::move(to));
                break;
            case Config::Status::running:
                out.emplace_back(label, Config::start(Cmd::seq(to.cmd, c.second()), std::move(to.store)));
                break;
            }
        }
        return out;
    }
    case Cmd::Op::ite:
        if (eval(c.cond(), s))
            return {{Label("if-tt"), Config::start(c.first(), s)}};
        return {{Label("if-ff"), Config::start(c.second(), s)}};
    case Cmd::Op::loop:
        return {{Label("while-unfold"),
                 Config::start(Cmd::ite(c.cond(), Cmd::seq(c.first(), c), Cmd::skip()), s)}};
    case Cmd::Op::assertion:
        if (eval(c.cond(), s))
            return {{Label("assert-ok"), Config::finished(s)}};
        return {{Label("assert-fail"), Config::failure(s)}};
    }
    return {};
}

bool is_final(const Config& cfg)
{
    return cfg.status == Config::Status::done ||
           (cfg.status == Config::Status::running && cfg.cmd.op() == Cmd::Op::skip);
}

// ---------------------------------------------------------------------------------------------
// Natural semantics

namespace {

struct Runner {
    std::size_t fuel;

    BigStepResult run(const Cmd& c, Store s)
    {
        switch (c.op()) {
        case Cmd::Op::skip:
            return {BigStepResult::Kind::ok, std::move(s), {}};
        case Cmd::Op::assign: {
            Int v = eval(c.value(), s);
            s[c.var()] = std::move(v);
            return {BigStepResult::Kind::ok, std::move(s), {}};
        }
        case Cmd::Op::seq: {
            BigStepResult r = run(c.first(), std::move(s));
            if (r.kind != BigStepResult::Kind::ok)
                return r;
            return run(c.second(), std::move(r.store));
        }
        case Cmd::Op::ite:
            return eval(c.cond(), s) ? run(c.first(), std::move(s)) : run(c.second(), std::move(s));
        case Cmd::Op::loop:
            while (eval(c.cond(), s)) {
                if (fuel == 0)
                    return {BigStepResult::Kind::nontermination, std::move(s), {}};
                --fuel;
                BigStepResult r = run(c.first(), std::move(s));
                if (r.kind != BigStepResult::Kind::ok)
                    return r;
                s = std::move(r.store);
            }
            return {BigStepResult::Kind::ok, std::move(s), {}};
        case Cmd::Op::assertion:
            if (eval(c.cond(), s))
                return {BigStepResult::Kind::ok, std::move(s), {}};
            return {BigStepResult::Kind::assert_failure, std::move(s), c.cond()};
        }
        return {};
    }
};

} // namespace

BigStepResult big_step(const Cmd& c, const Store& store, std::size_t fuel) { return Runner{fuel}.run(c, store); }

// ---------------------------------------------------------------------------------------------
// Weakest preconditions

namespace {

BExp conj(BExp a, BExp b)
{
    if (a.op() == BExp::Op::tt)
        return b;
    if (b.op() == BExp::Op::tt)
        return a;
    return BExp::bin(BExp::Op::conj, std::move(a), std::move(b));
}

BExp implies(BExp a, BExp b)
{
    if (a.op() == BExp::Op::ff)
        return BExp::truth(true);
    return BExp::bin(BExp::Op::implies, std::move(a), std::move(b));
}

BExp wp_rec(const Cmd& c, const BExp& post, std::vector<BExp>& obligations)
{
    switch (c.op()) {
    case Cmd::Op::skip:
        return post;
    case Cmd::Op::assign:
        return subst(post, c.var(), c.value());
    case Cmd::Op::seq:
        return wp_rec(c.first(), wp_rec(c.second(), post, obligations), obligations);
    case Cmd::Op::ite:
        return conj(implies(c.cond(), wp_rec(c.first(), post, obligations)),
                    implies(BExp::negate(c.cond()), wp_rec(c.second(), post, obligations)));
    case Cmd::Op::assertion:
        return conj(c.cond(), post);
    case Cmd::Op::loop: {
        if (!c.invariant())
            throw EvalError("loop without invariant annotation: while " + to_string(c.cond()));
        const BExp& inv = *c.invariant();
        BExp body = wp_rec(c.first(), inv, obligations);
        obligations.push_back(implies(conj(inv, c.cond()), body));
        obligations.push_back(implies(conj(inv, BExp::negate(c.cond())), post));
        return inv;
    }
    }
    return post;
}

} // namespace

WpResult wp(const Cmd& c, const BExp& post)
{
    std::vector<BExp> obligations;
    BExp pre = wp_rec(c, post, obligations);
    return WpResult{std::move(pre), std::move(obligations)};
}

// ---------------------------------------------------------------------------------------------
// Warnings

namespace {

class Checker {
public:
    std::vector<std::string> warnings;

    std::set<std::string> run(const Cmd& c, std::set<std::string> defined)
    {
        switch (c.op()) {
        case Cmd::Op::skip:
            return defined;
        case Cmd::Op::assign:
            reads(c.value(), defined);
            defined.insert(c.var());
            return defined;
        case Cmd::Op::seq:
            return run(c.second(), run(c.first(), std::move(defined)));
        case Cmd::Op::ite: {
            reads(c.cond(), defined);
            std::set<std::string> a = run(c.first(), defined);
            std::set<std::string> b = run(c.second(), defined);
            std::set<std::string> both;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(both, both.end()));
            return both;
        }
        case Cmd::Op::loop:
            reads(c.cond(), defined);
            if (!c.invariant())
                warn("loop without invariant annotation");
            run(c.first(), defined);
            return defined;
        case Cmd::Op::assertion:
            reads(c.cond(), defined);
            return defined;
        }
        return defined;
    }

private:
    void warn(const std::string& message)
    {
        if (std::find(warnings.begin(), warnings.end(), message) == warnings.end())
            warnings.push_back(message);
    }

    void reads(const AExp& a, const std::set<std::string>& defined)
    {
        switch (a.op()) {
        case AExp::Op::num:
            return;
        case AExp::Op::var:
            if (!defined.count(a.name()))
                warn("variable '" + a.name() + "' may be read before assignment");
            return;
        default:
            reads(a.lhs(), defined);
            reads(a.rhs(), defined);
        }
    }

    void reads(const BExp& b, const std::set<std::string>& defined)
    {
        switch (b.op()) {
        case BExp::Op::tt:
        case BExp::Op::ff:
            return;
        case BExp::Op::eq:
        case BExp::Op::le:
        case BExp::Op::lt:
            reads(b.left_exp(), defined);
            reads(b.right_exp(), defined);
            return;
        case BExp::Op::negation:
            reads(b.lhs(), defined);
            return;
        default:
            reads(b.lhs(), defined);
            reads(b.rhs(), defined);
        }
    }
};

} // namespace

std::vector<std::string> check_while(const Cmd& c)
{
    Checker checker;
    checker.run(c, {});
    return checker.warnings;
}

} // namespace sosw::whilelang

std::size_t std::hash<sosw::whilelang::Config>::operator()(const sosw::whilelang::Config& c) const noexcept
{
    std::size_t seed = static_cast<std::size_t>(c.status);
    boost::hash_combine(seed, c.cmd.hash());
    for (const auto& [x, v] : c.store) {
        boost::hash_combine(seed, x);
        boost::hash_combine(seed, hash_value(v));
    }
    return seed;
}
