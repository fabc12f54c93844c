#include "sosw/lang/choreo.hpp"

#include "lexer.hpp"

#include <boost/functional/hash.hpp>

namespace sosw::choreo {

struct Choreo::Data {
    Op op;
    std::string from;
    std::string to;
    std::string msg;
    std::vector<Choreo> kids;
    std::size_t hash = 0;
};

struct LocalProc::Data {
    Op op;
    std::string peer;
    std::string msg;
    std::vector<LocalProc> kids;
    std::size_t hash = 0;
};

namespace {

template <class D>
std::shared_ptr<D> hashed(std::shared_ptr<D> d, std::initializer_list<const std::string*> names)
{
    std::size_t seed = static_cast<std::size_t>(d->op) + 0x100;
    for (const std::string* n : names)
        boost::hash_combine(seed, *n);
    for (const auto& k : d->kids)
        boost::hash_combine(seed, k.hash());
    d->hash = seed;
    return d;
}

[[noreturn]] void wrong_shape(const char* what) { throw std::logic_error(std::string("no ") + what + " here"); }

} // namespace

// ---------------------------------------------------------------------------------------------
// Choreo

Choreo Choreo::end()
{
    static const Choreo instance(hashed(std::make_shared<Data>(Data{Op::end, {}, {}, {}, {}}), {}));
    return instance;
}

Choreo Choreo::interaction(std::string from, std::string to, std::string msg)
{
    if (from == to)
        throw std::invalid_argument("agent '" + from + "' cannot interact with itself");
    auto d = std::make_shared<Data>(Data{Op::interaction, std::move(from), std::move(to), std::move(msg), {}});
    return Choreo(hashed(d, {&d->from, &d->to, &d->msg}));
}

Choreo Choreo::seq(Choreo first, Choreo second)
{
    return Choreo(hashed(std::make_shared<Data>(Data{Op::seq, {}, {}, {}, {std::move(first), std::move(second)}}), {}));
}

Choreo Choreo::par(Choreo left, Choreo right)
{
    return Choreo(hashed(std::make_shared<Data>(Data{Op::par, {}, {}, {}, {std::move(left), std::move(right)}}), {}));
}

Choreo Choreo::choice(Choreo left, Choreo right)
{
    return Choreo(
        hashed(std::make_shared<Data>(Data{Op::choice, {}, {}, {}, {std::move(left), std::move(right)}}), {}));
}

Choreo::Op Choreo::op() const { return d_->op; }
const std::string& Choreo::from() const { return d_->from; }
const std::string& Choreo::to() const { return d_->to; }
const std::string& Choreo::msg() const { return d_->msg; }
const Choreo& Choreo::lhs() const
{
    if (d_->kids.empty())
        wrong_shape("operand");
    return d_->kids[0];
}
const Choreo& Choreo::rhs() const
{
    if (d_->kids.size() < 2)
        wrong_shape("operand");
    return d_->kids[1];
}
std::size_t Choreo::hash() const { return d_->hash; }

bool Choreo::operator==(const Choreo& o) const
{
    return d_ == o.d_ || (d_->hash == o.d_->hash && d_->op == o.d_->op && d_->from == o.d_->from &&
                          d_->to == o.d_->to && d_->msg == o.d_->msg && d_->kids == o.d_->kids);
}

// ---------------------------------------------------------------------------------------------
// LocalProc

LocalProc LocalProc::end()
{
    static const LocalProc instance(hashed(std::make_shared<Data>(Data{Op::end, {}, {}, {}}), {}));
    return instance;
}

LocalProc LocalProc::send(std::string to, std::string msg)
{
    auto d = std::make_shared<Data>(Data{Op::send, std::move(to), std::move(msg), {}});
    return LocalProc(hashed(d, {&d->peer, &d->msg}));
}

LocalProc LocalProc::recv(std::string from, std::string msg)
{
    auto d = std::make_shared<Data>(Data{Op::recv, std::move(from), std::move(msg), {}});
    return LocalProc(hashed(d, {&d->peer, &d->msg}));
}

LocalProc LocalProc::seq(LocalProc first, LocalProc second)
{
    return LocalProc(hashed(std::make_shared<Data>(Data{Op::seq, {}, {}, {std::move(first), std::move(second)}}), {}));
}

LocalProc LocalProc::par(LocalProc left, LocalProc right)
{
    return LocalProc(hashed(std::make_shared<Data>(Data{Op::par, {}, {}, {std::move(left), std::move(right)}}), {}));
}

LocalProc LocalProc::choice(LocalProc left, LocalProc right)
{
    return LocalProc(
        hashed(std::make_shared<Data>(Data{Op::choice, {}, {}, {std::move(left), std::move(right)}}), {}));
}

LocalProc::Op LocalProc::op() const { return d_->op; }
const std::string& LocalProc::peer() const { return d_->peer; }
const std::string& LocalProc::msg() const { return d_->msg; }
const LocalProc& LocalProc::lhs() const
{
    if (d_->kids.empty())
        wrong_shape("operand");
    return d_->kids[0];
}
const LocalProc& LocalProc::rhs() const
{
    if (d_->kids.size() < 2)
        wrong_shape("operand");
    return d_->kids[1];
}
std::size_t LocalProc::hash() const { return d_->hash; }

bool LocalProc::operator==(const LocalProc& o) const
{
    return d_ == o.d_ || (d_->hash == o.d_->hash && d_->op == o.d_->op && d_->peer == o.d_->peer &&
                          d_->msg == o.d_->msg && d_->kids == o.d_->kids);
}

// ---------------------------------------------------------------------------------------------
// Printing

namespace {

// seq = 1 (right-assoc), choice = 2, par = 3, atoms = 4
template <class T>
int level(typename T::Op op)
{
    switch (op) {
    case T::Op::seq:
        return 1;
    case T::Op::choice:
        return 2;
    case T::Op::par:
        return 3;
    default:
        return 4;
    }
}

template <class T, class Atom>
std::string print_tree(const T& t, int min_level, const Atom& atom)
{
    const int l = level<T>(t.op());
    if (l == 4)
        return atom(t);
    std::string out;
    if (t.op() == T::Op::seq)
        out = print_tree(t.lhs(), 2, atom) + "; " + print_tree(t.rhs(), 1, atom);
    else
        out = print_tree(t.lhs(), l, atom) + (t.op() == T::Op::par ? " || " : " + ") + print_tree(t.rhs(), l + 1, atom);
    return l < min_level ? "(" + out + ")" : out;
}

} // namespace

std::string to_string(const Choreo& c)
{
    return print_tree(c, 0, [](const Choreo& a) {
        return a.op() == Choreo::Op::end ? std::string("end") : a.from() + "->" + a.to() + ":" + a.msg();
    });
}

std::string to_string(const LocalProc& p)
{
    return print_tree(p, 0, [](const LocalProc& a) {
        switch (a.op()) {
        case LocalProc::Op::send:
            return a.peer() + "!" + a.msg();
        case LocalProc::Op::recv:
            return a.peer() + "?" + a.msg();
        default:
            return std::string("end");
        }
    });
}

TreeNode to_tree(const Choreo& c)
{
    switch (c.op()) {
    case Choreo::Op::end:
        return {"end", {}};
    case Choreo::Op::interaction:
        return {c.from() + "->" + c.to() + ":" + c.msg(), {}};
    case Choreo::Op::seq:
        return {";", {to_tree(c.lhs()), to_tree(c.rhs())}};
    case Choreo::Op::par:
        return {"||", {to_tree(c.lhs()), to_tree(c.rhs())}};
    case Choreo::Op::choice:
        return {"+", {to_tree(c.lhs()), to_tree(c.rhs())}};
    }
    return {};
}

// ---------------------------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(std::string_view text)
        : in_(detail::tokenize(text, {"->", ":", ";", "||", "+", "(", ")"}, {"end"}))
    {
    }

    Choreo parse()
    {
        Choreo c = sequence();
        if (!in_.at_end())
            in_.fail({"';'", "'+'", "'||'", "end of input"});
        return c;
    }

private:
    Choreo sequence()
    {
        Choreo first = choice();
        if (in_.accept(";"))
            return Choreo::seq(std::move(first), sequence());
        return first;
    }

    Choreo choice()
    {
        Choreo lhs = parallel();
        while (in_.accept("+"))
            lhs = Choreo::choice(std::move(lhs), parallel());
        return lhs;
    }

    Choreo parallel()
    {
        Choreo lhs = atom();
        while (in_.accept("||"))
            lhs = Choreo::par(std::move(lhs), atom());
        return lhs;
    }

    Choreo atom()
    {
        if (in_.accept("end"))
            return Choreo::end();
        if (in_.accept("(")) {
            Choreo inner = sequence();
            in_.expect(")");
            return inner;
        }
        if (in_.peek().kind != detail::Token::Kind::ident)
            in_.fail({"agent name", "'end'", "'('"});
        detail::Token from = in_.next();
        in_.expect("->");
        std::string to = in_.expect_ident("agent name").text;
        in_.expect(":");
        std::string msg = in_.expect_ident("message name").text;
        if (from.text == to)
            in_.fail_at(from, "agent '" + to + "' cannot send to itself");
        return Choreo::interaction(from.text, std::move(to), std::move(msg));
    }

    detail::TokenStream in_;
};

void collect_agents(const Choreo& c, std::set<std::string>& out)
{
    if (c.op() == Choreo::Op::interaction) {
        out.insert(c.from());
        out.insert(c.to());
    } else if (c.op() != Choreo::Op::end) {
        collect_agents(c.lhs(), out);
        collect_agents(c.rhs(), out);
    }
}

} // namespace

Choreo parse_choreo(std::string_view text) { return Parser(text).parse(); }

std::set<std::string> agents(const Choreo& c)
{
    std::set<std::string> out;
    collect_agents(c, out);
    return out;
}

// ---------------------------------------------------------------------------------------------
// Semantics

namespace {

template <class T>
bool terminable_tree(const T& t)
{
    switch (t.op()) {
    case T::Op::end:
        return true;
    case T::Op::seq:
    case T::Op::par:
        return terminable_tree(t.lhs()) && terminable_tree(t.rhs());
    case T::Op::choice:
        return terminable_tree(t.lhs()) || terminable_tree(t.rhs());
    default:
        return false;
    }
}

template <class T>
T seq_of(T a, T b)
{
    if (a.op() == T::Op::end)
        return b;
    if (b.op() == T::Op::end)
        return a;
    return T::seq(std::move(a), std::move(b));
}

template <class T>
T par_of(T a, T b)
{
    if (a.op() == T::Op::end)
        return b;
    if (b.op() == T::Op::end)
        return a;
    return T::par(std::move(a), std::move(b));
}

/// Shared rules for the composite operators; `base` handles the atomic actions.
template <class T, class Base>
std::vector<std::pair<Label, T>> tree_next(const T& t, const Base& base)
{
    std::vector<std::pair<Label, T>> out;
    switch (t.op()) {
    case T::Op::end:
        return out;
    case T::Op::seq: {
        for (auto& [l, next] : tree_next(t.lhs(), base))
            out.emplace_back(l, seq_of(next, t.rhs()));
        if (terminable_tree(t.lhs()))
            for (auto& step : tree_next(t.rhs(), base))
                out.push_back(std::move(step));
        return out;
    }
    case T::Op::par: {
        for (auto& [l, next] : tree_next(t.lhs(), base))
            out.emplace_back(l, par_of(next, t.rhs()));
        for (auto& [l, next] : tree_next(t.rhs(), base))
            out.emplace_back(l, par_of(t.lhs(), next));
        return out;
    }
    case T::Op::choice: {
        out = tree_next(t.lhs(), base);
        for (auto& step : tree_next(t.rhs(), base))
            out.push_back(std::move(step));
        return out;
    }
    default:
        return base(t);
    }
}

} // namespace

bool terminable(const Choreo& c) { return terminable_tree(c); }
bool terminable(const LocalProc& p) { return terminable_tree(p); }

Label global_label(const std::string& from, const std::string& to, const std::string& msg)
{
    return Label(from + "->" + to + ":" + msg);
}

Label local_label(const LocalAction& a) { return Label(a.from + "->" + a.to + (a.send ? "!" : "?") + a.msg); }

std::optional<LocalAction> parse_local_label(const Label& label)
{
    const std::string& t = label.text;
    auto arrow = t.find("->");
    if (arrow == std::string::npos)
        return std::nullopt;
    auto mark = t.find_first_of("!?", arrow + 2);
    if (mark == std::string::npos || arrow == 0 || mark == arrow + 2 || mark + 1 == t.size())
        return std::nullopt;
    return LocalAction{t.substr(0, arrow), t.substr(arrow + 2, mark - arrow - 2), t.substr(mark + 1), t[mark] == '!'};
}

std::vector<std::pair<Label, Choreo>> global_next(const Choreo& c)
{
    return tree_next(c, [](const Choreo& i) {
        return std::vector<std::pair<Label, Choreo>>{{global_label(i.from(), i.to(), i.msg()), Choreo::end()}};
    });
}

std::vector<std::pair<Label, LocalProc>> local_next(const LocalProc& p, const std::string& agent)
{
    return tree_next(p, [&agent](const LocalProc& a) {
        LocalAction act = a.op() == LocalProc::Op::send ? LocalAction{agent, a.peer(), a.msg(), true}
                                                         : LocalAction{a.peer(), agent, a.msg(), false};
        return std::vector<std::pair<Label, LocalProc>>{{local_label(act), LocalProc::end()}};
    });
}

LocalProc project(const Choreo& c, const std::string& agent)
{
    switch (c.op()) {
    case Choreo::Op::end:
        return LocalProc::end();
    case Choreo::Op::interaction:
        if (c.from() == agent)
            return LocalProc::send(c.to(), c.msg());
        if (c.to() == agent)
            return LocalProc::recv(c.from(), c.msg());
        return LocalProc::end();
    case Choreo::Op::seq:
        return seq_of(project(c.lhs(), agent), project(c.rhs(), agent));
    case Choreo::Op::par:
        return par_of(project(c.lhs(), agent), project(c.rhs(), agent));
    case Choreo::Op::choice: {
        LocalProc l = project(c.lhs(), agent);
        LocalProc r = project(c.rhs(), agent);
        if (l.op() == LocalProc::Op::end)
            return r;
        if (r.op() == LocalProc::Op::end)
            return l;
        return LocalProc::choice(std::move(l), std::move(r));
    }
    }
    return LocalProc::end();
}

// ---------------------------------------------------------------------------------------------
// Composition

namespace {

std::vector<std::pair<std::size_t, LocalAction>> moves_of(const Candidate& c)
{
    std::vector<std::pair<std::size_t, LocalAction>> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c[i])
            continue;
        auto action = parse_local_label(*c[i]);
        if (!action)
            throw EvalError("not a local communication label: " + c[i]->text);
        out.emplace_back(i, std::move(*action));
    }
    return out;
}

std::vector<std::string> agent_list(const Choreo& c)
{
    std::set<std::string> names = agents(c);
    if (names.empty())
        throw EvalError("the choreography has no agents");
    return {names.begin(), names.end()};
}

std::vector<LocalSemantics> local_semantics(const std::vector<std::string>& names)
{
    std::vector<LocalSemantics> out;
    for (const auto& n : names)
        out.push_back(LocalSemantics{n});
    return out;
}

std::vector<LocalProc> projections(const Choreo& c, const std::vector<std::string>& names)
{
    std::vector<LocalProc> out;
    for (const auto& n : names)
        out.push_back(project(c, n));
    return out;
}

} // namespace

SyncPolicy<Unit> handshake_sync()
{
    return [](const Candidate& c, const Unit& m) -> std::optional<Unit> {
        if (movers(c) != 2)
            return std::nullopt;
        auto moves = moves_of(c);
        const LocalAction& a = moves[0].second;
        const LocalAction& b = moves[1].second;
        if (a.send == b.send || a.from != b.from || a.to != b.to || a.msg != b.msg)
            return std::nullopt;
        return m;
    };
}

RelabelPolicy handshake_relabel()
{
    return [](const Candidate& c) {
        auto moves = moves_of(c);
        const LocalAction& a = moves.at(0).second;
        return global_label(a.from, a.to, a.msg);
    };
}

SyncPolicy<FifoMemory> buffered_sync()
{
    return [](const Candidate& c, const FifoMemory& m) -> std::optional<FifoMemory> {
        if (movers(c) != 1)
            return std::nullopt;
        const LocalAction a = moves_of(c).at(0).second;
        FifoMemory next = m;
        if (a.send) {
            next.push(a.from, a.to, a.msg);
            return next;
        }
        if (next.front(a.from, a.to) != a.msg)
            return std::nullopt;
        next.pop(a.from, a.to);
        return next;
    };
}

RelabelPolicy buffered_relabel()
{
    return [](const Candidate& c) {
        const LocalAction a = moves_of(c).at(0).second;
        return a.send ? global_label(a.from, a.to, a.msg) : Label::silent();
    };
}

Composition compose(const Choreo& c)
{
    auto names = agent_list(c);
    auto sos = network_sos<LocalSemantics, Unit>(handshake_sync(), handshake_relabel(), local_semantics(names));
    SyncState init = sos.initial(projections(c, names));
    return Composition{std::move(names), std::move(sos), std::move(init)};
}

BufferedComposition compose_buffered(const Choreo& c)
{
    auto names = agent_list(c);
    auto sos = network_sos<LocalSemantics, FifoMemory>(buffered_sync(), buffered_relabel(), local_semantics(names));
    BufferedState init = sos.initial(projections(c, names));
    return BufferedComposition{std::move(names), std::move(sos), std::move(init)};
}

namespace {

/// A choreography without agents is only `end` in disguise: its composition is the empty network.
template <class State>
BisimOutcome<Choreo, State> trivial_realisability(const Choreo& c, const ExploreLimits& limits, const SilentSpec& silent)
{
    BisimOutcome<Choreo, State> outcome;
    outcome.left = explore(GlobalSemantics{}, c, limits);
    outcome.right.add_state(State{}, true);
    GraphVerdict v = branching_bisimulation(outcome.left, outcome.right, silent);
    outcome.verdict = v.verdict;
    outcome.relation = std::move(v.relation);
    outcome.play = std::move(v.play);
    return outcome;
}

} // namespace

BisimOutcome<Choreo, SyncState> realisability(const Choreo& c, const ExploreLimits& limits)
{
    if (agents(c).empty())
        return trivial_realisability<SyncState>(c, limits, {});
    Composition comp = compose(c);
    return compare_branching_bisim(GlobalSemantics{}, comp.sos, c, comp.initial, SilentSpec{}, limits);
}

BisimOutcome<Choreo, BufferedState> buffered_realisability(const Choreo& c, const ExploreLimits& limits)
{
    if (agents(c).empty())
        return trivial_realisability<BufferedState>(c, limits, SilentSpec::marker());
    BufferedComposition comp = compose_buffered(c);
    return compare_branching_bisim(GlobalSemantics{}, comp.sos, c, comp.initial, SilentSpec::marker(), limits);
}

} // namespace sosw::choreo
