#include "sosw/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace sosw {
namespace {

/// States reachable through silent transitions (including the start), in BFS order, with the
/// edge used to reach each one.
struct SilentClosure {
    std::vector<std::size_t> states;
    std::map<std::size_t, Edge> via;
};

SilentClosure silent_closure(const LtsGraph& g, std::size_t from, const SilentSpec& silent)
{
    SilentClosure c;
    std::vector<bool> seen(g.size(), false);
    seen[from] = true;
    c.states.push_back(from);
    for (std::size_t i = 0; i < c.states.size(); ++i) {
        std::size_t s = c.states[i];
        for (const auto& t : g.out(s)) {
            if (!silent(t.label) || seen[t.target])
                continue;
            seen[t.target] = true;
            c.via.emplace(t.target, Edge{s, t.label, t.target});
            c.states.push_back(t.target);
        }
    }
    return c;
}

std::vector<Edge> silent_path(const SilentClosure& c, std::size_t from, std::size_t to)
{
    std::vector<Edge> path;
    for (std::size_t s = to; s != from;) {
        const Edge& e = c.via.at(s);
        path.push_back(e);
        s = e.source;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

bool labels_match(const Label& a, const Label& b, const SilentSpec& silent)
{
    return a == b || (silent(a) && silent(b));
}

/// A candidate answer to a challenge: run silently to `mid`, then optionally take `edge`.
struct Response {
    std::size_t mid = 0;
    std::optional<Transition> edge;
};

struct Challenge {
    PlayStep::Kind kind = PlayStep::Kind::move;
    Side side = Side::left;
    std::size_t edge = 0;
};

class Game {
public:
    Game(const LtsGraph& left, const LtsGraph& right, const SilentSpec& silent)
        : graphs_{&left, &right}, silent_(silent), n2_(right.size())
    {
        for (int side = 0; side < 2; ++side) {
            closures_[side].reserve(graphs_[side]->size());
            for (std::size_t s = 0; s < graphs_[side]->size(); ++s)
                closures_[side].push_back(silent_closure(*graphs_[side], s, silent));
        }
    }

    [[nodiscard]] std::size_t pair_count() const { return graphs_[0]->size() * n2_; }
    [[nodiscard]] std::size_t index(std::size_t l, std::size_t r) const { return l * n2_ + r; }
    [[nodiscard]] std::pair<std::size_t, std::size_t> unindex(std::size_t p) const { return {p / n2_, p % n2_}; }

    /// Pair index for (challenger state, responder state) oriented by the challenger's side.
    [[nodiscard]] std::size_t oriented(Side challenger, std::size_t c, std::size_t d) const
    {
        return challenger == Side::left ? index(c, d) : index(d, c);
    }

    [[nodiscard]] const LtsGraph& graph(Side s) const { return *graphs_[s == Side::left ? 0 : 1]; }
    [[nodiscard]] const SilentClosure& closure(Side s, std::size_t state) const
    {
        return closures_[s == Side::left ? 0 : 1][state];
    }

    /// All syntactic responses to a challenge, independent of any relation.
    [[nodiscard]] std::vector<Response> responses(Side challenger, std::size_t c, std::size_t d,
                                                  const Challenge& ch) const
    {
        std::vector<Response> out;
        Side responder = opposite(challenger);
        const LtsGraph& rg = graph(responder);
        if (ch.kind == PlayStep::Kind::accept) {
            for (std::size_t mid : closure(responder, d).states)
                if (rg.accepting(mid))
                    out.push_back(Response{mid, std::nullopt});
            return out;
        }
        const Transition& move = graph(challenger).out(c)[ch.edge];
        if (silent_(move.label))
            out.push_back(Response{d, std::nullopt});
        for (std::size_t mid : closure(responder, d).states)
            for (const auto& t : rg.out(mid))
                if (labels_match(move.label, t.label, silent_))
                    out.push_back(Response{mid, t});
        return out;
    }

    /// Pairs that must be related for `r` to answer the challenge.
    [[nodiscard]] std::vector<std::size_t> obligations(Side challenger, std::size_t c, std::size_t d,
                                                       const Challenge& ch, const Response& r) const
    {
        if (ch.kind == PlayStep::Kind::accept)
            return {oriented(challenger, c, r.mid)};
        const Transition& move = graph(challenger).out(c)[ch.edge];
        if (!r.edge)
            return {oriented(challenger, move.target, d)};
        return {oriented(challenger, c, r.mid), oriented(challenger, move.target, r.edge->target)};
    }

    /// First challenge of (l, r) that cannot be answered inside `related`, if any.
    template <class Related>
    [[nodiscard]] std::optional<Challenge> failing_challenge(std::size_t l, std::size_t r, Related related) const
    {
        for (Side side : {Side::left, Side::right}) {
            std::size_t c = side == Side::left ? l : r;
            std::size_t d = side == Side::left ? r : l;
            for (std::size_t e = 0; e < graph(side).out(c).size(); ++e) {
                Challenge ch{PlayStep::Kind::move, side, e};
                if (!answerable(side, c, d, ch, related))
                    return ch;
            }
        }
        for (Side side : {Side::left, Side::right}) {
            std::size_t c = side == Side::left ? l : r;
            std::size_t d = side == Side::left ? r : l;
            if (!graph(side).accepting(c))
                continue;
            Challenge ch{PlayStep::Kind::accept, side, 0};
            if (!answerable(side, c, d, ch, related))
                return ch;
        }
        return std::nullopt;
    }

    template <class Related>
    [[nodiscard]] bool answerable(Side side, std::size_t c, std::size_t d, const Challenge& ch, Related related) const
    {
        return best_response(side, c, d, ch, related).has_value();
    }

    /// A response whose obligations are all related. Prefers staying put, then the earliest
    /// silent position, then a target with the same index as the challenger's target.
    template <class Related>
    [[nodiscard]] std::optional<Response> best_response(Side side, std::size_t c, std::size_t d,
                                                        const Challenge& ch, Related related) const
    {
        std::optional<Response> fallback;
        std::optional<std::size_t> challenger_target;
        if (ch.kind == PlayStep::Kind::move)
            challenger_target = graph(side).out(c)[ch.edge].target;
        for (const Response& r : responses(side, c, d, ch)) {
            bool ok = true;
            for (std::size_t p : obligations(side, c, d, ch, r))
                ok = ok && related(p);
            if (!ok)
                continue;
            if (!r.edge || !challenger_target || r.edge->target == *challenger_target)
                return r;
            if (!fallback)
                fallback = r;
        }
        return fallback;
    }

    [[nodiscard]] PlayStep challenge_step(Side side, std::size_t c, const Challenge& ch) const
    {
        PlayStep step;
        step.kind = ch.kind;
        step.side = side;
        step.from = c;
        if (ch.kind == PlayStep::Kind::move) {
            const Transition& t = graph(side).out(c)[ch.edge];
            step.path.push_back(Edge{c, t.label, t.target});
        }
        return step;
    }

    [[nodiscard]] PlayStep response_step(Side challenger, std::size_t d, const Challenge& ch, const Response& r) const
    {
        Side responder = opposite(challenger);
        PlayStep step;
        step.kind = ch.kind;
        step.side = responder;
        step.response = true;
        step.from = d;
        step.path = silent_path(closure(responder, d), d, r.mid);
        if (r.edge)
            step.path.push_back(Edge{r.mid, r.edge->label, r.edge->target});
        return step;
    }

private:
    const LtsGraph* graphs_[2];
    const SilentSpec& silent_;
    std::size_t n2_;
    std::vector<SilentClosure> closures_[2];
};

} // namespace

GraphVerdict branching_bisimulation(const LtsGraph& left, const LtsGraph& right, const SilentSpec& silent,
                                    std::optional<std::chrono::steady_clock::time_point> deadline,
                                    std::chrono::milliseconds timeout_budget)
{
    GraphVerdict result;
    if (left.size() == 0 || right.size() == 0)
        throw std::invalid_argument("cannot compare an empty LTS");
    if (!left.complete() || !right.complete()) {
        result.verdict = Verdict::bound;
        result.bound = BoundInfo{!left.complete() ? *left.bound() : *right.bound(), 0};
        return result;
    }

    Game game(left, right, silent);
    const std::size_t pairs = game.pair_count();
    constexpr int kAlive = -1;
    std::vector<int> removed(pairs, kAlive);
    std::vector<Challenge> reason(pairs);

    auto timed_out = [&] { return deadline && std::chrono::steady_clock::now() > *deadline; };

    for (int round = 0;; ++round) {
        auto alive = [&](std::size_t p) { return removed[p] == kAlive; };
        std::vector<std::pair<std::size_t, Challenge>> failing;
        for (std::size_t p = 0; p < pairs; ++p) {
            if (!alive(p))
                continue;
            auto [l, r] = game.unindex(p);
            if (auto ch = game.failing_challenge(l, r, alive))
                failing.emplace_back(p, *ch);
            if ((p & 0xfff) == 0 && timed_out()) {
                result.verdict = Verdict::bound;
                result.bound = BoundInfo{BoundReason::timeout, static_cast<std::size_t>(timeout_budget.count())};
                return result;
            }
        }
        if (failing.empty())
            break;
        for (const auto& [p, ch] : failing) {
            removed[p] = round;
            reason[p] = ch;
        }
    }

    auto alive = [&](std::size_t p) { return removed[p] == kAlive; };
    const std::size_t init = game.index(0, 0);

    if (alive(init)) {
        // Keep only the pairs needed to answer every challenge from the initial pair.
        std::vector<bool> in(pairs, false);
        std::deque<std::size_t> todo{init};
        in[init] = true;
        while (!todo.empty()) {
            std::size_t p = todo.front();
            todo.pop_front();
            auto [l, r] = game.unindex(p);
            auto visit = [&](Side side, std::size_t c, std::size_t d, const Challenge& ch) {
                auto resp = game.best_response(side, c, d, ch, alive);
                for (std::size_t q : game.obligations(side, c, d, ch, *resp)) {
                    if (!in[q]) {
                        in[q] = true;
                        todo.push_back(q);
                    }
                }
            };
            for (Side side : {Side::left, Side::right}) {
                std::size_t c = side == Side::left ? l : r;
                std::size_t d = side == Side::left ? r : l;
                for (std::size_t e = 0; e < game.graph(side).out(c).size(); ++e)
                    visit(side, c, d, Challenge{PlayStep::Kind::move, side, e});
                if (game.graph(side).accepting(c))
                    visit(side, c, d, Challenge{PlayStep::Kind::accept, side, 0});
            }
        }
        result.verdict = Verdict::bisimilar;
        for (std::size_t p = 0; p < pairs; ++p)
            if (in[p])
                result.relation.push_back(game.unindex(p));
        return result;
    }

    // Distinguishing play: follow removal reasons towards ever earlier rounds.
    Play play;
    std::size_t current = init;
    while (true) {
        auto [l, r] = game.unindex(current);
        play.positions.emplace_back(l, r);
        const Challenge& ch = reason[current];
        const int round = removed[current];
        Side side = ch.side;
        std::size_t c = side == Side::left ? l : r;
        std::size_t d = side == Side::left ? r : l;
        play.steps.push_back(game.challenge_step(side, c, ch));

        // Among syntactic answers pick the one that survives longest.
        std::optional<Response> chosen;
        std::size_t chosen_next = 0;
        int chosen_round = -1;
        for (const Response& resp : game.responses(side, c, d, ch)) {
            for (std::size_t q : game.obligations(side, c, d, ch, resp)) {
                if (removed[q] != kAlive && removed[q] < round && removed[q] > chosen_round) {
                    chosen = resp;
                    chosen_next = q;
                    chosen_round = removed[q];
                }
            }
        }
        if (!chosen) {
            play.stuck = opposite(side);
            play.final_challenge = ch.kind;
            if (ch.kind == PlayStep::Kind::move)
                play.unmatched = game.graph(side).out(c)[ch.edge].label;
            play.left_state = l;
            play.right_state = r;
            break;
        }
        play.steps.push_back(game.response_step(side, d, ch, *chosen));
        current = chosen_next;
    }
    result.verdict = Verdict::not_bisimilar;
    result.play = std::move(play);
    return result;
}

bool verify_bisimulation(const Relation& relation, const LtsGraph& left, const LtsGraph& right,
                         const SilentSpec& silent)
{
    std::set<std::pair<std::size_t, std::size_t>> rel(relation.begin(), relation.end());
    if (!rel.count({0, 0}))
        return false;
    for (auto [s, t] : rel) {
        if (s >= left.size() || t >= right.size())
            return false;
        if (left.truncated(s) || right.truncated(t))
            return false;
    }

    auto graph = [&](Side side) -> const LtsGraph& { return side == Side::left ? left : right; };
    auto reach_silently = [&](const LtsGraph& g, std::size_t from) {
        std::set<std::size_t> seen{from};
        std::vector<std::size_t> stack{from};
        while (!stack.empty()) {
            std::size_t s = stack.back();
            stack.pop_back();
            for (const auto& tr : g.out(s))
                if (silent(tr.label) && seen.insert(tr.target).second)
                    stack.push_back(tr.target);
        }
        return seen;
    };

    for (Side side : {Side::left, Side::right}) {
        const LtsGraph& cg = graph(side);
        const LtsGraph& dg = graph(opposite(side));
        // x lives in the challenger graph, y in the responder graph.
        auto related = [&](std::size_t x, std::size_t y) {
            return side == Side::left ? rel.count({x, y}) > 0 : rel.count({y, x}) > 0;
        };
        for (auto [s0, t0] : rel) {
            std::size_t c = side == Side::left ? s0 : t0;
            std::size_t d = side == Side::left ? t0 : s0;
            std::set<std::size_t> reach = reach_silently(dg, d);
            for (const auto& move : cg.out(c)) {
                bool matched = silent(move.label) && related(move.target, d);
                for (std::size_t mid : reach) {
                    if (matched)
                        break;
                    if (!related(c, mid))
                        continue;
                    for (const auto& answer : dg.out(mid)) {
                        bool same = answer.label == move.label || (silent(answer.label) && silent(move.label));
                        if (same && related(move.target, answer.target)) {
                            matched = true;
                            break;
                        }
                    }
                }
                if (!matched)
                    return false;
            }
            if (cg.accepting(c)) {
                bool ok = false;
                for (std::size_t mid : reach)
                    ok = ok || (related(c, mid) && dg.accepting(mid));
                if (!ok)
                    return false;
            }
        }
    }
    return true;
}

bool replay_play(const Play& play, const LtsGraph& left, const LtsGraph& right, const SilentSpec& silent)
{
    auto graph = [&](Side s) -> const LtsGraph& { return s == Side::left ? left : right; };
    auto legal_edge = [&](Side side, const Edge& e) {
        if (e.source >= graph(side).size())
            return false;
        for (const auto& t : graph(side).out(e.source))
            if (t.label == e.label && t.target == e.target)
                return true;
        return false;
    };
    auto orient = [](Side challenger, std::size_t c, std::size_t d) {
        return challenger == Side::left ? std::make_pair(c, d) : std::make_pair(d, c);
    };

    const std::size_t rounds = (play.steps.size() + 1) / 2;
    if (play.steps.empty() || play.steps.size() % 2 == 0 || play.positions.size() != rounds)
        return false;
    if (play.positions.front() != std::make_pair(std::size_t{0}, std::size_t{0}))
        return false;

    for (std::size_t round = 0; round < rounds; ++round) {
        const PlayStep& ch = play.steps[2 * round];
        auto [l, r] = play.positions[round];
        std::size_t c = ch.side == Side::left ? l : r;
        std::size_t d = ch.side == Side::left ? r : l;
        if (ch.response || ch.from != c)
            return false;
        if (ch.kind == PlayStep::Kind::move) {
            if (ch.path.size() != 1 || ch.path[0].source != c || !legal_edge(ch.side, ch.path[0]))
                return false;
        } else if (!ch.path.empty() || !graph(ch.side).accepting(c)) {
            return false;
        }

        Side responder = opposite(ch.side);
        const LtsGraph& dg = graph(responder);
        if (round + 1 == rounds) {
            // The final challenge must have no syntactic answer at all.
            std::vector<std::size_t> reach{d};
            std::set<std::size_t> seen{d};
            for (std::size_t k = 0; k < reach.size(); ++k)
                for (const auto& t : dg.out(reach[k]))
                    if (silent(t.label) && seen.insert(t.target).second)
                        reach.push_back(t.target);
            if (play.stuck != responder || play.left_state != l || play.right_state != r)
                return false;
            if (ch.kind == PlayStep::Kind::accept) {
                for (std::size_t s : reach)
                    if (dg.accepting(s))
                        return false;
                return play.final_challenge == PlayStep::Kind::accept;
            }
            const Label& want = ch.path[0].label;
            if (silent(want) || play.unmatched != want)
                return false;
            for (std::size_t s : reach)
                for (const auto& t : dg.out(s))
                    if (labels_match(want, t.label, silent))
                        return false;
            return true;
        }

        const PlayStep& resp = play.steps[2 * round + 1];
        if (!resp.response || resp.side != responder || resp.from != d || resp.kind != ch.kind)
            return false;
        std::size_t pos = d;
        for (std::size_t k = 0; k < resp.path.size(); ++k) {
            const Edge& e = resp.path[k];
            if (e.source != pos || !legal_edge(responder, e))
                return false;
            pos = e.target;
        }

        std::vector<std::pair<std::size_t, std::size_t>> next;
        if (ch.kind == PlayStep::Kind::accept) {
            for (const Edge& e : resp.path)
                if (!silent(e.label))
                    return false;
            if (!dg.accepting(pos))
                return false;
            next.push_back(orient(ch.side, c, pos));
        } else if (resp.path.empty()) {
            if (!silent(ch.path[0].label))
                return false;
            next.push_back(orient(ch.side, ch.to(), d));
        } else {
            for (std::size_t k = 0; k + 1 < resp.path.size(); ++k)
                if (!silent(resp.path[k].label))
                    return false;
            const Edge& last = resp.path.back();
            if (!labels_match(ch.path[0].label, last.label, silent))
                return false;
            next.push_back(orient(ch.side, c, last.source));
            next.push_back(orient(ch.side, ch.to(), last.target));
        }
        if (std::find(next.begin(), next.end(), play.positions[round + 1]) == next.end())
            return false;
    }
    return false;
}

TraceVerdict compare_trace_graphs(const LtsGraph& left, const LtsGraph& right, const SilentSpec& silent)
{
    TraceVerdict verdict;
    if (!left.complete() || !right.complete()) {
        verdict.kind = TraceVerdict::Kind::bound;
        verdict.bound = BoundInfo{!left.complete() ? *left.bound() : *right.bound(), 0};
        return verdict;
    }

    using StateSet = std::vector<std::size_t>;
    auto close = [&](const LtsGraph& g, StateSet set) {
        std::set<std::size_t> seen(set.begin(), set.end());
        for (std::size_t i = 0; i < set.size(); ++i)
            for (const auto& t : g.out(set[i]))
                if (silent(t.label) && seen.insert(t.target).second)
                    set.push_back(t.target);
        return StateSet(seen.begin(), seen.end());
    };
    auto step = [&](const LtsGraph& g, const StateSet& set, const Label& a) {
        StateSet out;
        for (std::size_t s : set)
            for (const auto& t : g.out(s))
                if (!silent(t.label) && t.label == a)
                    out.push_back(t.target);
        return close(g, std::move(out));
    };
    auto visible = [&](const LtsGraph& g, const StateSet& set, std::set<Label>& into) {
        for (std::size_t s : set)
            for (const auto& t : g.out(s))
                if (!silent(t.label))
                    into.insert(t.label);
    };

    struct Node {
        StateSet l;
        StateSet r;
        Trace trace;
    };
    std::set<std::pair<StateSet, StateSet>> seen;
    std::deque<Node> queue;
    Node start{close(left, {0}), close(right, {0}), {}};
    seen.emplace(start.l, start.r);
    queue.push_back(std::move(start));
    while (!queue.empty()) {
        Node node = std::move(queue.front());
        queue.pop_front();
        std::set<Label> labels;
        visible(left, node.l, labels);
        visible(right, node.r, labels);
        for (const Label& a : labels) {
            StateSet l2 = step(left, node.l, a);
            StateSet r2 = step(right, node.r, a);
            if (l2.empty() != r2.empty()) {
                verdict.kind = TraceVerdict::Kind::distinct;
                verdict.witness = node.trace;
                verdict.witness.push_back(a);
                verdict.owner = l2.empty() ? Side::right : Side::left;
                return verdict;
            }
            if (seen.emplace(l2, r2).second) {
                Trace t = node.trace;
                t.push_back(a);
                queue.push_back(Node{std::move(l2), std::move(r2), std::move(t)});
            }
        }
    }
    verdict.kind = TraceVerdict::Kind::equal;
    return verdict;
}

} // namespace sosw
