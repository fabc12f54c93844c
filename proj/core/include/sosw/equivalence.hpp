#pragma once

// Branching bisimulation and trace equivalence between two (explored) semantics.
//
// Both systems are explored to completion within the given limits; any truncation makes the
// answer a `bound` verdict. Bisimilarity is the greatest fixpoint of the branching transfer
// condition, computed by synchronous refinement rounds over the full product relation. The round
// in which each pair was discarded is kept, which is what the distinguishing play is read from.
//
// Acceptance is observable: related states must agree on being accepting, up to silent moves.
// All labels satisfying the SilentSpec are treated as one internal action.

#include "sosw/sos.hpp"

#include <chrono>
#include <functional>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace sosw {

class SilentSpec {
public:
    /// Nothing is silent: branching bisimilarity coincides with strong bisimilarity.
    SilentSpec() = default;
    explicit SilentSpec(std::function<bool(const Label&)> predicate) : predicate_(std::move(predicate)) {}

    /// Only the designated silent label (empty text) is internal.
    static SilentSpec marker()
    {
        return SilentSpec([](const Label& l) { return l.is_silent_marker(); });
    }
    static SilentSpec labels(std::set<std::string> names)
    {
        return SilentSpec([names = std::move(names)](const Label& l) { return names.count(l.text) > 0; });
    }

    bool operator()(const Label& label) const { return predicate_ && predicate_(label); }

private:
    std::function<bool(const Label&)> predicate_;
};

enum class Side { left, right };

inline Side opposite(Side s) { return s == Side::left ? Side::right : Side::left; }
inline std::string to_string(Side s) { return s == Side::left ? "left" : "right"; }

/// Pairs (left state index, right state index), sorted.
using Relation = std::vector<std::pair<std::size_t, std::size_t>>;

/// One move of a distinguishing play. A challenge is a single transition (or, for acceptance
/// challenges, no transition at all); a response is a run of silent transitions optionally
/// followed by the matching transition. An empty response path means the responder stayed put.
struct PlayStep {
    enum class Kind { move, accept };

    Kind kind = Kind::move;
    Side side = Side::left;
    bool response = false;
    std::size_t from = 0;
    std::vector<Edge> path;

    [[nodiscard]] std::size_t to() const { return path.empty() ? from : path.back().target; }
};

/// An alternating sequence of challenges and responses ending in a challenge that the other
/// side cannot answer at all.
struct Play {
    std::vector<PlayStep> steps;
    /// (left, right) position before each challenge; starts at the initial pair.
    std::vector<std::pair<std::size_t, std::size_t>> positions;
    Side stuck = Side::right;
    PlayStep::Kind final_challenge = PlayStep::Kind::move;
    Label unmatched;
    std::size_t left_state = 0;
    std::size_t right_state = 0;
};

struct BoundInfo {
    BoundReason reason = BoundReason::states;
    std::size_t limit = 0;
};

enum class Verdict { bisimilar, not_bisimilar, bound };

/// Result of the graph-level check.
struct GraphVerdict {
    Verdict verdict = Verdict::bound;
    Relation relation;
    std::optional<Play> play;
    std::optional<BoundInfo> bound;
};

/// Branching bisimilarity of the initial states of two complete LTSs. Returns a `bound` verdict
/// (timeout) if `deadline` passes during refinement.
GraphVerdict branching_bisimulation(const LtsGraph& left, const LtsGraph& right, const SilentSpec& silent,
                                    std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt,
                                    std::chrono::milliseconds timeout_budget = std::chrono::milliseconds(0));

/// Independent check that `relation` is a branching bisimulation relating the initial states.
bool verify_bisimulation(const Relation& relation, const LtsGraph& left, const LtsGraph& right,
                         const SilentSpec& silent = {});

/// Replays a play against the two graphs: every step must be a legal run and the final challenge
/// must be unanswerable in the stuck side (ignoring any relation).
bool replay_play(const Play& play, const LtsGraph& left, const LtsGraph& right, const SilentSpec& silent = {});

template <class S1, class S2>
struct BisimOutcome {
    Verdict verdict = Verdict::bound;
    Relation relation;
    std::optional<Play> play;
    std::optional<BoundInfo> bound;
    Lts<S1> left;
    Lts<S2> right;

    [[nodiscard]] bool bisimilar() const { return verdict == Verdict::bisimilar; }

    [[nodiscard]] std::vector<std::pair<S1, S2>> related_states() const
    {
        std::vector<std::pair<S1, S2>> out;
        out.reserve(relation.size());
        for (auto [l, r] : relation)
            out.emplace_back(left.state(l), right.state(r));
        return out;
    }
};

namespace detail {

inline std::optional<BoundInfo> truncation_of(const LtsGraph& g, const ExploreLimits& limits)
{
    if (g.complete())
        return std::nullopt;
    BoundReason reason = *g.bound();
    std::size_t limit = reason == BoundReason::states  ? limits.max_states
                        : reason == BoundReason::depth ? limits.max_depth
                                                       : static_cast<std::size_t>(limits.timeout.count());
    return BoundInfo{reason, limit};
}

inline ExploreLimits remaining(const ExploreLimits& limits, std::chrono::steady_clock::time_point deadline)
{
    ExploreLimits rest = limits;
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    rest.timeout = std::max(left, std::chrono::milliseconds(1));
    return rest;
}

} // namespace detail

template <Semantics S1, Semantics S2>
BisimOutcome<StateOf<S1>, StateOf<S2>> compare_branching_bisim(const S1& sem1, const S2& sem2,
                                                               const StateOf<S1>& init1, const StateOf<S2>& init2,
                                                               const SilentSpec& silent = {},
                                                               const ExploreLimits& limits = {})
{
    limits.validate();
    const auto deadline = std::chrono::steady_clock::now() + limits.timeout;
    BisimOutcome<StateOf<S1>, StateOf<S2>> outcome;
    outcome.left = explore(sem1, init1, limits);
    if (auto b = detail::truncation_of(outcome.left, limits)) {
        outcome.bound = b;
        return outcome;
    }
    outcome.right = explore(sem2, init2, detail::remaining(limits, deadline));
    if (auto b = detail::truncation_of(outcome.right, limits)) {
        if (b->reason == BoundReason::timeout)
            b->limit = static_cast<std::size_t>(limits.timeout.count());
        outcome.bound = b;
        return outcome;
    }
    GraphVerdict v = branching_bisimulation(outcome.left, outcome.right, silent, deadline, limits.timeout);
    outcome.verdict = v.verdict;
    outcome.relation = std::move(v.relation);
    outcome.play = std::move(v.play);
    outcome.bound = v.bound;
    return outcome;
}

/// Trace comparison over visible labels.
struct TraceVerdict {
    enum class Kind { equal, distinct, bound };

    Kind kind = Kind::bound;
    /// For `distinct`: a visible trace of `owner` that the other side cannot perform.
    Trace witness;
    Side owner = Side::left;
    std::optional<BoundInfo> bound;
};

/// Exact comparison of the visible trace sets of two complete LTSs (subset construction over the
/// silent closure). The witness is a shortest distinguishing trace.
TraceVerdict compare_trace_graphs(const LtsGraph& left, const LtsGraph& right, const SilentSpec& silent = {});

template <class S1, class S2>
struct TraceOutcome {
    TraceVerdict verdict;
    Lts<S1> left;
    Lts<S2> right;

    [[nodiscard]] bool equal() const { return verdict.kind == TraceVerdict::Kind::equal; }
};

template <Semantics S1, Semantics S2>
TraceOutcome<StateOf<S1>, StateOf<S2>> compare_traces(const S1& sem1, const S2& sem2, const StateOf<S1>& init1,
                                                      const StateOf<S2>& init2, const SilentSpec& silent = {},
                                                      const ExploreLimits& limits = {})
{
    limits.validate();
    const auto deadline = std::chrono::steady_clock::now() + limits.timeout;
    TraceOutcome<StateOf<S1>, StateOf<S2>> outcome;
    outcome.left = explore(sem1, init1, limits);
    if (auto b = detail::truncation_of(outcome.left, limits)) {
        outcome.verdict.bound = b;
        return outcome;
    }
    outcome.right = explore(sem2, init2, detail::remaining(limits, deadline));
    if (auto b = detail::truncation_of(outcome.right, limits)) {
        if (b->reason == BoundReason::timeout)
            b->limit = static_cast<std::size_t>(limits.timeout.count());
        outcome.verdict.bound = b;
        return outcome;
    }
    outcome.verdict = compare_trace_graphs(outcome.left, outcome.right, silent);
    return outcome;
}

} // namespace sosw
