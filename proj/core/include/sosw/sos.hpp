#pragma once

// Generic structural-operational-semantics interface and bounded LTS exploration.
//
// A semantics is any type exposing a `State` type and a `next` function returning the labelled
// successors of a state. Optionally it provides `accepting(state)`; otherwise a state is accepting
// when it has no successors. States must be hashable and equality comparable, and printable
// through `sosw::show` (an ADL `to_string`, `std::to_string` or `operator<<`).

#include "sosw/errors.hpp"

#include <algorithm>
#include <chrono>
#include <compare>
#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sosw {

/// Transition label. The empty text is reserved for the designated silent label.
struct Label {
    std::string text;

    Label() = default;
    explicit Label(std::string t) : text(std::move(t)) {}

    static Label silent() { return Label{}; }
    [[nodiscard]] bool is_silent_marker() const { return text.empty(); }

    auto operator<=>(const Label&) const = default;
    bool operator==(const Label&) const = default;
};

inline std::string to_string(const Label& label) { return label.is_silent_marker() ? std::string("τ") : label.text; }
inline std::ostream& operator<<(std::ostream& os, const Label& label) { return os << to_string(label); }

template <class T>
std::string show(const T& value)
{
    using std::to_string;
    if constexpr (std::is_same_v<T, std::string>) {
        return value;
    } else if constexpr (requires { { to_string(value) } -> std::convertible_to<std::string>; }) {
        return to_string(value);
    } else {
        std::ostringstream os;
        os << value;
        return os.str();
    }
}

template <class T>
concept Hashable = requires(const T& v) {
    { std::hash<T>{}(v) } -> std::convertible_to<std::size_t>;
};

template <class S>
concept Semantics = requires(const S& sem, const typename S::State& s) {
    typename S::State;
    { sem.next(s) } -> std::convertible_to<std::vector<std::pair<Label, typename S::State>>>;
} && std::equality_comparable<typename S::State> && Hashable<typename S::State>;

template <class S>
concept HasAccepting = requires(const S& sem, const typename S::State& s) {
    { sem.accepting(s) } -> std::convertible_to<bool>;
};

template <Semantics S>
using StateOf = typename S::State;

template <Semantics S>
using Step = std::pair<Label, StateOf<S>>;

struct ExploreLimits {
    std::size_t max_states = 1000;
    std::size_t max_depth = 200;
    std::chrono::milliseconds timeout{5000};

    void validate() const
    {
        if (max_states == 0 || max_depth == 0 || timeout.count() <= 0)
            throw std::invalid_argument("exploration limits must be strictly positive");
    }
};

enum class BoundReason { states, depth, timeout };

std::string to_string(BoundReason reason);

struct Transition {
    Label label;
    std::size_t target = 0;

    auto operator<=>(const Transition&) const = default;
    bool operator==(const Transition&) const = default;
};

struct Edge {
    std::size_t source = 0;
    Label label;
    std::size_t target = 0;

    auto operator<=>(const Edge&) const = default;
    bool operator==(const Edge&) const = default;
};

/// The shape of an explored transition system: indexed states, outgoing transitions, acceptance
/// and truncation flags. State 0 is the initial state.
class LtsGraph {
public:
    [[nodiscard]] std::size_t size() const { return out_.size(); }
    [[nodiscard]] const std::vector<Transition>& out(std::size_t state) const { return out_.at(state); }
    [[nodiscard]] bool accepting(std::size_t state) const { return accepting_.at(state); }
    [[nodiscard]] bool truncated(std::size_t state) const { return truncated_.at(state); }

    /// True when no state was left with unexplored successors.
    [[nodiscard]] bool complete() const { return !bound_.has_value(); }
    /// The first bound that cut exploration short, if any.
    [[nodiscard]] std::optional<BoundReason> bound() const { return bound_; }

    [[nodiscard]] std::size_t edge_count() const;
    /// All edges, sorted by (source, label, target).
    [[nodiscard]] std::vector<Edge> edges() const;

    std::size_t add_node(bool accepting);
    void add_transition(std::size_t source, Label label, std::size_t target);
    void mark_truncated(std::size_t state, BoundReason reason);

private:
    std::vector<std::vector<Transition>> out_;
    std::vector<bool> accepting_;
    std::vector<bool> truncated_;
    std::optional<BoundReason> bound_;
};

template <class State>
class Lts : public LtsGraph {
public:
    [[nodiscard]] const State& state(std::size_t i) const { return states_.at(i); }
    [[nodiscard]] const std::vector<State>& states() const { return states_; }

    [[nodiscard]] std::optional<std::size_t> index_of(const State& s) const
    {
        auto it = index_.find(s);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    std::size_t add_state(const State& s, bool accepting)
    {
        std::size_t i = add_node(accepting);
        states_.push_back(s);
        index_.emplace(s, i);
        return i;
    }

private:
    std::vector<State> states_;
    std::unordered_map<State, std::size_t> index_;
};

/// `sem.next(s)` in canonical order (label text, then printed target) with duplicates removed.
template <Semantics S>
std::vector<Step<S>> successors(const S& sem, const StateOf<S>& s)
{
    std::vector<Step<S>> raw = sem.next(s);
    std::vector<std::pair<std::string, std::size_t>> keys;
    keys.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        keys.emplace_back(show(raw[i].second), i);
    std::stable_sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b) {
        const Label& la = raw[a.second].first;
        const Label& lb = raw[b.second].first;
        if (la != lb)
            return la < lb;
        return a.first < b.first;
    });

    std::vector<Step<S>> result;
    result.reserve(raw.size());
    std::size_t run_start = 0;
    for (const auto& [printed, i] : keys) {
        auto& candidate = raw[i];
        if (!result.empty() && (result.back().first != candidate.first || show(result.back().second) != printed))
            run_start = result.size();
        bool duplicate = false;
        for (std::size_t j = run_start; j < result.size(); ++j) {
            if (result[j].first == candidate.first && result[j].second == candidate.second) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate)
            result.push_back(std::move(candidate));
    }
    return result;
}

template <Semantics S>
bool is_accepting(const S& sem, const StateOf<S>& s)
{
    if constexpr (HasAccepting<S>)
        return sem.accepting(s);
    else
        return sem.next(s).empty();
}

/// Breadth-first unfolding of `sem` from `init`. Bounds never fail: states whose successors were
/// not (all) added are flagged as truncated.
template <Semantics S>
Lts<StateOf<S>> explore(const S& sem, const StateOf<S>& init, const ExploreLimits& limits = {})
{
    limits.validate();
    const auto deadline = std::chrono::steady_clock::now() + limits.timeout;

    Lts<StateOf<S>> lts;
    std::vector<std::size_t> depth;
    lts.add_state(init, is_accepting(sem, init));
    depth.push_back(0);

    for (std::size_t i = 0; i < lts.size(); ++i) {
        if (std::chrono::steady_clock::now() > deadline) {
            for (std::size_t j = i; j < lts.size(); ++j)
                lts.mark_truncated(j, BoundReason::timeout);
            break;
        }
        auto steps = successors(sem, lts.state(i));
        if (depth[i] >= limits.max_depth) {
            if (!steps.empty())
                lts.mark_truncated(i, BoundReason::depth);
            continue;
        }
        for (auto& [label, target] : steps) {
            std::size_t target_index;
            if (auto known = lts.index_of(target)) {
                target_index = *known;
            } else if (lts.size() >= limits.max_states) {
                lts.mark_truncated(i, BoundReason::states);
                continue;
            } else {
                target_index = lts.add_state(target, is_accepting(sem, target));
                depth.push_back(depth[i] + 1);
            }
            lts.add_transition(i, label, target_index);
        }
    }
    return lts;
}

/// `sem` with every label passed through `rename`; states and acceptance are unchanged.
template <Semantics S>
struct Relabelled {
    using State = StateOf<S>;

    S sem;
    std::function<Label(const Label&)> rename;

    [[nodiscard]] std::vector<std::pair<Label, State>> next(const State& s) const
    {
        auto steps = sem.next(s);
        for (auto& step : steps)
            step.first = rename(step.first);
        return steps;
    }
    [[nodiscard]] bool accepting(const State& s) const { return is_accepting(sem, s); }
};

using Trace = std::vector<Label>;

/// Every label sequence of length at most `max_len` along a path from the initial state.
std::set<Trace> traces(const LtsGraph& lts, std::size_t max_len);

std::string to_string(const Trace& trace);

/// A hand-written transition table. Handy for tests and for embedding externally computed systems.
class ExplicitSemantics {
public:
    using State = std::size_t;

    ExplicitSemantics() = default;
    explicit ExplicitSemantics(std::vector<std::vector<std::pair<std::string, std::size_t>>> table,
                               std::vector<bool> accepting = {});

    [[nodiscard]] std::vector<std::pair<Label, State>> next(const State& s) const;
    [[nodiscard]] bool accepting(const State& s) const;
    [[nodiscard]] std::size_t size() const { return table_.size(); }

private:
    std::vector<std::vector<std::pair<Label, std::size_t>>> table_;
    std::vector<bool> accepting_;
};

} // namespace sosw
