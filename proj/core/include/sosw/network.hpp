#pragma once

// Composition of local semantics into the semantics of a network.
//
// A network state is a vector of local states plus a memory value describing the network (unit
// for synchronous composition, channel buffers for asynchronous variants). Every global step is
// built from a candidate vector: for each participant either one of its local moves or no move.
// The sync policy decides which candidate vectors are permitted and what the memory becomes; the
// relabel policy names the permitted combination.

#include "sosw/sos.hpp"

#include <boost/functional/hash.hpp>

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sosw {

/// Memory of a network that carries no information.
struct Unit {
    bool operator==(const Unit&) const = default;
};

inline std::string to_string(const Unit&) { return "()"; }

/// Per-channel FIFO buffers, keyed by (sender, receiver).
class FifoMemory {
public:
    using Channel = std::pair<std::string, std::string>;

    void push(const std::string& from, const std::string& to, const std::string& msg)
    {
        channels_[{from, to}].push_back(msg);
    }

    [[nodiscard]] std::optional<std::string> front(const std::string& from, const std::string& to) const
    {
        auto it = channels_.find({from, to});
        if (it == channels_.end() || it->second.empty())
            return std::nullopt;
        return it->second.front();
    }

    void pop(const std::string& from, const std::string& to)
    {
        auto it = channels_.find({from, to});
        if (it == channels_.end() || it->second.empty())
            throw std::logic_error("pop from an empty channel");
        it->second.pop_front();
        if (it->second.empty())
            channels_.erase(it);
    }

    [[nodiscard]] bool empty() const { return channels_.empty(); }
    [[nodiscard]] std::size_t size() const
    {
        std::size_t n = 0;
        for (const auto& [ch, q] : channels_)
            n += q.size();
        return n;
    }
    [[nodiscard]] const std::map<Channel, std::deque<std::string>>& channels() const { return channels_; }

    bool operator==(const FifoMemory&) const = default;

private:
    // Empty queues are never stored, so equality is structural.
    std::map<Channel, std::deque<std::string>> channels_;
};

inline std::string to_string(const FifoMemory& memory)
{
    std::string out = "{";
    bool first = true;
    for (const auto& [channel, queue] : memory.channels()) {
        if (!first)
            out += ", ";
        first = false;
        out += channel.first + "->" + channel.second + ":[";
        for (std::size_t i = 0; i < queue.size(); ++i)
            out += (i > 0 ? "," : "") + queue[i];
        out += "]";
    }
    return out + "}";
}

template <class LocalState, class Memory = Unit>
struct NetworkState {
    std::vector<LocalState> locals;
    Memory memory{};

    bool operator==(const NetworkState&) const = default;
};

template <class LocalState, class Memory>
std::string to_string(const NetworkState<LocalState, Memory>& s)
{
    std::string out = "[";
    for (std::size_t i = 0; i < s.locals.size(); ++i) {
        if (i > 0)
            out += " | ";
        out += show(s.locals[i]);
    }
    out += "]";
    if constexpr (!std::is_same_v<Memory, Unit>)
        out += " " + show(s.memory);
    return out;
}

/// For each participant, the label of its move in a global step, or nothing if it stays idle.
using Candidate = std::vector<std::optional<Label>>;

template <class Memory>
using SyncPolicy = std::function<std::optional<Memory>(const Candidate&, const Memory&)>;

using RelabelPolicy = std::function<Label(const Candidate&)>;

inline std::size_t movers(const Candidate& c)
{
    std::size_t n = 0;
    for (const auto& l : c)
        n += l.has_value() ? 1 : 0;
    return n;
}

/// Exactly one participant moves per step; memory is left unchanged.
template <class Memory = Unit>
SyncPolicy<Memory> interleaving_sync()
{
    return [](const Candidate& c, const Memory& m) -> std::optional<Memory> {
        if (movers(c) != 1)
            return std::nullopt;
        return m;
    };
}

/// Names a single-mover step after the mover's label.
inline Label singleton_label(const Candidate& c)
{
    for (const auto& l : c)
        if (l)
            return *l;
    throw std::logic_error("candidate vector has no mover");
}

template <Semantics Local, class Memory = Unit>
class NetworkSos {
public:
    using LocalState = StateOf<Local>;
    using State = NetworkState<LocalState, Memory>;

    NetworkSos(SyncPolicy<Memory> sync, RelabelPolicy relabel, std::vector<Local> locals)
        : sync_(std::move(sync)), relabel_(std::move(relabel)), locals_(std::move(locals))
    {
        if (locals_.empty())
            throw std::invalid_argument("a network needs at least one participant");
        if (!sync_ || !relabel_)
            throw std::invalid_argument("network sync and relabel policies are required");
    }

    [[nodiscard]] std::size_t participants() const { return locals_.size(); }
    [[nodiscard]] const Local& local(std::size_t i) const { return locals_.at(i); }

    [[nodiscard]] State initial(std::vector<LocalState> states, Memory memory = {}) const
    {
        if (states.size() != locals_.size())
            throw std::invalid_argument("network state needs one local state per participant");
        return State{std::move(states), std::move(memory)};
    }

    [[nodiscard]] std::vector<std::pair<Label, State>> next(const State& s) const
    {
        check_arity(s);
        const std::size_t n = locals_.size();
        std::vector<std::vector<Step<Local>>> options(n);
        for (std::size_t i = 0; i < n; ++i)
            options[i] = successors(locals_[i], s.locals[i]);

        std::vector<std::pair<Label, State>> result;
        // choice[i] == 0 means idle, k > 0 picks options[i][k - 1]. Participant 0 varies slowest.
        std::vector<std::size_t> choice(n, 0);
        auto advance = [&] {
            for (std::size_t i = n; i-- > 0;) {
                if (choice[i] < options[i].size()) {
                    ++choice[i];
                    return true;
                }
                choice[i] = 0;
            }
            return false;
        };
        while (advance()) {
            Candidate candidate(n);
            for (std::size_t p = 0; p < n; ++p)
                if (choice[p] > 0)
                    candidate[p] = options[p][choice[p] - 1].first;
            if (movers(candidate) == 0)
                continue;
            std::optional<Memory> memory = sync_(candidate, s.memory);
            if (!memory)
                continue;
            State target{s.locals, std::move(*memory)};
            for (std::size_t p = 0; p < n; ++p)
                if (choice[p] > 0)
                    target.locals[p] = options[p][choice[p] - 1].second;
            result.emplace_back(relabel_(candidate), std::move(target));
        }
        return result;
    }

    [[nodiscard]] bool accepting(const State& s) const
    {
        check_arity(s);
        for (std::size_t i = 0; i < locals_.size(); ++i)
            if (!is_accepting(locals_[i], s.locals[i]))
                return false;
        return true;
    }

private:
    void check_arity(const State& s) const
    {
        if (s.locals.size() != locals_.size())
            throw std::invalid_argument("network state has the wrong number of participants");
    }

    SyncPolicy<Memory> sync_;
    RelabelPolicy relabel_;
    std::vector<Local> locals_;
};

template <Semantics Local, class Memory>
NetworkSos<Local, Memory> network_sos(SyncPolicy<Memory> sync, RelabelPolicy relabel, std::vector<Local> locals)
{
    return NetworkSos<Local, Memory>(std::move(sync), std::move(relabel), std::move(locals));
}

} // namespace sosw

template <>
struct std::hash<sosw::Unit> {
    std::size_t operator()(const sosw::Unit&) const noexcept { return 0x5eed; }
};

template <>
struct std::hash<sosw::FifoMemory> {
    std::size_t operator()(const sosw::FifoMemory& m) const noexcept
    {
        std::size_t seed = 0;
        for (const auto& [channel, queue] : m.channels()) {
            boost::hash_combine(seed, channel.first);
            boost::hash_combine(seed, channel.second);
            for (const auto& msg : queue)
                boost::hash_combine(seed, msg);
        }
        return seed;
    }
};

template <class LocalState, class Memory>
struct std::hash<sosw::NetworkState<LocalState, Memory>> {
    std::size_t operator()(const sosw::NetworkState<LocalState, Memory>& s) const noexcept
    {
        std::size_t seed = std::hash<Memory>{}(s.memory);
        for (const auto& l : s.locals)
            boost::hash_combine(seed, std::hash<LocalState>{}(l));
        return seed;
    }
};
