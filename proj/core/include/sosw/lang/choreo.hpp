#pragma once

// Choreographies: global descriptions of message exchanges between named agents.
//
//   c ::= a->b:m | c; c | c || c | c + c | end | ( c )
//
// `;` binds weakest and groups to the right, `+` binds weaker than `||`. The global semantics
// fires interactions atomically; projections give each agent a local process of sends and
// receives, and the composition of the projections is compared against the global semantics to
// decide realisability.

#include "sosw/equivalence.hpp"
#include "sosw/network.hpp"
#include "sosw/render.hpp"
#include "sosw/sos.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sosw::choreo {

class Choreo {
public:
    enum class Op { end, interaction, seq, par, choice };

    static Choreo end();
    static Choreo interaction(std::string from, std::string to, std::string msg);
    static Choreo seq(Choreo first, Choreo second);
    static Choreo par(Choreo left, Choreo right);
    static Choreo choice(Choreo left, Choreo right);

    [[nodiscard]] Op op() const;
    [[nodiscard]] const std::string& from() const;
    [[nodiscard]] const std::string& to() const;
    [[nodiscard]] const std::string& msg() const;
    [[nodiscard]] const Choreo& lhs() const;
    [[nodiscard]] const Choreo& rhs() const;
    [[nodiscard]] std::size_t hash() const;

    bool operator==(const Choreo& other) const;

private:
    struct Data;
    explicit Choreo(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    std::shared_ptr<const Data> d_;
};

/// The behaviour of a single agent: sends to and receives from named peers.
class LocalProc {
public:
    enum class Op { end, send, recv, seq, par, choice };

    static LocalProc end();
    static LocalProc send(std::string to, std::string msg);
    static LocalProc recv(std::string from, std::string msg);
    static LocalProc seq(LocalProc first, LocalProc second);
    static LocalProc par(LocalProc left, LocalProc right);
    static LocalProc choice(LocalProc left, LocalProc right);

    [[nodiscard]] Op op() const;
    /// The other party of a send or receive.
    [[nodiscard]] const std::string& peer() const;
    [[nodiscard]] const std::string& msg() const;
    [[nodiscard]] const LocalProc& lhs() const;
    [[nodiscard]] const LocalProc& rhs() const;
    [[nodiscard]] std::size_t hash() const;

    bool operator==(const LocalProc& other) const;

private:
    struct Data;
    explicit LocalProc(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    std::shared_ptr<const Data> d_;
};

std::string to_string(const Choreo& c);
std::string to_string(const LocalProc& p);

/// Rejects self-interactions such as `a->a:m`.
Choreo parse_choreo(std::string_view text);

/// Agents mentioned in `c`, sorted.
std::set<std::string> agents(const Choreo& c);

/// Can reach `end` without performing any interaction.
bool terminable(const Choreo& c);
bool terminable(const LocalProc& p);

/// Global steps, labelled `a->b:m`.
std::vector<std::pair<Label, Choreo>> global_next(const Choreo& c);

struct GlobalSemantics {
    using State = Choreo;
    [[nodiscard]] std::vector<std::pair<Label, Choreo>> next(const Choreo& c) const { return global_next(c); }
    [[nodiscard]] bool accepting(const Choreo& c) const { return terminable(c); }
};

LocalProc project(const Choreo& c, const std::string& agent);

/// A send or receive as seen in a local label: `a->b!m` (a sends m to b) or `a->b?m` (b receives m
/// from a).
struct LocalAction {
    std::string from;
    std::string to;
    std::string msg;
    bool send = true;

    bool operator==(const LocalAction&) const = default;
};

Label local_label(const LocalAction& action);
std::optional<LocalAction> parse_local_label(const Label& label);
Label global_label(const std::string& from, const std::string& to, const std::string& msg);

/// Local steps of `p` run by `agent`.
std::vector<std::pair<Label, LocalProc>> local_next(const LocalProc& p, const std::string& agent);

struct LocalSemantics {
    using State = LocalProc;
    std::string agent;

    [[nodiscard]] std::vector<std::pair<Label, LocalProc>> next(const LocalProc& p) const
    {
        return local_next(p, agent);
    }
    [[nodiscard]] bool accepting(const LocalProc& p) const { return terminable(p); }
};

} // namespace sosw::choreo

template <>
struct std::hash<sosw::choreo::Choreo> {
    std::size_t operator()(const sosw::choreo::Choreo& c) const noexcept { return c.hash(); }
};

template <>
struct std::hash<sosw::choreo::LocalProc> {
    std::size_t operator()(const sosw::choreo::LocalProc& p) const noexcept { return p.hash(); }
};

namespace sosw::choreo {

using SyncState = NetworkState<LocalProc, Unit>;
using BufferedState = NetworkState<LocalProc, FifoMemory>;

/// Exactly one send together with its matching receive; labelled with the global interaction.
SyncPolicy<Unit> handshake_sync();
RelabelPolicy handshake_relabel();

/// Asynchronous composition: sends enqueue, receives dequeue from the per-channel FIFO.
SyncPolicy<FifoMemory> buffered_sync();
/// Sends keep the global interaction label; receives become silent.
RelabelPolicy buffered_relabel();

/// The composition of the projections of `c` over its agents (in sorted order).
struct Composition {
    std::vector<std::string> agents;
    NetworkSos<LocalSemantics, Unit> sos;
    SyncState initial;
};

struct BufferedComposition {
    std::vector<std::string> agents;
    NetworkSos<LocalSemantics, FifoMemory> sos;
    BufferedState initial;
};

/// Throws EvalError when `c` mentions no agents.
Composition compose(const Choreo& c);
BufferedComposition compose_buffered(const Choreo& c);

/// Branching bisimulation between the global semantics and the synchronous composition of the
/// projections, with nothing silent.
BisimOutcome<Choreo, SyncState> realisability(const Choreo& c, const ExploreLimits& limits = {});

/// The same check against the buffered composition, where receives are silent.
BisimOutcome<Choreo, BufferedState> buffered_realisability(const Choreo& c, const ExploreLimits& limits = {});

TreeNode to_tree(const Choreo& c);

} // namespace sosw::choreo
