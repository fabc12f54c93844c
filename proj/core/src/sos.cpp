#include "sosw/sos.hpp"

#include <stdexcept>

namespace sosw {

std::string to_string(BoundReason reason)
{
    switch (reason) {
    case BoundReason::states:
        return "states";
    case BoundReason::depth:
        return "depth";
    case BoundReason::timeout:
        return "timeout";
    }
    return "unknown";
}

std::size_t LtsGraph::edge_count() const
{
    std::size_t n = 0;
    for (const auto& ts : out_)
        n += ts.size();
    return n;
}

std::vector<Edge> LtsGraph::edges() const
{
    std::vector<Edge> result;
    result.reserve(edge_count());
    for (std::size_t s = 0; s < out_.size(); ++s)
        for (const auto& t : out_[s])
            result.push_back(Edge{s, t.label, t.target});
    std::sort(result.begin(), result.end());
    return result;
}

std::size_t LtsGraph::add_node(bool accepting)
{
    out_.emplace_back();
    accepting_.push_back(accepting);
    truncated_.push_back(false);
    return out_.size() - 1;
}

void LtsGraph::add_transition(std::size_t source, Label label, std::size_t target)
{
    if (source >= out_.size() || target >= out_.size())
        throw std::out_of_range("transition endpoint is not a state of the LTS");
    Transition t{std::move(label), target};
    auto& ts = out_[source];
    if (std::find(ts.begin(), ts.end(), t) == ts.end())
        ts.push_back(std::move(t));
}

void LtsGraph::mark_truncated(std::size_t state, BoundReason reason)
{
    truncated_.at(state) = true;
    if (!bound_)
        bound_ = reason;
}

std::set<Trace> traces(const LtsGraph& lts, std::size_t max_len)
{
    std::set<Trace> result;
    if (lts.size() == 0)
        return result;
    Trace current;
    // Depth-first path enumeration; every prefix is itself a trace.
    std::function<void(std::size_t)> walk = [&](std::size_t state) {
        result.insert(current);
        if (current.size() == max_len)
            return;
        for (const auto& t : lts.out(state)) {
            current.push_back(t.label);
            walk(t.target);
            current.pop_back();
        }
    };
    walk(0);
    return result;
}

std::string to_string(const Trace& trace)
{
    if (trace.empty())
        return "ε";
    std::string out;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (i > 0)
            out += "·";
        out += to_string(trace[i]);
    }
    return out;
}

ExplicitSemantics::ExplicitSemantics(std::vector<std::vector<std::pair<std::string, std::size_t>>> table,
                                     std::vector<bool> accepting)
    : accepting_(std::move(accepting))
{
    table_.reserve(table.size());
    for (auto& row : table) {
        std::vector<std::pair<Label, std::size_t>> converted;
        for (auto& [label, target] : row) {
            if (target >= table.size())
                throw std::out_of_range("explicit transition targets unknown state " + std::to_string(target));
            converted.emplace_back(Label{std::move(label)}, target);
        }
        table_.push_back(std::move(converted));
    }
    if (!accepting_.empty() && accepting_.size() != table_.size())
        throw std::invalid_argument("acceptance vector must cover every state");
}

std::vector<std::pair<Label, ExplicitSemantics::State>> ExplicitSemantics::next(const State& s) const
{
    return table_.at(s);
}

bool ExplicitSemantics::accepting(const State& s) const
{
    if (accepting_.empty())
        return table_.at(s).empty();
    return accepting_.at(s);
}

} // namespace sosw
