#pragma once

// Text, code and Mermaid views of terms, transition systems and verdicts.

#include "sosw/equivalence.hpp"
#include "sosw/sos.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sosw {

enum class ViewKindTag { text, code, mermaid };

class ViewKind {
public:
    static ViewKind text() { return ViewKind(ViewKindTag::text, {}); }
    static ViewKind mermaid() { return ViewKind(ViewKindTag::mermaid, {}); }
    static ViewKind code(std::string language_hint);

    [[nodiscard]] ViewKindTag tag() const { return tag_; }
    [[nodiscard]] const std::string& language_hint() const { return hint_; }

    bool operator==(const ViewKind&) const = default;

private:
    ViewKind(ViewKindTag tag, std::string hint) : tag_(tag), hint_(std::move(hint)) {}

    ViewKindTag tag_;
    std::string hint_;
};

std::string to_string(ViewKindTag tag);

struct View {
    ViewKind kind = ViewKind::text();
    std::string body;
};

View make_view(ViewKind kind, std::string body);

/// Generic labelled tree that languages project their syntax onto.
struct TreeNode {
    std::string label;
    std::vector<TreeNode> children;
};

/// Escapes text for a quoted Mermaid label: `"` becomes `#quot;`, newlines become `<br/>`,
/// backticks are dropped.
std::string mermaid_escape(std::string_view text);

/// `flowchart TD` with nodes n0..nK in pre-order, followed by parent-to-child edges.
View ast_to_mermaid(const TreeNode& tree);

using IndexPrinter = std::function<std::string(std::size_t)>;
using LabelPrinter = std::function<std::string(const Label&)>;

/// `flowchart LR` rendering of an explored LTS. Node ids st0..stN follow state indices, the
/// initial state is reached from a hidden start node, accepting states are drawn as double
/// circles and truncated states carry a trailing `...`. A state printed as "" shows its index.
View lts_to_mermaid(const LtsGraph& lts, const IndexPrinter& state_printer, const LabelPrinter& label_printer = {});

/// Graphviz alternative with the same ordering rules.
std::string lts_to_dot(const LtsGraph& lts, const IndexPrinter& state_printer, const LabelPrinter& label_printer = {});

template <class State>
IndexPrinter state_printer_for(const Lts<State>& lts, std::function<std::string(const State&)> printer)
{
    return [&lts, printer = std::move(printer)](std::size_t i) { return printer(lts.state(i)); };
}

template <class State>
View lts_to_mermaid(const Lts<State>& lts, std::function<std::string(const State&)> printer,
                    const LabelPrinter& label_printer = {})
{
    return lts_to_mermaid(static_cast<const LtsGraph&>(lts), state_printer_for(lts, std::move(printer)),
                          label_printer);
}

/// Text view of a bisimulation verdict. Related pairs are tab-separated, one per line; a
/// distinguishing play lists one move per line, right-side moves indented.
View verdict_to_view(const GraphVerdict& verdict, const IndexPrinter& left_printer,
                     const IndexPrinter& right_printer);

template <class S1, class S2>
View verdict_to_view(const BisimOutcome<S1, S2>& outcome, std::function<std::string(const S1&)> left_printer,
                     std::function<std::string(const S2&)> right_printer)
{
    GraphVerdict v{outcome.verdict, outcome.relation, outcome.play, outcome.bound};
    return verdict_to_view(v, state_printer_for(outcome.left, std::move(left_printer)),
                           state_printer_for(outcome.right, std::move(right_printer)));
}

View trace_verdict_to_view(const TraceVerdict& verdict);

/// One-line description of an exploration bound, e.g. `timeout after 5000ms`.
std::string describe_bound(const BoundInfo& bound);

} // namespace sosw
