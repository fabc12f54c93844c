#include "sosw/render.hpp"

#include <stdexcept>

namespace sosw {
namespace {

std::string join_lines(const std::vector<std::string>& lines)
{
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i > 0)
            out += '\n';
        out += lines[i];
    }
    return out;
}

std::string node_text(const LtsGraph& lts, const IndexPrinter& printer, std::size_t i)
{
    std::string text = printer ? printer(i) : std::string{};
    if (text.empty())
        text = std::to_string(i);
    if (lts.truncated(i))
        text += " ...";
    return text;
}

std::string label_text(const Label& label, const LabelPrinter& printer)
{
    return printer ? printer(label) : to_string(label);
}

std::string dot_escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        default:
            out += c;
        }
    }
    return out;
}

void preorder(const TreeNode& node, std::vector<std::string>& nodes, std::vector<std::string>& edges)
{
    const std::size_t id = nodes.size();
    nodes.push_back("  n" + std::to_string(id) + "[\"" + mermaid_escape(node.label) + "\"]");
    for (const auto& child : node.children) {
        const std::size_t child_id = nodes.size();
        edges.push_back("  n" + std::to_string(id) + " --> n" + std::to_string(child_id));
        preorder(child, nodes, edges);
    }
}

} // namespace

ViewKind ViewKind::code(std::string language_hint)
{
    if (language_hint.empty())
        throw std::invalid_argument("code views need a language hint");
    return ViewKind(ViewKindTag::code, std::move(language_hint));
}

std::string to_string(ViewKindTag tag)
{
    switch (tag) {
    case ViewKindTag::text:
        return "text";
    case ViewKindTag::code:
        return "code";
    case ViewKindTag::mermaid:
        return "mermaid";
    }
    return "text";
}

View make_view(ViewKind kind, std::string body) { return View{std::move(kind), std::move(body)}; }

std::string mermaid_escape(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '"':
            out += "#quot;";
            break;
        case '\n':
            out += "<br/>";
            break;
        case '`':
            break;
        default:
            out += c;
        }
    }
    return out;
}

View ast_to_mermaid(const TreeNode& tree)
{
    std::vector<std::string> nodes;
    std::vector<std::string> edges;
    preorder(tree, nodes, edges);
    std::vector<std::string> lines{"flowchart TD"};
    lines.insert(lines.end(), nodes.begin(), nodes.end());
    lines.insert(lines.end(), edges.begin(), edges.end());
    return View{ViewKind::mermaid(), join_lines(lines)};
}

View lts_to_mermaid(const LtsGraph& lts, const IndexPrinter& state_printer, const LabelPrinter& label_printer)
{
    std::vector<std::string> lines{"flowchart LR", "  classDef hidden display: none;", "  start[\" \"]:::hidden"};
    if (lts.size() > 0)
        lines.emplace_back("  start --> st0");
    for (std::size_t i = 0; i < lts.size(); ++i) {
        std::string id = "st" + std::to_string(i);
        std::string text = "\"" + mermaid_escape(node_text(lts, state_printer, i)) + "\"";
        lines.push_back("  " + id + (lts.accepting(i) ? "(((" + text + ")))" : "[" + text + "]"));
    }
    for (const Edge& e : lts.edges()) {
        lines.push_back("  st" + std::to_string(e.source) + " -->|\"" +
                        mermaid_escape(label_text(e.label, label_printer)) + "\"| st" + std::to_string(e.target));
    }
    return View{ViewKind::mermaid(), join_lines(lines)};
}

std::string lts_to_dot(const LtsGraph& lts, const IndexPrinter& state_printer, const LabelPrinter& label_printer)
{
    std::vector<std::string> lines{"digraph lts {", "  rankdir=LR;", "  start [shape=point, style=invis];"};
    if (lts.size() > 0)
        lines.emplace_back("  start -> st0;");
    for (std::size_t i = 0; i < lts.size(); ++i) {
        lines.push_back("  st" + std::to_string(i) + " [label=\"" + dot_escape(node_text(lts, state_printer, i)) +
                        "\"" + (lts.accepting(i) ? ", peripheries=2" : "") + "];");
    }
    for (const Edge& e : lts.edges()) {
        lines.push_back("  st" + std::to_string(e.source) + " -> st" + std::to_string(e.target) + " [label=\"" +
                        dot_escape(label_text(e.label, label_printer)) + "\"];");
    }
    lines.emplace_back("}");
    return join_lines(lines);
}

std::string describe_bound(const BoundInfo& bound)
{
    switch (bound.reason) {
    case BoundReason::timeout:
        return "timeout after " + std::to_string(bound.limit) + "ms";
    case BoundReason::states:
        return "state limit of " + std::to_string(bound.limit) + " reached";
    case BoundReason::depth:
        return "depth limit of " + std::to_string(bound.limit) + " reached";
    }
    return "limit reached";
}

View verdict_to_view(const GraphVerdict& verdict, const IndexPrinter& left_printer,
                     const IndexPrinter& right_printer)
{
    std::vector<std::string> lines;
    switch (verdict.verdict) {
    case Verdict::bound:
        lines.push_back(verdict.bound ? describe_bound(*verdict.bound) : "limit reached");
        break;
    case Verdict::bisimilar:
        for (auto [l, r] : verdict.relation)
            lines.push_back(left_printer(l) + "\t" + right_printer(r));
        break;
    case Verdict::not_bisimilar: {
        const Play& play = *verdict.play;
        auto printer = [&](Side s) -> const IndexPrinter& { return s == Side::left ? left_printer : right_printer; };
        auto indent = [](Side s) { return std::string(s == Side::left ? "" : "    "); };
        for (const PlayStep& step : play.steps) {
            const IndexPrinter& p = printer(step.side);
            std::string line = indent(step.side) + to_string(step.side) + ": ";
            if (step.path.empty()) {
                if (step.kind == PlayStep::Kind::move)
                    line += "stays at " + p(step.from);
                else
                    line += p(step.from) + (step.response ? " (accepting)" : " is accepting");
            } else {
                line += p(step.from);
                for (const Edge& e : step.path)
                    line += " --" + to_string(e.label) + "--> " + p(e.target);
                if (step.kind == PlayStep::Kind::accept)
                    line += " (accepting)";
            }
            lines.push_back(line);
        }
        std::string end = indent(play.stuck) + to_string(play.stuck);
        if (play.final_challenge == PlayStep::Kind::move)
            end += " cannot match '" + to_string(play.unmatched) + "'";
        else
            end += " cannot reach an accepting state";
        lines.push_back(end);
        break;
    }
    }
    return View{ViewKind::text(), join_lines(lines)};
}

View trace_verdict_to_view(const TraceVerdict& verdict)
{
    switch (verdict.kind) {
    case TraceVerdict::Kind::equal:
        return View{ViewKind::text(), "trace equivalent"};
    case TraceVerdict::Kind::distinct:
        return View{ViewKind::text(), to_string(verdict.owner) + " can perform " + to_string(verdict.witness) + ", " +
                                          to_string(opposite(verdict.owner)) + " cannot"};
    case TraceVerdict::Kind::bound:
        return View{ViewKind::text(), verdict.bound ? describe_bound(*verdict.bound) : "limit reached"};
    }
    return View{};
}

} // namespace sosw
