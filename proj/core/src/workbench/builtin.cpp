#include "sosw/workbench/builtin.hpp"

#include "sosw/lang/choreo.hpp"
#include "sosw/lang/lambda.hpp"
#include "sosw/lang/while.hpp"

namespace sosw::workbench {
namespace {

View text(std::string body) { return make_view(ViewKind::text(), std::move(body)); }

template <class T>
std::function<T(const T&)> identity()
{
    return [](const T& t) { return t; };
}

template <class T>
std::function<std::string(const T&)> printer()
{
    return [](const T& t) { return show(t); };
}

template <class T>
std::function<View(const T&)> text_printer()
{
    return [](const T& t) { return text(show(t)); };
}

std::string lines(const std::vector<std::string>& parts)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i > 0 ? "\n" : "") + parts[i];
    return out;
}

std::string param_string(const RunContext& ctx, const char* key, std::string fallback)
{
    if (!ctx.params.contains(key))
        return fallback;
    if (!ctx.params.at(key).is_string())
        throw EvalError(std::string("parameter '") + key + "' must be a string");
    return ctx.params.at(key).get<std::string>();
}

// ---------------------------------------------------------------------------------------------
// Lambda

const lambda::Term::Kind kApp = lambda::Term::Kind::app;

lambda::Term app_part(const lambda::Term& t, std::size_t i)
{
    if (!t.is(kApp))
        throw EvalError("Input must be an application \"A B\" to compare \"A\" and \"B\".");
    return t.child(i);
}

/// Binder names are irrelevant when comparing two terms: `beta-x` and `beta-y` are one action.
Label forget_binder(const Label& l) { return l.text.rfind("beta-", 0) == 0 ? Label("beta") : l; }

// ---------------------------------------------------------------------------------------------
// While

std::string describe_big_step(const whilelang::BigStepResult& r, std::size_t fuel)
{
    switch (r.kind) {
    case whilelang::BigStepResult::Kind::ok:
        return "terminates with " + whilelang::to_string(r.store);
    case whilelang::BigStepResult::Kind::nontermination:
        return "no result within " + std::to_string(fuel) + " loop iterations (last store " +
               whilelang::to_string(r.store) + ")";
    case whilelang::BigStepResult::Kind::assert_failure:
        return "assertion failed: " + whilelang::to_string(*r.failed) + " in " + whilelang::to_string(r.store);
    }
    return {};
}

// ---------------------------------------------------------------------------------------------
// Choreographies

template <class Outcome, class RightPrinter>
WidgetResult realisability_result(const Outcome& outcome, RightPrinter right_printer)
{
    if (outcome.verdict == Verdict::bound)
        throw LimitError(describe_bound(*outcome.bound));
    using Right = std::decay_t<decltype(outcome.right.state(0))>;
    View v = verdict_to_view(outcome, std::function<std::string(const choreo::Choreo&)>(printer<choreo::Choreo>()),
                             std::function<std::string(const Right&)>(right_printer));
    std::string headline = outcome.bisimilar() ? "realisable: the composed projections are bisimilar to the choreography"
                                               : "not realisable";
    WidgetResult r = WidgetResult::from_view(text(headline + "\n" + v.body));
    r.data = {{"verdict", outcome.bisimilar() ? "bisimilar" : "not bisimilar"},
              {"global_states", outcome.left.size()},
              {"composed_states", outcome.right.size()}};
    return r;
}

} // namespace

Language lambda_language()
{
    using lambda::Term;
    LanguageBuilder<Term> b("lambda", "Animator of a simple lambda calculus language",
                            [](std::string_view s) { return lambda::parse_lambda(s); });
    b.language_name("Lambda Calculus with addition")
        .example("succ", "(\\x -> x + 1) 2", "Adds 1 to number 2")
        .example("strategies", "(\\x -> 1) (2 + 3)", "Lazy evaluation skips the argument, strict evaluation does not")
        .example("identities", "((\\x -> x) 1) ((\\y -> y) 1)", "Two applications of an identity, compared by bisimulation")
        .example("capture", "(\\x -> \\y -> x + y) y", "Substitution renames the inner binder")
        .example("twice", "(\\f -> \\x -> f (f x)) (\\n -> n + 1) 0", "Applies the successor twice")
        .example("zero-test", "(\\n -> if0 n then 10 else 20) (1 + 0)", "Branches on the result of an addition")
        .view("View parsed data", std::function<std::string(const Term&)>(lambda::debug_string), ViewKind::text())
        .view("View pretty data", std::function<std::string(const Term&)>([](const Term& t) { return lambda::to_string(t); }),
              ViewKind::code("haskell"))
        .view("Diagram of the structure", std::function<View(const Term&)>(lambda::to_mermaid))
        .steps("Run semantics", identity<Term>(), lambda::FullSemantics{}, text_printer<Term>())
        .steps("Run semantics (with diagrams)", identity<Term>(), lambda::FullSemantics{},
               std::function<View(const Term&)>(lambda::to_mermaid))
        .lts("Build LTS", identity<Term>(), lambda::FullSemantics{}, printer<Term>())
        .lts("Build LTS - Lazy Evaluation", identity<Term>(), lambda::LazySemantics{}, printer<Term>())
        .lts("Build LTS - Strict Evaluation", identity<Term>(), lambda::StrictSemantics{}, printer<Term>());

    Relabelled<lambda::FullSemantics> alpha{lambda::FullSemantics{}, forget_binder};
    b.compare_branch_bisim("Find bisimulation: given 'A B', check if 'A ~ B'", alpha, alpha,
                           std::function<Term(const Term&)>([](const Term& t) { return app_part(t, 0); }),
                           std::function<Term(const Term&)>([](const Term& t) { return app_part(t, 1); }),
                           printer<Term>(), printer<Term>());
    return b.build();
}

Language while_language()
{
    using whilelang::Cmd;
    using whilelang::Config;
    LanguageBuilder<Cmd> b("while", "Animator of a simple while-language",
                           [](std::string_view s) { return whilelang::parse_while(s); });
    auto start = std::function<Config(const Cmd&)>([](const Cmd& c) { return Config::start(c); });
    b.language_name("While-language with contracts")
        .example("counter", "x := 0; while x < 3 inv x <= 3 do x := x + 1", "Counts to three")
        .example("absolute", "x := 0 - 5; if x < 0 then y := 0 - x else y := x; assert 0 <= y",
                 "Absolute value with a contract")
        .example("factorial", "n := 5; f := 1; while 0 < n inv 0 <= n do { f := f * n; n := n - 1 }",
                 "Computes 5! in f")
        .example("swap", "x := 1; y := 2; t := x; x := y; y := t", "Swaps two variables")
        .example("failing", "x := 1; assert x = 2", "An assertion that does not hold")
        .example("uninitialised", "y := x", "Reads a variable that was never assigned")
        .view("View pretty data", std::function<std::string(const Cmd&)>([](const Cmd& c) { return whilelang::to_string(c); }),
              ViewKind::code("pascal"))
        .view("Diagram of the structure",
              std::function<View(const Cmd&)>([](const Cmd& c) { return ast_to_mermaid(whilelang::to_tree(c)); }))
        .steps("Run semantics", start, whilelang::SmallStep{}, text_printer<Config>())
        .lts("Build LTS", start, whilelang::SmallStep{}, printer<Config>())
        .custom("Natural semantics", WidgetKind::custom,
                [](const Cmd& c, const RunContext& ctx) {
                    std::size_t fuel = 10000;
                    if (ctx.params.contains("fuel")) {
                        const json& f = ctx.params.at("fuel");
                        if (!f.is_number_integer() || f.get<long long>() <= 0)
                            throw EvalError("parameter 'fuel' must be a positive integer");
                        fuel = f.get<std::size_t>();
                    }
                    auto r = whilelang::big_step(c, {}, fuel);
                    WidgetResult out = WidgetResult::from_view(text(describe_big_step(r, fuel)));
                    return out;
                })
        .custom("Weakest precondition", WidgetKind::custom,
                [](const Cmd& c, const RunContext& ctx) {
                    auto post = whilelang::parse_bexp(param_string(ctx, "post", "tt"));
                    auto result = whilelang::wp(c, post);
                    std::vector<std::string> out{"precondition: " + whilelang::to_string(result.precondition)};
                    for (std::size_t i = 0; i < result.obligations.size(); ++i)
                        out.push_back("obligation " + std::to_string(i + 1) + ": " +
                                      whilelang::to_string(result.obligations[i]));
                    return WidgetResult::from_view(text(lines(out)));
                })
        .check("Check", [](const Cmd& c) { return whilelang::check_while(c); });
    return b.build();
}

Language choreo_language()
{
    using choreo::Choreo;
    LanguageBuilder<Choreo> b("choreo", "Realisability of choreographies",
                              [](std::string_view s) { return choreo::parse_choreo(s); });
    b.language_name("Choreographies")
        .example("workers", "ctr->wrk1:Work;ctr->wrk2:Work;(wrk1->ctr:Done||wrk2->ctr:Done)",
                 "A controller hands out work to two workers and waits for both")
        .example("choice", "a->b:x + a->c:y", "A choice that only a and one of b or c learn about")
        .example("ping-pong", "a->b:ping; b->a:pong", "One round trip")
        .example("informed-choice", "(a->b:x; b->c:x) + (a->b:y; b->c:y)", "Every agent learns the choice")
        .view("View pretty data",
              std::function<std::string(const Choreo&)>([](const Choreo& c) { return choreo::to_string(c); }),
              ViewKind::text())
        .view("Diagram of the structure",
              std::function<View(const Choreo&)>([](const Choreo& c) { return ast_to_mermaid(choreo::to_tree(c)); }))
        .view("Projections", std::function<View(const Choreo&)>([](const Choreo& c) {
                  std::vector<std::string> out;
                  for (const auto& agent : choreo::agents(c))
                      out.push_back(agent + ": " + choreo::to_string(choreo::project(c, agent)));
                  return text(lines(out));
              }))
        .steps("Run semantics", identity<Choreo>(), choreo::GlobalSemantics{}, text_printer<Choreo>())
        .lts("Global LTS", identity<Choreo>(), choreo::GlobalSemantics{}, printer<Choreo>())
        .custom("Composed LTS", WidgetKind::lts,
                [](const Choreo& c, const RunContext& ctx) {
                    auto comp = choreo::compose(c);
                    auto graph = explore(comp.sos, comp.initial, ctx.limits);
                    WidgetResult r = WidgetResult::from_view(lts_to_mermaid(graph, printer<choreo::SyncState>()));
                    r.data = lts_summary(graph);
                    return r;
                })
        .custom("Realisability via bisimulation", WidgetKind::bisim,
                [](const Choreo& c, const RunContext& ctx) {
                    return realisability_result(choreo::realisability(c, ctx.limits), printer<choreo::SyncState>());
                })
        .custom("Realisability via bisimulation (buffered)", WidgetKind::bisim,
                [](const Choreo& c, const RunContext& ctx) {
                    return realisability_result(choreo::buffered_realisability(c, ctx.limits),
                                                printer<choreo::BufferedState>());
                })
        .custom("Trace equivalence", WidgetKind::traces, [](const Choreo& c, const RunContext& ctx) {
            if (choreo::agents(c).empty())
                return WidgetResult::from_view(text("trace equivalent"));
            auto comp = choreo::compose(c);
            auto outcome = compare_traces(choreo::GlobalSemantics{}, comp.sos, c, comp.initial, SilentSpec{}, ctx.limits);
            if (outcome.verdict.kind == TraceVerdict::Kind::bound)
                throw LimitError(describe_bound(*outcome.verdict.bound));
            WidgetResult r = WidgetResult::from_view(trace_verdict_to_view(outcome.verdict));
            r.data = {{"verdict", outcome.equal() ? "equal" : "distinct"}};
            return r;
        });
    return b.build();
}

void register_builtins(Registry& registry)
{
    registry.add(while_language());
    registry.add(lambda_language());
    registry.add(choreo_language());
}

} // namespace sosw::workbench
