#pragma once

// Runtime registry of languages and their widgets.
//
// A language is a parser plus examples plus an ordered list of named widgets. Programs are kept
// type-erased so that one registry can host languages with unrelated syntax trees; the typed
// side lives in LanguageBuilder, which wraps each widget constructor into a closure over the
// concrete program type.

#include "sosw/equivalence.hpp"
#include "sosw/errors.hpp"
#include "sosw/render.hpp"
#include "sosw/sos.hpp"

#include <json.hpp>

#include <any>
#include <chrono>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sosw::workbench {

using json = nlohmann::json;

enum class WidgetKind { view, steps, lts, bisim, traces, check, custom };

std::string to_string(WidgetKind kind);

struct Example {
    std::string name;
    std::string program;
    std::string description;
};

/// What a widget produced.
struct WidgetResult {
    enum class Kind { text, code, mermaid, warnings };

    Kind kind = Kind::text;
    std::string body;
    /// For code results.
    std::string language_hint;
    std::vector<std::string> warnings;
    /// Extra structured data, e.g. the successor list of a steps widget.
    json data;

    [[nodiscard]] bool invisible() const { return kind == Kind::warnings && warnings.empty(); }

    static WidgetResult from_view(const View& view);
};

std::string to_string(WidgetResult::Kind kind);

/// `{"kind", "body", ...}` as used by the service.
json to_json(const WidgetResult& result);

/// Limits after applying request overrides and the hard caps.
struct RunContext {
    ExploreLimits limits;
    json params = json::object();
};

/// Hard upper bounds for request-supplied limits.
struct LimitCaps {
    std::size_t max_states = 200000;
    std::size_t max_depth = 100000;
    std::chrono::milliseconds timeout{60000};
};

/// Reads `max_states`, `max_depth` and `timeout_ms` from `params`, clamped to `caps`.
ExploreLimits limits_from(const json& params, const ExploreLimits& defaults = {}, const LimitCaps& caps = {});

/// An interactive walk through a semantics, with history.
class Stepper {
public:
    virtual ~Stepper() = default;

    [[nodiscard]] virtual View view() const = 0;
    [[nodiscard]] virtual std::string state_text() const = 0;
    [[nodiscard]] virtual std::vector<std::string> successor_labels() const = 0;
    [[nodiscard]] virtual bool accepting() const = 0;
    /// Labels taken so far.
    [[nodiscard]] virtual const std::vector<std::string>& history() const = 0;

    /// Takes successor `choice`; throws EvalError if there is no such successor.
    virtual void step(std::size_t choice) = 0;
    /// Takes the first successor carrying `label`.
    void step_label(const std::string& label);
    virtual void undo() = 0;
    virtual void reset() = 0;

    /// `{"state", "successors":[{"label","index"}], "accepting", "depth", "history", "view"}`
    [[nodiscard]] json to_json() const;
};

template <Semantics S>
class SosStepper final : public Stepper {
public:
    using State = StateOf<S>;
    using Printer = std::function<View(const State&)>;

    SosStepper(S sem, State init, Printer printer)
        : sem_(std::move(sem)), printer_(std::move(printer)), path_{std::move(init)}
    {
        refresh();
    }

    [[nodiscard]] View view() const override { return printer_(path_.back()); }
    [[nodiscard]] std::string state_text() const override { return show(path_.back()); }
    [[nodiscard]] std::vector<std::string> successor_labels() const override
    {
        std::vector<std::string> out;
        for (const auto& [label, target] : options_)
            out.push_back(sosw::to_string(label));
        return out;
    }
    [[nodiscard]] bool accepting() const override { return is_accepting(sem_, path_.back()); }
    [[nodiscard]] const std::vector<std::string>& history() const override { return labels_; }
    [[nodiscard]] const State& current() const { return path_.back(); }
    [[nodiscard]] const State& initial() const { return path_.front(); }

    void step(std::size_t choice) override
    {
        if (options_.empty())
            throw EvalError("no successors: the current state cannot evolve");
        if (choice >= options_.size())
            throw EvalError("no successor with index " + std::to_string(choice) + " (there are " +
                            std::to_string(options_.size()) + ")");
        labels_.push_back(sosw::to_string(options_[choice].first));
        path_.push_back(options_[choice].second);
        refresh();
    }

    void undo() override
    {
        if (path_.size() == 1)
            throw EvalError("nothing to undo");
        path_.pop_back();
        labels_.pop_back();
        refresh();
    }

    void reset() override
    {
        path_.erase(path_.begin() + 1, path_.end());
        labels_.clear();
        refresh();
    }

private:
    void refresh() { options_ = successors(sem_, path_.back()); }

    S sem_;
    Printer printer_;
    std::vector<State> path_;
    std::vector<std::string> labels_;
    std::vector<Step<S>> options_;
};

/// Applies `params.choices` (indices) or `params.labels` to a fresh stepper and reports where it
/// ends up.
WidgetResult run_steps(Stepper& stepper, const json& params);

/// State, edge and truncation counts of an explored graph.
json lts_summary(const LtsGraph& graph);

using Program = std::shared_ptr<const std::any>;

struct Widget {
    std::string name;
    WidgetKind kind = WidgetKind::view;
    std::function<WidgetResult(const std::any&, const RunContext&)> run;
    /// Only for steps widgets.
    std::function<std::unique_ptr<Stepper>(const std::any&)> stepper;
};

struct Language {
    std::string id;
    std::string name;
    std::string language_name;
    std::function<std::any(std::string_view)> parse;
    std::vector<Example> examples;
    std::vector<Widget> widgets;

    [[nodiscard]] const Widget* widget(std::string_view name) const;
    [[nodiscard]] const Example* example(std::string_view name) const;
};

/// Typed front end for assembling a Language.
template <class Prog>
class LanguageBuilder {
public:
    LanguageBuilder(std::string id, std::string name, std::function<Prog(std::string_view)> parser)
    {
        lang_.id = std::move(id);
        lang_.name = std::move(name);
        lang_.language_name = lang_.name;
        lang_.parse = [parser = std::move(parser)](std::string_view text) { return std::any(parser(text)); };
    }

    LanguageBuilder& language_name(std::string name)
    {
        lang_.language_name = std::move(name);
        return *this;
    }

    LanguageBuilder& example(std::string name, std::string program, std::string description)
    {
        lang_.examples.push_back(Example{std::move(name), std::move(program), std::move(description)});
        return *this;
    }

    LanguageBuilder& view(std::string name, std::function<View(const Prog&)> v)
    {
        return add(std::move(name), WidgetKind::view,
                   [v = std::move(v)](const Prog& p, const RunContext&) { return WidgetResult::from_view(v(p)); });
    }

    /// Text or code view from a string projection.
    LanguageBuilder& view(std::string name, std::function<std::string(const Prog&)> v, ViewKind kind)
    {
        return view(std::move(name), std::function<View(const Prog&)>([v = std::move(v), kind](const Prog& p) {
                        return make_view(kind, v(p));
                    }));
    }

    template <Semantics S>
    LanguageBuilder& steps(std::string name, std::function<StateOf<S>(const Prog&)> init, S sem,
                           std::function<View(const StateOf<S>&)> printer)
    {
        Widget w;
        w.name = std::move(name);
        w.kind = WidgetKind::steps;
        w.stepper = [init, sem, printer](const std::any& p) -> std::unique_ptr<Stepper> {
            return std::make_unique<SosStepper<S>>(sem, init(std::any_cast<const Prog&>(p)), printer);
        };
        auto make = w.stepper;
        w.run = [make](const std::any& p, const RunContext& ctx) { return run_steps(*make(p), ctx.params); };
        return push(std::move(w));
    }

    template <Semantics S>
    LanguageBuilder& lts(std::string name, std::function<StateOf<S>(const Prog&)> init, S sem,
                         std::function<std::string(const StateOf<S>&)> printer, LabelPrinter label_printer = {})
    {
        return add(std::move(name), WidgetKind::lts,
                   [init = std::move(init), sem = std::move(sem), printer = std::move(printer),
                    label_printer = std::move(label_printer)](const Prog& p, const RunContext& ctx) {
                       auto graph = explore(sem, init(p), ctx.limits);
                       WidgetResult r = WidgetResult::from_view(lts_to_mermaid(graph, printer, label_printer));
                       r.data = lts_summary(graph);
                       r.data["dot"] = lts_to_dot(graph, state_printer_for(graph, printer), label_printer);
                       return r;
                   });
    }

    template <Semantics S1, Semantics S2>
    LanguageBuilder& compare_branch_bisim(std::string name, S1 sem1, S2 sem2,
                                          std::function<StateOf<S1>(const Prog&)> init1,
                                          std::function<StateOf<S2>(const Prog&)> init2,
                                          std::function<std::string(const StateOf<S1>&)> printer1,
                                          std::function<std::string(const StateOf<S2>&)> printer2,
                                          SilentSpec silent = {})
    {
        return add(std::move(name), WidgetKind::bisim,
                   [=](const Prog& p, const RunContext& ctx) {
                       auto outcome = compare_branching_bisim(sem1, sem2, init1(p), init2(p), silent, ctx.limits);
                       if (outcome.verdict == Verdict::bound)
                           throw LimitError(describe_bound(*outcome.bound));
                       WidgetResult r = WidgetResult::from_view(verdict_to_view(outcome, printer1, printer2));
                       r.data = {{"verdict", outcome.bisimilar() ? "bisimilar" : "not bisimilar"},
                                 {"left_states", outcome.left.size()},
                                 {"right_states", outcome.right.size()}};
                       return r;
                   });
    }

    template <Semantics S1, Semantics S2>
    LanguageBuilder& compare_traces(std::string name, S1 sem1, S2 sem2,
                                    std::function<StateOf<S1>(const Prog&)> init1,
                                    std::function<StateOf<S2>(const Prog&)> init2, SilentSpec silent = {})
    {
        return add(std::move(name), WidgetKind::traces, [=](const Prog& p, const RunContext& ctx) {
            auto outcome = sosw::compare_traces(sem1, sem2, init1(p), init2(p), silent, ctx.limits);
            if (outcome.verdict.kind == TraceVerdict::Kind::bound)
                throw LimitError(describe_bound(*outcome.verdict.bound));
            WidgetResult r = WidgetResult::from_view(trace_verdict_to_view(outcome.verdict));
            r.data = {{"verdict", outcome.equal() ? "equal" : "distinct"}};
            return r;
        });
    }

    LanguageBuilder& check(std::string name, std::function<std::vector<std::string>(const Prog&)> analysis)
    {
        return add(std::move(name), WidgetKind::check, [a = std::move(analysis)](const Prog& p, const RunContext&) {
            WidgetResult r;
            r.kind = WidgetResult::Kind::warnings;
            r.warnings = a(p);
            return r;
        });
    }

    LanguageBuilder& custom(std::string name, WidgetKind kind,
                            std::function<WidgetResult(const Prog&, const RunContext&)> run)
    {
        return add(std::move(name), kind, std::move(run));
    }

    [[nodiscard]] Language build() const { return lang_; }

private:
    LanguageBuilder& add(std::string name, WidgetKind kind, std::function<WidgetResult(const Prog&, const RunContext&)> f)
    {
        Widget w;
        w.name = std::move(name);
        w.kind = kind;
        w.run = [f = std::move(f)](const std::any& p, const RunContext& ctx) {
            return f(std::any_cast<const Prog&>(p), ctx);
        };
        return push(std::move(w));
    }

    LanguageBuilder& push(Widget w)
    {
        if (lang_.widget(w.name))
            throw std::invalid_argument("duplicate widget name '" + w.name + "'");
        lang_.widgets.push_back(std::move(w));
        return *this;
    }

    Language lang_;
};

class Registry {
public:
    explicit Registry(LimitCaps caps = {}, std::size_t parse_cache_size = 64)
        : caps_(caps), cache_capacity_(parse_cache_size)
    {
    }

    /// Throws std::invalid_argument on a duplicate id or duplicate example names.
    const std::string& add(Language language);

    [[nodiscard]] const Language* find(std::string_view id) const;
    [[nodiscard]] const Language& get(std::string_view id) const;
    [[nodiscard]] std::vector<const Language*> languages() const;
    [[nodiscard]] const LimitCaps& caps() const { return caps_; }

    /// Parses `text` (through the cache) with the language's parser.
    [[nodiscard]] Program parse(const Language& lang, const std::string& text) const;

    /// Runs one widget on one program. Throws ParseError, EvalError or LimitError; throws
    /// std::out_of_range for unknown languages or widgets.
    [[nodiscard]] WidgetResult run(std::string_view language, std::string_view widget, const std::string& program,
                                   const json& params = json::object()) const;

    /// `GET /api/languages` payload.
    [[nodiscard]] json describe() const;

private:
    LimitCaps caps_;
    std::vector<std::unique_ptr<Language>> languages_;

    std::size_t cache_capacity_;
    mutable std::mutex cache_mutex_;
    mutable std::list<std::pair<std::string, Program>> cache_;
    mutable std::unordered_map<std::string, std::list<std::pair<std::string, Program>>::iterator> cache_index_;
};

} // namespace sosw::workbench
