#include "sosw/workbench/registry.hpp"

#include <algorithm>
#include <set>

namespace sosw::workbench {

std::string to_string(WidgetKind kind)
{
    switch (kind) {
    case WidgetKind::view:
        return "view";
    case WidgetKind::steps:
        return "steps";
    case WidgetKind::lts:
        return "lts";
    case WidgetKind::bisim:
        return "bisim";
    case WidgetKind::traces:
        return "traces";
    case WidgetKind::check:
        return "check";
    case WidgetKind::custom:
        return "custom";
    }
    return "custom";
}

std::string to_string(WidgetResult::Kind kind)
{
    switch (kind) {
    case WidgetResult::Kind::text:
        return "text";
    case WidgetResult::Kind::code:
        return "code";
    case WidgetResult::Kind::mermaid:
        return "mermaid";
    case WidgetResult::Kind::warnings:
        return "warnings";
    }
    return "text";
}

WidgetResult WidgetResult::from_view(const View& view)
{
    WidgetResult r;
    switch (view.kind.tag()) {
    case ViewKindTag::text:
        r.kind = Kind::text;
        break;
    case ViewKindTag::code:
        r.kind = Kind::code;
        r.language_hint = view.kind.language_hint();
        break;
    case ViewKindTag::mermaid:
        r.kind = Kind::mermaid;
        break;
    }
    r.body = view.body;
    return r;
}

json to_json(const WidgetResult& result)
{
    json out{{"kind", to_string(result.kind)}};
    if (result.kind == WidgetResult::Kind::warnings) {
        out["body"] = result.warnings;
        out["invisible"] = result.invisible();
    } else {
        out["body"] = result.body;
    }
    if (result.kind == WidgetResult::Kind::code)
        out["language"] = result.language_hint;
    if (!result.data.is_null())
        out["data"] = result.data;
    return out;
}

ExploreLimits limits_from(const json& params, const ExploreLimits& defaults, const LimitCaps& caps)
{
    ExploreLimits limits = defaults;
    auto read = [&params](const char* key) -> std::optional<std::size_t> {
        if (!params.is_object() || !params.contains(key))
            return std::nullopt;
        const json& v = params.at(key);
        if (!v.is_number_integer() || v.get<long long>() <= 0)
            throw EvalError(std::string("parameter '") + key + "' must be a positive integer");
        return v.get<std::size_t>();
    };
    if (auto v = read("max_states"))
        limits.max_states = *v;
    if (auto v = read("max_depth"))
        limits.max_depth = *v;
    if (auto v = read("timeout_ms"))
        limits.timeout = std::chrono::milliseconds(*v);
    limits.max_states = std::min(limits.max_states, caps.max_states);
    limits.max_depth = std::min(limits.max_depth, caps.max_depth);
    limits.timeout = std::min(limits.timeout, caps.timeout);
    return limits;
}

void Stepper::step_label(const std::string& label)
{
    auto labels = successor_labels();
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end())
        throw EvalError("no successor labelled '" + label + "'");
    step(static_cast<std::size_t>(it - labels.begin()));
}

json Stepper::to_json() const
{
    json successors = json::array();
    auto labels = successor_labels();
    for (std::size_t i = 0; i < labels.size(); ++i)
        successors.push_back({{"label", labels[i]}, {"index", i}});
    View v = view();
    return {{"state", state_text()},
            {"successors", successors},
            {"accepting", accepting()},
            {"depth", history().size()},
            {"history", history()},
            {"view", {{"kind", sosw::to_string(v.kind.tag())}, {"body", v.body}}}};
}

WidgetResult run_steps(Stepper& stepper, const json& params)
{
    if (params.is_object() && params.contains("choices")) {
        for (const json& c : params.at("choices")) {
            if (!c.is_number_integer() || c.get<long long>() < 0)
                throw EvalError("step choices must be non-negative integers");
            stepper.step(c.get<std::size_t>());
        }
    }
    if (params.is_object() && params.contains("labels")) {
        for (const json& l : params.at("labels")) {
            if (!l.is_string())
                throw EvalError("step labels must be strings");
            stepper.step_label(l.get<std::string>());
        }
    }
    WidgetResult r = WidgetResult::from_view(stepper.view());
    r.data = stepper.to_json();
    return r;
}

json lts_summary(const LtsGraph& graph)
{
    std::size_t truncated = 0;
    std::size_t accepting = 0;
    for (std::size_t i = 0; i < graph.size(); ++i) {
        truncated += graph.truncated(i) ? 1 : 0;
        accepting += graph.accepting(i) ? 1 : 0;
    }
    json out{{"states", graph.size()},
             {"edges", graph.edge_count()},
             {"accepting", accepting},
             {"truncated", truncated},
             {"complete", graph.complete()}};
    if (auto b = graph.bound())
        out["bound"] = sosw::to_string(*b);
    return out;
}

const Widget* Language::widget(std::string_view name) const
{
    for (const auto& w : widgets)
        if (w.name == name)
            return &w;
    return nullptr;
}

const Example* Language::example(std::string_view name) const
{
    for (const auto& e : examples)
        if (e.name == name)
            return &e;
    return nullptr;
}

const std::string& Registry::add(Language language)
{
    if (language.id.empty())
        throw std::invalid_argument("a language needs an id");
    if (find(language.id))
        throw std::invalid_argument("language '" + language.id + "' is already registered");
    if (!language.parse)
        throw std::invalid_argument("language '" + language.id + "' has no parser");
    std::set<std::string> names;
    for (const auto& e : language.examples)
        if (!names.insert(e.name).second)
            throw std::invalid_argument("duplicate example name '" + e.name + "'");
    names.clear();
    for (const auto& w : language.widgets)
        if (!names.insert(w.name).second)
            throw std::invalid_argument("duplicate widget name '" + w.name + "'");
    languages_.push_back(std::make_unique<Language>(std::move(language)));
    return languages_.back()->id;
}

const Language* Registry::find(std::string_view id) const
{
    for (const auto& l : languages_)
        if (l->id == id)
            return l.get();
    return nullptr;
}

const Language& Registry::get(std::string_view id) const
{
    if (const Language* l = find(id))
        return *l;
    throw std::out_of_range("unknown language '" + std::string(id) + "'");
}

std::vector<const Language*> Registry::languages() const
{
    std::vector<const Language*> out;
    for (const auto& l : languages_)
        out.push_back(l.get());
    return out;
}

Program Registry::parse(const Language& lang, const std::string& text) const
{
    const std::string key = lang.id + '\0' + text;
    {
        std::lock_guard lock(cache_mutex_);
        auto it = cache_index_.find(key);
        if (it != cache_index_.end()) {
            cache_.splice(cache_.begin(), cache_, it->second);
            return it->second->second;
        }
    }
    auto program = std::make_shared<const std::any>(lang.parse(text));
    if (cache_capacity_ == 0)
        return program;
    std::lock_guard lock(cache_mutex_);
    if (cache_index_.count(key) == 0) {
        cache_.emplace_front(key, program);
        cache_index_[key] = cache_.begin();
        if (cache_.size() > cache_capacity_) {
            cache_index_.erase(cache_.back().first);
            cache_.pop_back();
        }
    }
    return program;
}

WidgetResult Registry::run(std::string_view language, std::string_view widget, const std::string& program,
                           const json& params) const
{
    const Language& lang = get(language);
    const Widget* w = lang.widget(widget);
    if (!w)
        throw std::out_of_range("language '" + lang.id + "' has no widget '" + std::string(widget) + "'");
    RunContext ctx{limits_from(params, ExploreLimits{}, caps_), params.is_object() ? params : json::object()};
    Program parsed = parse(lang, program);
    return w->run(*parsed, ctx);
}

json Registry::describe() const
{
    json out = json::array();
    for (const auto& l : languages_) {
        json examples = json::array();
        for (const auto& e : l->examples)
            examples.push_back({{"name", e.name}, {"program", e.program}, {"description", e.description}});
        json widgets = json::array();
        for (const auto& w : l->widgets)
            widgets.push_back({{"name", w.name}, {"kind", to_string(w.kind)}});
        out.push_back({{"id", l->id},
                       {"name", l->name},
                       {"languageName", l->language_name},
                       {"examples", examples},
                       {"widgets", widgets}});
    }
    return out;
}

} // namespace sosw::workbench
