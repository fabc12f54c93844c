// sosw: command-line front end to the semantics workbench.
//
//   sosw list-languages
//   sosw examples --lang lambda
//   sosw run --lang lambda --widget "Build LTS" --program succ.lam --format mermaid
//   sosw serve --port 8080 --static ui/dist

#include "sosw/workbench/builtin.hpp"
#include "sosw/workbench/registry.hpp"
#include "sosw/workbench/service.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace wb = sosw::workbench;

namespace {

enum Exit { ok = 0, usage = 1, parse_error = 2, eval_error = 3, limit_error = 4 };

std::string read_program(const std::string& path)
{
    if (path == "-")
        return std::string(std::istreambuf_iterator<char>(std::cin), {});
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot read program file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int list_languages(const wb::Registry& registry)
{
    for (const wb::Language* lang : registry.languages()) {
        std::cout << lang->id << "\t" << lang->name << "\n";
        for (const auto& w : lang->widgets)
            std::cout << "  [" << wb::to_string(w.kind) << "] " << w.name << "\n";
    }
    return ok;
}

int list_examples(const wb::Registry& registry, const std::string& lang_id)
{
    const wb::Language& lang = registry.get(lang_id);
    for (const auto& e : lang.examples)
        std::cout << e.name << "\t" << e.program << "\t" << e.description << "\n";
    return ok;
}

struct RunOptions {
    std::string lang;
    std::string widget;
    std::string program_path;
    std::string example;
    std::string format = "text";
    std::optional<std::size_t> max_states;
    std::optional<std::size_t> max_depth;
    std::optional<std::size_t> timeout_ms;
    std::vector<std::size_t> choices;
    std::vector<std::string> params;
};

void print_result(const wb::WidgetResult& result, const std::string& format)
{
    if (format == "json") {
        std::cout << wb::json{{"ok", true}, {"result", wb::to_json(result)}}.dump(2) << "\n";
        return;
    }
    if (format == "dot") {
        if (!result.data.is_object() || !result.data.contains("dot"))
            throw std::invalid_argument("this widget has no DOT rendering");
        std::cout << result.data.at("dot").get<std::string>() << "\n";
        return;
    }
    if (format == "mermaid" && result.kind != wb::WidgetResult::Kind::mermaid)
        throw std::invalid_argument("this widget does not produce a Mermaid diagram");
    if (result.kind == wb::WidgetResult::Kind::warnings) {
        for (const auto& w : result.warnings)
            std::cout << "warning: " << w << "\n";
        return;
    }
    std::cout << result.body << "\n";
}

int run_widget(const wb::Registry& registry, const RunOptions& opt)
{
    std::string program;
    if (!opt.example.empty()) {
        const wb::Example* e = registry.get(opt.lang).example(opt.example);
        if (!e)
            throw std::out_of_range("language '" + opt.lang + "' has no example '" + opt.example + "'");
        program = e->program;
    } else if (!opt.program_path.empty()) {
        program = read_program(opt.program_path);
    } else {
        throw std::invalid_argument("either --program or --example is required");
    }

    wb::json params = wb::json::object();
    for (const auto& kv : opt.params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--param expects key=value, got '" + kv + "'");
        params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (opt.max_states)
        params["max_states"] = *opt.max_states;
    if (opt.max_depth)
        params["max_depth"] = *opt.max_depth;
    if (opt.timeout_ms)
        params["timeout_ms"] = *opt.timeout_ms;
    if (!opt.choices.empty())
        params["choices"] = opt.choices;

    try {
        print_result(registry.run(opt.lang, opt.widget, program, params), opt.format);
        return ok;
    } catch (const sosw::ParseError& e) {
        if (opt.format == "json")
            std::cout << wb::error_envelope(e).dump(2) << "\n";
        std::cerr << "parse error: " << e.what() << "\n";
        return parse_error;
    } catch (const sosw::EvalError& e) {
        if (opt.format == "json")
            std::cout << wb::error_envelope(e).dump(2) << "\n";
        std::cerr << "evaluation error: " << e.what() << "\n";
        return eval_error;
    } catch (const sosw::LimitError& e) {
        if (opt.format == "json")
            std::cout << wb::error_envelope(e).dump(2) << "\n";
        std::cerr << "limit reached: " << e.what() << "\n";
        return limit_error;
    }
}

int default_port()
{
    if (const char* env = std::getenv("SOSW_PORT")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            std::cerr << "ignoring invalid SOSW_PORT '" << env << "'\n";
        }
    }
    return 8080;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Operational-semantics workbench"};
    app.require_subcommand(1);

    app.add_subcommand("list-languages", "List registered languages and their widgets");

    std::string examples_lang;
    auto* examples = app.add_subcommand("examples", "List the examples of a language");
    examples->add_option("--lang", examples_lang, "Language id")->required();

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run one widget on a program");
    run_cmd->add_option("--lang", run.lang, "Language id")->required();
    run_cmd->add_option("--widget", run.widget, "Widget name")->required();
    auto* program_opt = run_cmd->add_option("--program", run.program_path, "Program file, or - for stdin");
    run_cmd->add_option("--example", run.example, "Use a bundled example instead of a file")->excludes(program_opt);
    run_cmd->add_option("--format", run.format, "Output format")
        ->check(CLI::IsMember({"text", "mermaid", "dot", "json"}));
    run_cmd->add_option("--max-states", run.max_states, "State limit for explorations")->check(CLI::PositiveNumber);
    run_cmd->add_option("--max-depth", run.max_depth, "Depth limit for explorations")->check(CLI::PositiveNumber);
    run_cmd->add_option("--timeout-ms", run.timeout_ms, "Time limit in milliseconds")->check(CLI::PositiveNumber);
    run_cmd->add_option("--choice", run.choices, "Successor index to take (steps widgets, repeatable)");
    run_cmd->add_option("--param", run.params, "Extra widget parameter key=value (repeatable)");

    int port = default_port();
    std::string host = "127.0.0.1";
    std::string static_dir;
    auto* serve = app.add_subcommand("serve", "Start the JSON service");
    serve->add_option("--port", port, "TCP port (default $SOSW_PORT or 8080)");
    serve->add_option("--host", host, "Address to bind");
    serve->add_option("--static", static_dir, "Directory with the browser UI bundle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    wb::Registry registry;
    wb::register_builtins(registry);

    try {
        if (app.got_subcommand("list-languages"))
            return list_languages(registry);
        if (app.got_subcommand(examples))
            return list_examples(registry, examples_lang);
        if (app.got_subcommand(run_cmd))
            return run_widget(registry, run);
        if (app.got_subcommand(serve)) {
            std::cerr << "listening on http://" << host << ":" << port << "\n";
            return wb::serve(registry, host, port, static_dir) == 0 ? ok : usage;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    return usage;
}
