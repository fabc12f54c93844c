#include "sosw/workbench/service.hpp"

#include <httplib.h>


namespace sosw::workbench {
namespace {

json parse_body(const std::string& body)
{
    if (body.empty())
        return json::object();
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw std::invalid_argument("request body must be a JSON object");
    return j;
}

std::string required_string(const json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_string())
        throw std::invalid_argument(std::string("missing string field '") + key + "'");
    return j.at(key).get<std::string>();
}

json error_object(const std::string& type, const std::string& message)
{
    return {{"ok", false}, {"error", {{"type", type}, {"message", message}}}};
}

int status_for(const std::exception& e)
{
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const EvalError*>(&e) ||
        dynamic_cast<const LimitError*>(&e))
        return 200;
    if (auto* s = dynamic_cast<const SessionError*>(&e)) {
        switch (s->code()) {
        case SessionError::Code::not_found:
            return 404;
        case SessionError::Code::stale:
            return 409;
        case SessionError::Code::invalid:
            return 400;
        }
    }
    if (dynamic_cast<const std::out_of_range*>(&e))
        return 404;
    if (dynamic_cast<const std::invalid_argument*>(&e))
        return 400;
    return 500;
}

template <class F>
Reply guarded(F&& f)
{
    try {
        return f();
    } catch (const std::exception& e) {
        return Reply{status_for(e), error_envelope(e)};
    }
}

} // namespace

json error_envelope(const std::exception& e)
{
    if (auto* p = dynamic_cast<const ParseError*>(&e)) {
        json out = error_object("parse", p->message());
        out["error"]["line"] = p->line();
        out["error"]["col"] = p->col();
        if (!p->expected().empty())
            out["error"]["expected"] = p->expected();
        return out;
    }
    if (dynamic_cast<const EvalError*>(&e))
        return error_object("eval", e.what());
    if (dynamic_cast<const LimitError*>(&e))
        return error_object("limit", e.what());
    if (auto* s = dynamic_cast<const SessionError*>(&e)) {
        switch (s->code()) {
        case SessionError::Code::not_found:
            return error_object("not_found", e.what());
        case SessionError::Code::stale:
            return error_object("stale", e.what());
        case SessionError::Code::invalid:
            return error_object("invalid", e.what());
        }
    }
    if (dynamic_cast<const std::out_of_range*>(&e))
        return error_object("not_found", e.what());
    if (dynamic_cast<const std::invalid_argument*>(&e))
        return error_object("request", e.what());
    return error_object("internal", e.what());
}

Reply Service::languages() const { return Reply{200, registry_.describe()}; }

Reply Service::run(const std::string& request_body) const
{
    return guarded([&] {
        json req = parse_body(request_body);
        json params = req.contains("params") ? req.at("params") : json::object();
        if (!params.is_object())
            throw std::invalid_argument("'params' must be an object");
        WidgetResult result =
            registry_.run(required_string(req, "language"), required_string(req, "widget"),
                          required_string(req, "program"), params);
        return Reply{200, {{"ok", true}, {"result", to_json(result)}}};
    });
}

Reply Service::create_session(const std::string& request_body)
{
    return guarded([&] {
        json req = parse_body(request_body);
        std::string id = sessions_.create(required_string(req, "language"), required_string(req, "program"));
        return Reply{200, {{"sessionId", id}}};
    });
}

Reply Service::session_action(const std::string& id, const std::string& action, const std::string& request_body)
{
    return guarded([&] {
        sessions_.evict_idle();
        json req = parse_body(request_body);
        std::string widget = required_string(req, "widget");
        if (action == "state")
            return Reply{200, sessions_.state(id, widget)};
        if (action == "undo")
            return Reply{200, sessions_.undo(id, widget)};
        if (action == "reset")
            return Reply{200, sessions_.reset(id, widget)};
        if (action != "step")
            throw std::out_of_range("unknown session action '" + action + "'");
        if (!req.contains("choice") || !req.at("choice").is_number_integer() || req.at("choice").get<long long>() < 0)
            throw std::invalid_argument("missing non-negative integer field 'choice'");
        std::optional<std::size_t> depth;
        if (req.contains("depth")) {
            if (!req.at("depth").is_number_integer() || req.at("depth").get<long long>() < 0)
                throw std::invalid_argument("'depth' must be a non-negative integer");
            depth = req.at("depth").get<std::size_t>();
        }
        return Reply{200, sessions_.step(id, widget, req.at("choice").get<std::size_t>(), depth)};
    });
}

void Service::mount(httplib::Server& server, const std::string& static_dir)
{
    auto send = [](httplib::Response& res, const Reply& reply) {
        res.status = reply.status;
        res.set_content(reply.body.dump(), "application/json");
    };
    server.Get("/api/languages", [this, send](const httplib::Request&, httplib::Response& res) {
        send(res, languages());
    });
    server.Post("/api/run", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, run(req.body));
    });
    server.Post("/api/session", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, create_session(req.body));
    });
    server.Post(R"(/api/session/([^/]+)/(step|undo|reset|state))",
                [this, send](const httplib::Request& req, httplib::Response& res) {
                    send(res, session_action(req.matches[1], req.matches[2], req.body));
                });
    if (!static_dir.empty() && !server.set_mount_point("/", static_dir))
        throw std::invalid_argument("static directory '" + static_dir + "' does not exist");
}

int serve(const Registry& registry, const std::string& host, int port, const std::string& static_dir)
{
    SessionManager sessions(registry);
    Service service(registry, sessions);
    httplib::Server server;
    service.mount(server, static_dir);
    if (!server.listen(host, port))
        return 1;
    return 0;
}

} // namespace sosw::workbench
