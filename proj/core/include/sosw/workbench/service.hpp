#pragma once

// JSON-over-HTTP front end for the registry and step sessions.

#include "sosw/workbench/registry.hpp"
#include "sosw/workbench/session.hpp"

#include <string>

namespace httplib {
class Server;
}

namespace sosw::workbench {

struct Reply {
    int status = 200;
    json body;
};

/// The request handlers, independent of any transport.
class Service {
public:
    Service(const Registry& registry, SessionManager& sessions) : registry_(registry), sessions_(sessions) {}

    [[nodiscard]] Reply languages() const;
    /// `{"language","widget","program","params"}`
    [[nodiscard]] Reply run(const std::string& request_body) const;
    /// `{"language","program"}`
    Reply create_session(const std::string& request_body);
    /// `action` is one of `step`, `undo`, `reset`, `state`.
    Reply session_action(const std::string& id, const std::string& action, const std::string& request_body);

    /// Registers the routes on `server`; serves `static_dir` at `/` when non-empty.
    void mount(httplib::Server& server, const std::string& static_dir = {});

private:
    const Registry& registry_;
    SessionManager& sessions_;
};

/// `{"ok":false,"error":{...}}` for the currently handled exception.
json error_envelope(const std::exception& e);

/// Listens on `host:port` until the server is stopped.
int serve(const Registry& registry, const std::string& host, int port, const std::string& static_dir);

} // namespace sosw::workbench
