#pragma once

// Server-side step sessions: one parsed program, one stepper per steps widget.

#include "sosw/workbench/registry.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

namespace sosw::workbench {

class SessionError : public std::runtime_error {
public:
    enum class Code { not_found, stale, invalid };

    SessionError(Code code, const std::string& message) : std::runtime_error(message), code_(code) {}
    [[nodiscard]] Code code() const { return code_; }

private:
    Code code_;
};

class SessionManager {
public:
    using Clock = std::chrono::steady_clock;

    explicit SessionManager(const Registry& registry, std::chrono::minutes idle_timeout = std::chrono::minutes(30));

    /// Parses the program up front; throws ParseError on bad input and std::out_of_range for an
    /// unknown language.
    std::string create(const std::string& language, const std::string& program);

    /// Current position of a steps widget, creating its stepper on first use.
    json state(const std::string& id, const std::string& widget);

    /// Takes successor `choice`. When `expected_depth` is given it must equal the current history
    /// length, otherwise the request is stale and rejected.
    json step(const std::string& id, const std::string& widget, std::size_t choice,
              std::optional<std::size_t> expected_depth = std::nullopt);
    json undo(const std::string& id, const std::string& widget);
    json reset(const std::string& id, const std::string& widget);

    /// Drops sessions idle for longer than the timeout. Returns how many were removed.
    std::size_t evict_idle(Clock::time_point now = Clock::now());
    [[nodiscard]] std::size_t size() const;

private:
    struct Session {
        std::mutex mutex;
        const Language* language = nullptr;
        std::string program_text;
        Program program;
        std::map<std::string, std::unique_ptr<Stepper>> steppers;
        Clock::time_point last_used;
    };

    std::shared_ptr<Session> lookup(const std::string& id);
    static Stepper& stepper_for(Session& s, const std::string& widget);

    template <class F>
    json with_stepper(const std::string& id, const std::string& widget, F&& f);

    const Registry& registry_;
    std::chrono::minutes idle_timeout_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t counter_ = 0;
};

} // namespace sosw::workbench
