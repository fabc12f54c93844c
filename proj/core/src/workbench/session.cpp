#include "sosw/workbench/session.hpp"

#include <random>
#include <sstream>

namespace sosw::workbench {

SessionManager::SessionManager(const Registry& registry, std::chrono::minutes idle_timeout)
    : registry_(registry), idle_timeout_(idle_timeout)
{
}

std::string SessionManager::create(const std::string& language, const std::string& program)
{
    const Language& lang = registry_.get(language);
    auto session = std::make_shared<Session>();
    session->language = &lang;
    session->program_text = program;
    session->program = registry_.parse(lang, program);
    session->last_used = Clock::now();

    static thread_local std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mutex_);
    std::ostringstream id;
    id << std::hex << rng() << '-' << ++counter_;
    sessions_.emplace(id.str(), std::move(session));
    return id.str();
}

std::shared_ptr<SessionManager::Session> SessionManager::lookup(const std::string& id)
{
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end())
        throw SessionError(SessionError::Code::not_found, "unknown or expired session '" + id + "'");
    return it->second;
}

Stepper& SessionManager::stepper_for(Session& s, const std::string& widget)
{
    auto it = s.steppers.find(widget);
    if (it != s.steppers.end())
        return *it->second;
    const Widget* w = s.language->widget(widget);
    if (!w)
        throw SessionError(SessionError::Code::invalid, "language '" + s.language->id + "' has no widget '" + widget + "'");
    if (!w->stepper)
        throw SessionError(SessionError::Code::invalid, "widget '" + widget + "' is not a steps widget");
    auto stepper = w->stepper(*s.program);
    Stepper& ref = *stepper;
    s.steppers.emplace(widget, std::move(stepper));
    return ref;
}

template <class F>
json SessionManager::with_stepper(const std::string& id, const std::string& widget, F&& f)
{
    auto session = lookup(id);
    std::lock_guard lock(session->mutex);
    session->last_used = Clock::now();
    Stepper& stepper = stepper_for(*session, widget);
    f(stepper);
    return stepper.to_json();
}

json SessionManager::state(const std::string& id, const std::string& widget)
{
    return with_stepper(id, widget, [](Stepper&) {});
}

json SessionManager::step(const std::string& id, const std::string& widget, std::size_t choice,
                          std::optional<std::size_t> expected_depth)
{
    return with_stepper(id, widget, [&](Stepper& s) {
        if (expected_depth && *expected_depth != s.history().size())
            throw SessionError(SessionError::Code::stale,
                               "stale step: the session moved on (depth " + std::to_string(s.history().size()) +
                                   ", request was for depth " + std::to_string(*expected_depth) + ")");
        const std::size_t options = s.successor_labels().size();
        if (options == 0)
            throw SessionError(SessionError::Code::invalid, "no successors: the current state cannot evolve");
        if (choice >= options)
            throw SessionError(SessionError::Code::stale, "no successor with index " + std::to_string(choice) +
                                                              " (there are " + std::to_string(options) + ")");
        s.step(choice);
    });
}

json SessionManager::undo(const std::string& id, const std::string& widget)
{
    return with_stepper(id, widget, [](Stepper& s) {
        if (s.history().empty())
            throw SessionError(SessionError::Code::invalid, "nothing to undo");
        s.undo();
    });
}

json SessionManager::reset(const std::string& id, const std::string& widget)
{
    return with_stepper(id, widget, [](Stepper& s) { s.reset(); });
}

std::size_t SessionManager::evict_idle(Clock::time_point now)
{
    std::lock_guard lock(mutex_);
    std::size_t removed = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        std::unique_lock session_lock(it->second->mutex, std::try_to_lock);
        if (session_lock.owns_lock() && now - it->second->last_used > idle_timeout_) {
            session_lock.unlock();
            it = sessions_.erase(it);
            ++removed;
        } else {
            ++it;
        }
    }
    return removed;
}

std::size_t SessionManager::size() const
{
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

} // namespace sosw::workbench
