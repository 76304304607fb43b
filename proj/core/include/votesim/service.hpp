#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "votesim/electorate.hpp"
#include "votesim/scenario.hpp"
#include "votesim/session.hpp"

namespace votesim {

enum class ApiEventKind : std::uint8_t { PollUpdated, SessionComplete };
std::string_view api_event_kind_name(ApiEventKind k) noexcept;

struct ApiEvent {
    std::string session_id;
    ApiEventKind kind = ApiEventKind::PollUpdated;
    PollSnapshot payload;
    std::size_t sequence = 0;  ///< 0-based, per session
};

struct ApiResponse {
    int status = 200;
    std::string body;  ///< JSON
};

/// JSON bodies used by the service; exposed so callers can compare against direct module calls.
std::string poll_json(const PollSnapshot& poll);
std::string session_state_json(const std::string& id, const Session& session);
std::string choices_json(const Session& session);
std::string event_json(const ApiEvent& event);

/// In-memory sessions keyed by opaque ids. Requests on different sessions run in parallel;
/// requests on one session are serialized.
class SessionStore {
public:
    explicit SessionStore(std::filesystem::path scenario_dir = default_scenario_dir(),
                          std::optional<std::filesystem::path> snapshot_dir = {});
    ~SessionStore();
    SessionStore(const SessionStore&) = delete;
    SessionStore& operator=(const SessionStore&) = delete;

    ApiResponse list_scenarios() const;
    /// Body: {"scenario", "seed", "played", "opponent"?}. Returns 201 with id and state.
    ApiResponse create(std::string_view body);
    ApiResponse state(std::string_view id) const;
    ApiResponse choices(std::string_view id) const;
    /// Applies the baggage step (P1).
    ApiResponse reveal(std::string_view id);
    /// Body: {"option"}. At the baggage step this is a conflict; use reveal first.
    ApiResponse choose(std::string_view id, std::string_view body);

    /// Events with sequence >= from; waits up to `timeout` when none are available yet.
    /// Empty optional for an unknown session.
    std::optional<std::vector<ApiEvent>> events(std::string_view id, std::size_t from,
                                                std::chrono::milliseconds timeout = std::chrono::milliseconds(0)) const;

    /// Copy of a session for inspection; empty if unknown.
    std::optional<Session> snapshot(std::string_view id) const;
    std::vector<std::string> ids() const;
    std::size_t size() const;

    /// Rebuilds sessions from the snapshot directory by replay. Returns the number restored.
    std::size_t restore_snapshots();

    /// Wakes every event waiter (used on shutdown).
    void close();

    struct Entry;

private:
    std::shared_ptr<Entry> find(std::string_view id) const;
    std::shared_ptr<const Scenario> scenario(const std::string& name);
    void write_snapshot(const std::string& id, const Entry& entry) const;
    std::string new_id();

    std::filesystem::path scenario_dir_;
    std::optional<std::filesystem::path> snapshot_dir_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Entry>, std::less<>> sessions_;
    std::map<std::string, std::shared_ptr<const Scenario>> scenarios_;
    std::uint64_t counter_ = 0;
    std::uint64_t id_salt_ = 0;
};

/// Routes one request to the store: the same logic the HTTP server uses, minus the event stream.
ApiResponse dispatch(SessionStore& store, std::string_view method, std::string_view path, std::string_view body);

struct BindAddress {
    std::string host = "127.0.0.1";
    int port = 8080;
};
/// "host:port", ":port" or "port". Throws ConfigError.
BindAddress parse_bind(std::string_view text);
/// Flag value if given, else $VOTESIM_BIND, else 127.0.0.1:8080.
BindAddress resolve_bind(const std::optional<std::string>& flag);

/// HTTP front end over a SessionStore.
class HttpServer {
public:
    explicit HttpServer(SessionStore& store);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds (port 0 picks a free port); returns the bound port. Throws IoError.
    int bind(const BindAddress& address);
    /// Blocks until stop().
    void run();
    void stop();
    int port() const noexcept { return port_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
};

}  // namespace votesim
