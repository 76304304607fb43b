#include "votesim/service.hpp"

#include <algorithm>
#include <charconv>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "votesim/errors.hpp"

namespace votesim {

using json = nlohmann::ordered_json;

struct SessionStore::Entry {
    std::mutex mutex;
    std::condition_variable changed;
    Session session;
    std::string scenario_name;
    std::vector<ApiEvent> events;
    std::chrono::system_clock::time_point created;
    bool closed = false;
};

namespace {

json poll_value(const PollSnapshot& p) {
    json j;
    j["label"] = p.label;
    j["phase"] = p.phase == Phase::PreReveal ? "pre-reveal" : "revealed";
    j["votes"] = json::array({p.votes_for[0], p.votes_for[1]});
    j["abstain"] = p.abstentions;
    j["likes_more"] = json::array({p.likes_more[0], p.likes_more[1]});
    j["trusts_more"] = json::array({p.trusts_more[0], p.trusts_more[1]});
    j["rabbit_net_like"] = p.rabbit_net_like;
    return j;
}

json round_value(const Session& s) {
    if (s.step() != SessionStep::Choice) return nullptr;
    const std::size_t r = s.choice_round();
    const Round& round = s.scenario->rounds[r];
    return {{"index", r + 1}, {"id", round.id}, {"title", round.title}, {"rabbit_issue", round.rabbit_issue}};
}

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json error_value(std::string_view message) { return {{"error", message}}; }

ApiResponse reply(int status, const json& body) { return {status, body.dump()}; }
ApiResponse error(int status, std::string_view message) { return reply(status, error_value(message)); }

json parse_body(std::string_view body) {
    if (body.empty()) return json::object();
    json j = json::parse(body.begin(), body.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError("request body must be a JSON object");
    return j;
}

std::string vote_code(const PollSnapshot& p, std::size_t i) {
    switch (p.votes[i]) {
        case VoteChoice::CandidateA: return "A";
        case VoteChoice::CandidateB: return "B";
        case VoteChoice::Abstain: return "abstain";
    }
    return "?";
}

void emit(SessionStore::Entry& e, const std::string& id, const PollSnapshot& poll) {
    e.events.push_back({id, ApiEventKind::PollUpdated, poll, e.events.size()});
    if (e.session.complete()) e.events.push_back({id, ApiEventKind::SessionComplete, poll, e.events.size()});
    e.changed.notify_all();
}

std::optional<OpponentPolicy> parse_opponent(const json& v) {
    if (v.is_null()) return std::nullopt;
    OpponentPolicy p;
    std::string mode;
    if (v.is_string()) {
        mode = v.get<std::string>();
    } else if (v.is_object()) {
        if (!v.contains("mode") || !v.at("mode").is_string()) throw ConfigError("opponent.mode must be a string");
        mode = v.at("mode").get<std::string>();
        if (v.contains("script")) {
            if (!v.at("script").is_string()) throw ConfigError("opponent.script must be a string");
            p.script = v.at("script").get<std::string>();
        }
    } else {
        throw ConfigError("opponent must be a string or object");
    }
    auto m = parse_opponent_mode(mode);
    if (!m) throw ConfigError("opponent mode must be 'inert' or 'fixed-script'");
    p.mode = *m;
    return p;
}

std::vector<std::string_view> split_path(std::string_view path) {
    std::vector<std::string_view> parts;
    while (!path.empty()) {
        const auto slash = path.find('/');
        const auto part = path.substr(0, slash);
        if (!part.empty()) parts.push_back(part);
        if (slash == std::string_view::npos) break;
        path.remove_prefix(slash + 1);
    }
    return parts;
}

}  // namespace

std::string_view api_event_kind_name(ApiEventKind k) noexcept {
    return k == ApiEventKind::PollUpdated ? "poll-updated" : "session-complete";
}

std::string poll_json(const PollSnapshot& poll) { return poll_value(poll).dump(); }

std::string session_state_json(const std::string& id, const Session& s) {
    json j;
    j["id"] = id;
    j["scenario"] = s.scenario->id;
    j["seed"] = s.seed;
    j["played"] = s.played_candidate().id;
    j["opponent"] = {{"mode", opponent_mode_name(s.opponent.mode)},
                     {"script", s.opponent_script ? s.opponent_script->id : std::string{}}};
    json cands = json::array();
    for (const CandidateSpec& c : s.scenario->candidates) {
        cands.push_back({{"id", c.id}, {"name", c.name}, {"party", party_name(c.party)}});
    }
    j["candidates"] = std::move(cands);
    j["round_pointer"] = s.round_pointer;
    j["step"] = session_step_name(s.step());
    j["round"] = round_value(s);
    json polls = json::array();
    for (const PollSnapshot& p : s.polls) polls.push_back(poll_value(p));
    j["polls"] = std::move(polls);
    json voters = json::array();
    const PollSnapshot& last = s.polls.back();
    for (std::size_t i = 0; i < s.electorate.voters.size(); ++i) {
        const Voter& v = s.electorate.voters[i];
        voters.push_back({{"id", v.id}, {"bloc", bloc_name(v.bloc)}, {"vote", vote_code(last, i)}});
    }
    j["voters"] = std::move(voters);
    json transcript = json::array();
    for (const TranscriptEntry& t : s.transcript) {
        transcript.push_back({{"round", t.round_id},
                              {"candidate", t.candidate},
                              {"option", t.option},
                              {"opponent_option", t.opponent_option}});
    }
    j["transcript"] = std::move(transcript);
    j["digest"] = hex(state_digest(s));
    return j.dump();
}

std::string choices_json(const Session& s) {
    json j;
    j["step"] = session_step_name(s.step());
    j["candidate"] = s.played_candidate().id;
    j["round"] = round_value(s);
    json options = json::array();
    if (s.step() == SessionStep::Choice) {
        for (const ActionChoice& a : available_choices(s)) options.push_back({{"id", a.id}, {"label", a.label}});
    }
    j["options"] = std::move(options);
    return j.dump();
}

std::string event_json(const ApiEvent& e) {
    json j;
    j["session"] = e.session_id;
    j["kind"] = api_event_kind_name(e.kind);
    j["sequence"] = e.sequence;
    j["poll"] = poll_value(e.payload);
    return j.dump();
}

SessionStore::SessionStore(std::filesystem::path scenario_dir, std::optional<std::filesystem::path> snapshot_dir)
    : scenario_dir_(std::move(scenario_dir)), snapshot_dir_(std::move(snapshot_dir)) {
    std::random_device rd;
    id_salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    if (snapshot_dir_) {
        std::error_code ec;
        std::filesystem::create_directories(*snapshot_dir_, ec);
        if (ec) throw IoError("cannot create snapshot directory " + snapshot_dir_->string());
    }
}

SessionStore::~SessionStore() { close(); }

std::string SessionStore::new_id() {
    const std::uint64_t n = ++counter_;
    return hex(derive_seed(id_salt_, n)) + hex(derive_seed(id_salt_ ^ 0x5bd1e995ULL, n));
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(std::string_view id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<const Scenario> SessionStore::scenario(const std::string& name) {
    {
        std::lock_guard lock(mutex_);
        if (auto it = scenarios_.find(name); it != scenarios_.end()) return it->second;
    }
    if (name.find('/') != std::string::npos || name.find("..") != std::string::npos) {
        throw ConfigError("scenario must be a name, not a path");
    }
    auto sc = std::make_shared<const Scenario>(load_scenario(find_scenario_file(scenario_dir_, name)));
    std::lock_guard lock(mutex_);
    return scenarios_.emplace(name, std::move(sc)).first->second;
}

void SessionStore::write_snapshot(const std::string& id, const Entry& e) const {
    if (!snapshot_dir_) return;
    const Session& s = e.session;
    json j;
    j["id"] = id;
    j["scenario"] = e.scenario_name;
    j["seed"] = s.seed;
    j["played"] = s.played_candidate().id;
    j["opponent"] = {{"mode", opponent_mode_name(s.opponent.mode)}, {"script", s.opponent.script}};
    j["revealed"] = s.polls.size() > 1;
    j["choices"] = played_choices(s);
    j["digest"] = hex(state_digest(s));
    const auto path = *snapshot_dir_ / (id + ".json");
    const auto tmp = *snapshot_dir_ / (id + ".json.tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << j.dump(2) << "\n";
        if (!out) throw IoError("cannot write snapshot " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

ApiResponse SessionStore::list_scenarios() const {
    json list = json::array();
    for (const std::string& name : votesim::list_scenarios(scenario_dir_)) {
        try {
            const Scenario sc = load_scenario(scenario_dir_ / (name + ".scn"));
            json cands = json::array();
            for (const CandidateSpec& c : sc.candidates) {
                cands.push_back({{"id", c.id}, {"name", c.name}, {"party", party_name(c.party)}});
            }
            list.push_back({{"id", name}, {"title", sc.title}, {"candidates", std::move(cands)}});
        } catch (const Error& e) {
            list.push_back({{"id", name}, {"error", e.what()}});
        }
    }
    return reply(200, {{"scenarios", std::move(list)}});
}

ApiResponse SessionStore::create(std::string_view body) {
    try {
        const json req = parse_body(body);
        if (!req.contains("scenario") || !req.at("scenario").is_string()) return error(400, "'scenario' is required");
        const std::string name = req.at("scenario").get<std::string>();
        std::uint64_t seed = 0;
        if (req.contains("seed") && !req.at("seed").is_null()) {
            const json& s = req.at("seed");
            if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
                return error(400, "'seed' must be a non-negative integer");
            }
            seed = s.get<std::uint64_t>();
        } else {
            std::random_device rd;
            seed = rd() % 1000000;
        }
        SessionOptions opts;
        if (req.contains("played")) {
            if (!req.at("played").is_string()) return error(400, "'played' must be a candidate id");
            opts.played = req.at("played").get<std::string>();
        }
        if (req.contains("opponent")) opts.opponent = parse_opponent(req.at("opponent"));

        std::shared_ptr<const Scenario> sc;
        try {
            sc = scenario(name);
        } catch (const IoError& e) {
            return error(404, e.what());
        }
        auto entry = std::make_shared<Entry>();
        entry->session = new_session(sc, seed, opts);
        entry->scenario_name = name;
        entry->created = std::chrono::system_clock::now();

        std::string id;
        {
            std::lock_guard lock(mutex_);
            do {
                id = new_id();
            } while (sessions_.contains(id));
            sessions_.emplace(id, entry);
        }
        std::lock_guard lock(entry->mutex);
        emit(*entry, id, entry->session.polls.back());
        write_snapshot(id, *entry);
        return {201, "{\"id\":" + json(id).dump() + ",\"state\":" + session_state_json(id, entry->session) + "}"};
    } catch (const ConfigError& e) {
        return error(400, e.what());
    }
}

ApiResponse SessionStore::state(std::string_view id) const {
    auto e = find(id);
    if (!e) return error(404, "unknown session");
    std::lock_guard lock(e->mutex);
    return {200, session_state_json(std::string(id), e->session)};
}

ApiResponse SessionStore::choices(std::string_view id) const {
    auto e = find(id);
    if (!e) return error(404, "unknown session");
    std::lock_guard lock(e->mutex);
    return {200, choices_json(e->session)};
}

ApiResponse SessionStore::reveal(std::string_view id) {
    auto e = find(id);
    if (!e) return error(404, "unknown session");
    std::lock_guard lock(e->mutex);
    if (e->session.step() != SessionStep::Baggage) return error(409, "baggage already applied");
    const PollSnapshot p = apply_baggage(e->session);
    emit(*e, std::string(id), p);
    write_snapshot(std::string(id), *e);
    return reply(200, {{"poll", poll_value(p)}, {"step", session_step_name(e->session.step())}});
}

ApiResponse SessionStore::choose(std::string_view id, std::string_view body) {
    auto e = find(id);
    if (!e) return error(404, "unknown session");
    json req;
    try {
        req = parse_body(body);
    } catch (const ConfigError& ex) {
        return error(400, ex.what());
    }
    if (!req.contains("option") || !req.at("option").is_string()) return error(400, "'option' is required");
    const std::string option = req.at("option").get<std::string>();

    std::lock_guard lock(e->mutex);
    Session& s = e->session;
    if (s.complete()) return error(409, "session complete");
    if (s.step() == SessionStep::Baggage) return error(409, "baggage step pending: POST .../reveal first");
    try {
        const PollSnapshot p = apply_choice(s, option);
        emit(*e, std::string(id), p);
        write_snapshot(std::string(id), *e);
        const TranscriptEntry& t = s.transcript.back();
        return reply(200, {{"poll", poll_value(p)},
                           {"option", t.option},
                           {"opponent_option", t.opponent_option},
                           {"step", session_step_name(s.step())},
                           {"complete", s.complete()}});
    } catch (const InvalidChoice& ex) {
        return error(400, ex.what());
    }
}

std::optional<std::vector<ApiEvent>> SessionStore::events(std::string_view id, std::size_t from,
                                                          std::chrono::milliseconds timeout) const {
    auto e = find(id);
    if (!e) return std::nullopt;
    std::unique_lock lock(e->mutex);
    if (timeout.count() > 0) {
        e->changed.wait_for(lock, timeout, [&] { return e->closed || e->events.size() > from; });
    }
    if (e->closed) return std::nullopt;
    std::vector<ApiEvent> out;
    for (std::size_t i = from; i < e->events.size(); ++i) out.push_back(e->events[i]);
    return out;
}

std::optional<Session> SessionStore::snapshot(std::string_view id) const {
    auto e = find(id);
    if (!e) return std::nullopt;
    std::lock_guard lock(e->mutex);
    return e->session;
}

std::vector<std::string> SessionStore::ids() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [id, _] : sessions_) out.push_back(id);
    return out;
}

std::size_t SessionStore::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::size_t SessionStore::restore_snapshots() {
    if (!snapshot_dir_) return 0;
    std::size_t restored = 0;
    for (const auto& file : std::filesystem::directory_iterator(*snapshot_dir_)) {
        if (file.path().extension() != ".json") continue;
        std::ifstream in(file.path(), std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        const json j = json::parse(buf.str(), nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw ConfigError("bad snapshot " + file.path().string());
        try {
            const std::string id = j.at("id").get<std::string>();
            auto entry = std::make_shared<Entry>();
            entry->scenario_name = j.at("scenario").get<std::string>();
            SessionOptions opts;
            opts.played = j.at("played").get<std::string>();
            opts.opponent = OpponentPolicy{*parse_opponent_mode(j.at("opponent").at("mode").get<std::string>()),
                                           j.at("opponent").at("script").get<std::string>()};
            Session s = new_session(scenario(entry->scenario_name), j.at("seed").get<std::uint64_t>(), opts);
            if (j.at("revealed").get<bool>()) apply_baggage(s);
            for (const auto& c : j.at("choices")) apply_choice(s, c.get<std::string>());
            entry->session = std::move(s);
            for (const PollSnapshot& p : entry->session.polls) {
                entry->events.push_back({id, ApiEventKind::PollUpdated, p, entry->events.size()});
            }
            if (entry->session.complete()) {
                entry->events.push_back({id, ApiEventKind::SessionComplete, entry->session.polls.back(), entry->events.size()});
            }
            if (hex(state_digest(entry->session)) != j.at("digest").get<std::string>()) {
                throw ConfigError("snapshot " + id + " does not replay to the recorded state");
            }
            entry->created = std::chrono::system_clock::now();
            std::lock_guard lock(mutex_);
            sessions_[id] = std::move(entry);
            ++restored;
        } catch (const json::exception& ex) {
            throw ConfigError("bad snapshot " + file.path().string() + ": " + ex.what());
        }
    }
    return restored;
}

void SessionStore::close() {
    std::lock_guard lock(mutex_);
    for (auto& [_, e] : sessions_) {
        std::lock_guard el(e->mutex);
        e->closed = true;
        e->changed.notify_all();
    }
}

ApiResponse dispatch(SessionStore& store, std::string_view method, std::string_view path, std::string_view body) {
    const auto parts = split_path(path);
    if (parts.size() < 2 || parts[0] != "api") return error(404, "no such endpoint");
    if (parts.size() == 2 && parts[1] == "scenarios") {
        return method == "GET" ? store.list_scenarios() : error(405, "method not allowed");
    }
    if (parts[1] != "sessions") return error(404, "no such endpoint");
    if (parts.size() == 2) return method == "POST" ? store.create(body) : error(405, "method not allowed");
    const std::string_view id = parts[2];
    if (parts.size() == 3) return method == "GET" ? store.state(id) : error(405, "method not allowed");
    if (parts.size() != 4) return error(404, "no such endpoint");
    if (parts[3] == "choices") {
        if (method == "GET") return store.choices(id);
        if (method == "POST") return store.choose(id, body);
        return error(405, "method not allowed");
    }
    if (parts[3] == "reveal") return method == "POST" ? store.reveal(id) : error(405, "method not allowed");
    if (parts[3] == "events" && method == "GET") {
        auto evs = store.events(id, 0);
        if (!evs) return error(404, "unknown session");
        json list = json::array();
        for (const ApiEvent& e : *evs) list.push_back(json::parse(event_json(e)));
        return reply(200, {{"events", std::move(list)}});
    }
    return error(404, "no such endpoint");
}

BindAddress parse_bind(std::string_view text) {
    BindAddress b;
    std::string_view port = text;
    if (const auto colon = text.rfind(':'); colon != std::string_view::npos) {
        if (colon > 0) b.host = std::string(text.substr(0, colon));
        port = text.substr(colon + 1);
    }
    int p = -1;
    const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), p);
    if (ec != std::errc{} || ptr != port.data() + port.size() || p < 0 || p > 65535) {
        throw ConfigError("bad bind address '" + std::string(text) + "'");
    }
    b.port = p;
    return b;
}

BindAddress resolve_bind(const std::optional<std::string>& flag) {
    if (flag && !flag->empty()) return parse_bind(*flag);
    if (const char* env = std::getenv("VOTESIM_BIND"); env && *env) return parse_bind(env);
    return {};
}

struct HttpServer::Impl {
    explicit Impl(SessionStore& s) : store(s) {}
    SessionStore& store;
    httplib::Server server;
};

HttpServer::HttpServer(SessionStore& store) : impl_(std::make_unique<Impl>(store)) {
    auto& srv = impl_->server;
    SessionStore* st = &store;

    srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                             {"Access-Control-Allow-Headers", "Content-Type"},
                             {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    auto forward = [st](const httplib::Request& req, httplib::Response& res) {
        const ApiResponse r = dispatch(*st, req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };

    srv.Get(R"(/api/sessions/([^/]+)/events)", [st, forward](const httplib::Request& req, httplib::Response& res) {
        if (req.has_param("once")) return forward(req, res);
        const std::string id = req.matches[1];
        if (!st->snapshot(id)) {
            res.status = 404;
            res.set_content(error_value("unknown session").dump(), "application/json");
            return;
        }
        std::size_t from = 0;
        if (req.has_header("Last-Event-ID")) {
            const std::string last = req.get_header_value("Last-Event-ID");
            std::size_t n = 0;
            const auto [ptr, ec] = std::from_chars(last.data(), last.data() + last.size(), n);
            if (ec == std::errc{} && ptr == last.data() + last.size()) from = n + 1;
        }
        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider("text/event-stream", [st, id, from](std::size_t, httplib::DataSink& sink) mutable {
            const auto evs = st->events(id, from, std::chrono::milliseconds(1000));
            if (!evs) return false;
            if (evs->empty()) {
                static constexpr std::string_view ping = ": keep-alive\n\n";
                return sink.write(ping.data(), ping.size());
            }
            for (const ApiEvent& e : *evs) {
                const std::string frame = "id: " + std::to_string(e.sequence) + "\nevent: " +
                                          std::string(api_event_kind_name(e.kind)) + "\ndata: " + event_json(e) + "\n\n";
                if (!sink.write(frame.data(), frame.size())) return false;
                from = e.sequence + 1;
                if (e.kind == ApiEventKind::SessionComplete) {
                    sink.done();
                    return true;
                }
            }
            return true;
        });
    });
    srv.Get(R"(/api/.*)", forward);
    srv.Post(R"(/api/.*)", forward);
    srv.Put(R"(/api/.*)", forward);
    srv.Delete(R"(/api/.*)", forward);
    srv.Patch(R"(/api/.*)", forward);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const BindAddress& address) {
    auto& srv = impl_->server;
    if (address.port == 0) {
        port_ = srv.bind_to_any_port(address.host);
        if (port_ <= 0) throw IoError("cannot bind " + address.host);
    } else {
        if (!srv.bind_to_port(address.host, address.port)) {
            throw IoError("cannot bind " + address.host + ":" + std::to_string(address.port));
        }
        port_ = address.port;
    }
    return port_;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    impl_->store.close();
    if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace votesim
