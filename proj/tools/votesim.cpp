// votesim command line: run, replicate, serve, inspect.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>

#include "votesim/errors.hpp"
#include "votesim/experiments.hpp"
#include "votesim/run_record.hpp"
#include "votesim/scenario.hpp"
#include "votesim/service.hpp"
#include "votesim/session.hpp"

namespace fs = std::filesystem;
using namespace votesim;

namespace {

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) throw IoError("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_polls(const RunRecord& r) {
    std::cout << "poll   " << r.candidates[0] << "  " << r.candidates[1]
              << "  abstain  likes+ A/B  trusts+ A/B  rabbits\n";
    for (const PollSnapshot& p : r.polls) {
        char line[128];
        std::snprintf(line, sizeof line, "%-5s %4d %4d %8d %7d/%-3d %8d/%-3d %7d\n", p.label.c_str(), p.votes_for[0],
                      p.votes_for[1], p.abstentions, p.likes_more[0], p.likes_more[1], p.trusts_more[0],
                      p.trusts_more[1], p.rabbit_net_like);
        std::cout << line;
    }
}

int cmd_run(const fs::path& scenario_dir, const std::string& scenario_name, const std::string& script_id,
            std::uint64_t seed, const std::string& opponent, const fs::path& out_dir, const std::string& format) {
    auto sc = std::make_shared<const Scenario>(load_scenario(find_scenario_file(scenario_dir, scenario_name)));
    auto script = find_script(script_id);
    if (!script) throw ConfigError("unknown script '" + script_id + "'");
    auto mode = parse_opponent_mode(opponent);
    if (!mode) throw ConfigError("opponent must be 'inert' or 'fixed-script'");
    const RunRecord rec = run_scripted(sc, *script, seed, {*mode, {}});

    const std::string stem = sc->id + "-" + script->id + "-s" + std::to_string(seed);
    if (format == "csv" || format == "both") {
        write_file(out_dir / (stem + ".csv"), export_run(rec, ExportFormat::Tabular));
        std::cerr << "wrote " << (out_dir / (stem + ".csv")).string() << "\n";
    }
    if (format == "json" || format == "both") {
        write_file(out_dir / (stem + ".json"), export_run(rec, ExportFormat::Structured));
        std::cerr << "wrote " << (out_dir / (stem + ".json")).string() << "\n";
    }
    print_polls(rec);
    return 0;
}

int cmd_replicate(const fs::path& scenario_dir, std::uint64_t seed, const std::string& out, bool strict) {
    const ReplicationReport report = replicate_paper(seed, scenario_dir);
    const fs::path path = out.empty() ? fs::path("replication-s" + std::to_string(seed) + ".json") : fs::path(out);
    write_file(path, render_report_json(report));
    std::cout << render_report_text(report);
    std::cerr << "wrote " << path.string() << " (" << report.total_runs() << " runs)\n";
    if (strict) {
        for (const BandCheck& b : report.bands) {
            if (!b.pass) return 3;
        }
    }
    return 0;
}

int cmd_serve(const fs::path& scenario_dir, const std::optional<std::string>& bind,
              const std::optional<std::string>& snapshot_dir) {
    // Block termination signals in every thread; a dedicated thread waits for them.
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    const BindAddress addr = resolve_bind(bind);
    SessionStore store(scenario_dir, snapshot_dir ? std::optional<fs::path>(*snapshot_dir) : std::nullopt);
    if (snapshot_dir) {
        const std::size_t n = store.restore_snapshots();
        if (n) std::cerr << "restored " << n << " sessions\n";
    }
    HttpServer server(store);
    const int port = server.bind(addr);
    std::cerr << "votesim serving on http://" << addr.host << ":" << port << " (scenarios: " << scenario_dir.string()
              << ")\n";

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&set, &sig);
        server.stop();
    });
    server.run();
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    return 0;
}

int cmd_inspect(const fs::path& file) {
    const std::string text = read_file(file);
    if (text.starts_with(tabular_header())) {
        std::cout << text;
        return 0;
    }
    const RunRecord r = import_run(text);
    std::cout << "scenario " << r.scenario_id << ", seed " << r.seed << ", played " << r.played;
    if (!r.script_id.empty()) std::cout << " (" << r.script_id << ")";
    std::cout << ", opponent " << r.opponent_policy << "\n";
    for (const TranscriptEntry& t : r.transcript) {
        std::cout << "  " << t.round_id << ": " << t.option;
        if (!t.opponent_option.empty()) std::cout << " / opponent " << t.opponent_option;
        std::cout << "\n";
    }
    print_polls(r);
    const std::size_t me = r.played_index();
    std::cout << "vote change for " << r.played << ":";
    for (const PollDelta& d : r.deltas()) std::cout << " " << d.label << " " << (d.votes[me] > 0 ? "+" : "") << d.votes[me];
    std::cout << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"votesim: personality-driven election simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "votesim 0.3.0");

    std::string scenario_dir = default_scenario_dir().string();
    app.add_option("--scenario-dir", scenario_dir, "Directory with .scn files")->capture_default_str();

    auto* run = app.add_subcommand("run", "Play one scripted session and write its run record");
    std::string scenario = "same-baggage", script = "paper-jackson", opponent = "inert", out_dir = ".", format = "both";
    std::uint64_t seed = 1;
    run->add_option("--scenario", scenario, "Scenario name or path")->capture_default_str();
    run->add_option("--script", script, "paper-jackson or paper-kingston")->capture_default_str();
    run->add_option("--seed", seed, "Session seed")->capture_default_str();
    run->add_option("--opponent", opponent, "inert or fixed-script")->capture_default_str();
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run->add_option("--format", format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();

    auto* rep = app.add_subcommand("replicate", "Run the 16-run protocol and write a report");
    std::uint64_t base_seed = 1;
    std::string report_out;
    bool strict = false;
    rep->add_option("--seed", base_seed, "Base seed; runs use base..base+15")->capture_default_str();
    rep->add_option("--out", report_out, "Report file (default replication-s<seed>.json)");
    rep->add_flag("--strict", strict, "Exit 3 when a band check fails");

    auto* serve = app.add_subcommand("serve", "Start the HTTP session service");
    std::optional<std::string> bind, snapshot_dir;
    serve->add_option("--bind", bind, "host:port (default $VOTESIM_BIND or 127.0.0.1:8080)");
    serve->add_option("--snapshot-dir", snapshot_dir, "Write session snapshots here and restore them on start");

    auto* inspect = app.add_subcommand("inspect", "Summarize a run record file");
    std::string file;
    inspect->add_option("file", file, "Run record (.json or .csv)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) return cmd_run(scenario_dir, scenario, script, seed, opponent, out_dir, format);
        if (*rep) return cmd_replicate(scenario_dir, base_seed, report_out, strict);
        if (*serve) return cmd_serve(scenario_dir, bind, snapshot_dir);
        if (*inspect) return cmd_inspect(file);
    } catch (const std::exception& e) {
        std::cerr << "votesim: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
