// liqshift command-line front end.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "liqshift/cusum.hpp"
#include "liqshift/diagnostics.hpp"
#include "liqshift/errors.hpp"
#include "liqshift/hawkes.hpp"
#include "liqshift/hawkes_fit.hpp"
#include "liqshift/io.hpp"
#include "liqshift/lob_ingest.hpp"
#include "liqshift/regime.hpp"
#include "liqshift/scale_function.hpp"
#include "liqshift/trades_through.hpp"
#include "liqshift/verification.hpp"
#include "liqshift/version.hpp"

namespace {

using nlohmann::json;
using namespace liqshift;

// 64-bit FNV-1a of a file, recorded in manifests to pin inputs.
std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "unreadable";
    std::uint64_t h = 1469598103934665603ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

struct Manifest {
    std::string command;
    json params = json::object();
    json inputs = json::object();
    json outputs = json::array();
    std::optional<std::uint64_t> seed;

    void input(const std::string& role, const std::string& path) {
        if (!path.empty()) inputs[role] = {{"path", path}, {"fnv1a64", file_digest(path)}};
    }
    void output(const std::string& path) {
        if (!path.empty()) outputs.push_back(path);
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    return out;
}

void write_manifest(const Manifest& m, const std::string& explicit_path, const std::vector<std::string>& argv) {
    std::string path = explicit_path;
    if (path.empty()) {
        path = m.outputs.empty() ? "liqshift-" + m.command + ".manifest.json"
                                 : m.outputs.front().get<std::string>() + ".manifest.json";
    }
    json j;
    j["tool"] = "liqshift";
    j["version"] = kVersion;
    j["command"] = m.command;
    j["argv"] = argv;
    j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
    j["params"] = m.params;
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidConfig("not a number list: '" + text + "'");
        }
    }
    if (out.empty()) throw InvalidConfig("empty number list");
    return out;
}

// Options shared by every command that reads an event file.
struct EventInput {
    std::string path;
    std::string mode = "both";
    std::string multiplicity = "ground";
    std::string session;
    std::int64_t origin_ns = -1;

    void add(CLI::App* app, bool with_multiplicity) {
        app->add_option("--events", path, "events CSV (time,stream,mark,jump) or trades-through CSV")->required();
        app->add_option("--mode", mode, "sides used from a trades-through CSV: bid|ask|both")
            ->capture_default_str()
            ->check(CLI::IsMember({"bid", "ask", "both"}));
        if (with_multiplicity) {
            app->add_option("--multiplicity", multiplicity, "ground|per-limit")
                ->capture_default_str()
                ->check(CLI::IsMember({"ground", "per-limit"}));
        }
        app->add_option("--session", session, "HH:MM:SS-HH:MM:SS; its start is time 0 for trades-through input");
        app->add_option("--origin-ns", origin_ns,
                        "absolute ts_ns mapped to time 0 (default: session start, else first event)");
    }

    EventStream load(Manifest& m, std::int64_t* origin_out = nullptr) const {
        m.input("events", path);
        std::ifstream probe(path);
        if (!probe) throw Error("cannot open '" + path + "'");
        std::string header;
        std::getline(probe, header);
        StreamOptions opts;
        opts.mode = parse_side_mode(mode);
        opts.multiplicity = parse_multiplicity(multiplicity);
        if (header.rfind("ts_ns,", 0) != 0) {
            if (origin_out) *origin_out = origin_ns >= 0 ? origin_ns : 0;
            auto events = load_events(path, opts);
            if (opts.mode != SideMode::Both) {
                const auto drop = opts.mode == SideMode::Bid ? Stream::A : Stream::B;
                std::erase_if(events, [drop](const MarkedEvent& e) { return e.stream == drop; });
            }
            if (opts.multiplicity == Multiplicity::Ground) {
                for (auto& e : events) e.jump = 1;
            }
            return events;
        }
        const auto tts = parse_trades_through_csv(path);
        if (origin_ns >= 0) {
            opts.origin_ns = origin_ns;
        } else if (!session.empty()) {
            opts.origin_ns = tts.empty() ? 0 : SessionWindow::parse(session).origin_for(tts.front().ts_ns);
        } else {
            opts.origin_ns = tts.empty() ? 0 : tts.front().ts_ns;
        }
        if (origin_out) *origin_out = opts.origin_ns;
        std::vector<TradeThrough> kept;
        if (!session.empty()) {
            const auto w = SessionWindow::parse(session);
            std::copy_if(tts.begin(), tts.end(), std::back_inserter(kept),
                         [&](const TradeThrough& t) { return w.contains(t.ts_ns); });
        } else {
            kept = tts;
        }
        return to_streams(kept, opts);
    }

    json describe() const {
        return {{"events", path}, {"mode", mode}, {"multiplicity", multiplicity}, {"session", session},
                {"origin_ns", origin_ns}};
    }
};

int run(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    CLI::App app{"Trades-through modelling with marked Hawkes processes and CUSUM regime detection", "liqshift"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    std::string manifest_path;
    app.add_option("--manifest", manifest_path, "where to write the run manifest JSON");

    Manifest manifest;

    // ingest
    auto* ingest = app.add_subcommand("ingest", "parse or synthesise book and trade files");
    std::string book_path, trades_path, out_book, out_trades, session;
    int depth = 4;
    bool synth = false;
    std::uint64_t seed = 0;
    double duration = 27000.0;
    SynthConfig synth_cfg;
    ingest->add_option("--book", book_path, "book CSV (ts_ns,side,level,price_ticks,size)");
    ingest->add_option("--trades", trades_path, "trades CSV (ts_ns,price_ticks,size,aggressor)");
    ingest->add_option("--depth", depth, "book levels kept")->capture_default_str()->check(CLI::PositiveNumber);
    ingest->add_option("--session", session, "keep rows inside HH:MM:SS-HH:MM:SS");
    ingest->add_flag("--synth", synth, "generate a synthetic session instead of reading files");
    auto* ingest_seed = ingest->add_option("--seed", seed, "RNG seed (required with --synth)");
    ingest->add_option("--duration", duration, "synthetic session length in seconds")->capture_default_str();
    ingest->add_option("--trade-rate", synth_cfg.trade_rate, "synthetic market orders per second")
        ->capture_default_str();
    ingest->add_option("--through-prob", synth_cfg.through_probability,
                       "synthetic probability that an order exhausts level 1")
        ->capture_default_str();
    ingest->add_option("--out-book", out_book, "write the (normalised) book CSV here");
    ingest->add_option("--out-trades", out_trades, "write the (normalised) trades CSV here");

    // extract
    auto* extract_cmd = app.add_subcommand("extract", "extract trades-through events");
    std::string tt_out, events_out, mode = "both", multiplicity = "ground";
    std::int64_t origin_ns = -1;
    extract_cmd->add_option("--book", book_path, "book CSV")->required();
    extract_cmd->add_option("--trades", trades_path, "trades CSV")->required();
    extract_cmd->add_option("--depth", depth, "book levels K")->capture_default_str()->check(CLI::PositiveNumber);
    extract_cmd->add_option("--session", session, "keep rows inside HH:MM:SS-HH:MM:SS");
    extract_cmd->add_option("--mode", mode, "bid|ask|both (for --events-out)")
        ->capture_default_str()
        ->check(CLI::IsMember({"bid", "ask", "both"}));
    extract_cmd->add_option("--multiplicity", multiplicity, "ground|per-limit (for --events-out)")
        ->capture_default_str()
        ->check(CLI::IsMember({"ground", "per-limit"}));
    extract_cmd->add_option("--origin-ns", origin_ns, "ts_ns mapped to time 0 in --events-out");
    extract_cmd->add_option("--out", tt_out, "trades-through CSV (ts_ns,side,depth,volume)")->required();
    extract_cmd->add_option("--events-out", events_out, "also write an events CSV in seconds");

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "simulate the marked Hawkes model");
    std::string params_path, out_path;
    double horizon = 0.0;
    simulate_cmd->add_option("--params", params_path, "params JSON")->required();
    simulate_cmd->add_option("--seed", seed, "RNG seed")->required();
    simulate_cmd->add_option("--horizon", horizon, "override the horizon in seconds");
    simulate_cmd->add_option("--out", out_path, "events CSV")->required();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "maximum-likelihood fit");
    EventInput fit_in;
    fit_in.add(fit_cmd, false);
    int bins = kDefaultBaselineBins;
    int max_iters = 500;
    bool no_eta = false;
    std::string init_path;
    fit_cmd->add_option("--horizon", horizon, "observation window in seconds (default: session length)");
    fit_cmd->add_option("--bins", bins, "baseline bins")->capture_default_str()->check(CLI::PositiveNumber);
    fit_cmd->add_option("--init", init_path, "starting params JSON");
    fit_cmd->add_option("--max-iters", max_iters, "optimizer iteration cap")->capture_default_str();
    fit_cmd->add_flag("--no-eta", no_eta, "keep the mark exponents at their initial value");
    fit_cmd->add_option("--out", out_path, "fitted params JSON")->required();

    // diagnose
    auto* diagnose_cmd = app.add_subcommand("diagnose", "time-rescaling goodness-of-fit tests");
    EventInput diag_in;
    diag_in.add(diagnose_cmd, false);
    std::string qq_path;
    int lags = 20;
    diagnose_cmd->add_option("--params", params_path, "params JSON")->required();
    diagnose_cmd->add_option("--lags", lags, "Ljung-Box lags")->capture_default_str();
    diagnose_cmd->add_option("--out", out_path, "report JSON")->required();
    diagnose_cmd->add_option("--qq", qq_path, "Q-Q points CSV");

    // detect
    auto* detect_cmd = app.add_subcommand("detect", "two-sided CUSUM regime detection");
    EventInput det_in;
    det_in.add(detect_cmd, true);
    RegimeOptions ropts;
    std::string ref_events;
    double mean_depth = 0.0;
    detect_cmd->add_option("--ref", params_path, "reference-day params JSON")->required();
    detect_cmd->add_option("--rho-up", ropts.rho_up, "post-change ratio for increases")->capture_default_str();
    detect_cmd->add_option("--rho-down", ropts.rho_down, "post-change ratio for decreases")->capture_default_str();
    detect_cmd->add_option("--m", ropts.threshold, "threshold")->capture_default_str();
    detect_cmd->add_option("--depth", ropts.max_depth, "largest per-limit jump D")->capture_default_str();
    detect_cmd->add_option("--mean-depth", mean_depth, "reference-day mean depth (per-limit mode)");
    detect_cmd->add_option("--ref-events", ref_events, "reference-day trades-through CSV to estimate the mean depth");
    detect_cmd->add_option("--end-time", ropts.end_time, "run until this time (default: reference horizon)");
    detect_cmd->add_option("--out", out_path, "regimes CSV")->required();

    // arl
    auto* arl_cmd = app.add_subcommand("arl", "closed-form average run length");
    double rho = 0.5, m = 5.0, start = 0.0;
    bool tilde = false;
    std::string surface_path, rho_grid = "0.3,0.5,0.7,0.9,1.1,1.3,1.5,2", m_grid = "1,2,3,4,5,6,7,8";
    arl_cmd->add_option("--rho", rho, "intensity ratio")->required();
    arl_cmd->add_option("--m", m, "threshold")->required();
    arl_cmd->add_option("--start", start, "starting value of the reflected statistic")->capture_default_str();
    arl_cmd->add_flag("--tilde", tilde, "post-change variant (expected detection delay)");
    arl_cmd->add_option("--surface", surface_path, "also write an ARL surface CSV over --rho-grid x --m-grid");
    arl_cmd->add_option("--rho-grid", rho_grid, "comma-separated rho values")->capture_default_str();
    arl_cmd->add_option("--m-grid", m_grid, "comma-separated thresholds")->capture_default_str();

    // calibrate
    auto* calibrate_cmd = app.add_subcommand("calibrate", "threshold for a target ARL");
    double target = 0.0;
    calibrate_cmd->add_option("--rho", rho, "intensity ratio")->required();
    calibrate_cmd->add_option("--target", target, "target ARL in events")->required();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Monte-Carlo checks");
    verify_cmd->require_subcommand(1);
    auto* verify_arl = verify_cmd->add_subcommand("arl", "Monte-Carlo ARL against the closed form");
    int reps = 10000;
    double rate = 1.0;
    verify_arl->add_option("--rho", rho, "intensity ratio")->required();
    verify_arl->add_option("--m", m, "threshold")->required();
    verify_arl->add_option("--reps", reps, "replications")->capture_default_str();
    verify_arl->add_option("--rate", rate, "Poisson rate")->capture_default_str();
    verify_arl->add_option("--seed", seed, "RNG seed")->required();
    auto* verify_eps = verify_cmd->add_subcommand("epsilon", "eps-shift convergence of the reflected CUSUM");
    ConvergenceConfig ccfg;
    std::string eps_list = "0.1,0.05,0.01";
    verify_eps->add_option("--rho", ccfg.rho, "intensity ratio")->required();
    verify_eps->add_option("--eps", eps_list, "decreasing comma-separated eps grid")->capture_default_str();
    verify_eps->add_option("--paths", ccfg.paths, "Monte-Carlo paths")->capture_default_str();
    verify_eps->add_option("--horizon", ccfg.horizon, "path length in seconds")->capture_default_str();
    verify_eps->add_option("--limits", ccfg.limits, "number of per-limit streams D")->capture_default_str();
    verify_eps->add_option("--seed", ccfg.seed, "RNG seed")->required();
    verify_eps->add_option("--out", out_path, "report JSON");

    if (argc <= 1) {
        std::cerr << app.help();
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::cout << std::setprecision(10);
    auto session_opt = [&]() -> std::optional<SessionWindow> {
        if (session.empty()) return std::nullopt;
        return SessionWindow::parse(session);
    };

    if (*ingest) {
        manifest.command = "ingest";
        manifest.params = {{"depth", depth}, {"session", session}, {"synth", synth}};
        std::vector<BookSnapshot> snaps;
        std::vector<TradePrint> prints;
        if (synth) {
            if (ingest_seed->count() == 0) throw CLI::RequiredError("--seed");
            synth_cfg.depth = depth;
            manifest.seed = seed;
            manifest.params["duration"] = duration;
            manifest.params["trade_rate"] = synth_cfg.trade_rate;
            manifest.params["through_probability"] = synth_cfg.through_probability;
            auto r = synth_book(seed, duration, synth_cfg);
            snaps = std::move(r.snapshots);
            prints = std::move(r.prints);
        } else {
            if (book_path.empty() || trades_path.empty()) {
                throw CLI::ValidationError("ingest", "needs --book and --trades, or --synth");
            }
            manifest.input("book", book_path);
            manifest.input("trades", trades_path);
            ParseOptions popts{depth, session_opt(), {}};
            snaps = parse_book_csv(book_path, popts);
            prints = parse_trades_csv(trades_path, popts);
        }
        if (!out_book.empty()) {
            auto out = open_out(out_book);
            write_book_csv(out, snaps);
            manifest.output(out_book);
        }
        if (!out_trades.empty()) {
            auto out = open_out(out_trades);
            write_trades_csv(out, prints);
            manifest.output(out_trades);
        }
        std::cout << "snapshots " << snaps.size() << "\nprints " << prints.size() << '\n';
    } else if (*extract_cmd) {
        manifest.command = "extract";
        manifest.input("book", book_path);
        manifest.input("trades", trades_path);
        manifest.params = {{"depth", depth}, {"session", session}, {"mode", mode}, {"multiplicity", multiplicity}};
        ParseOptions popts{depth, session_opt(), {}};
        const auto snaps = parse_book_csv(book_path, popts);
        const auto prints = parse_trades_csv(trades_path, popts);
        const auto tts = extract(snaps, prints);
        {
            auto out = open_out(tt_out);
            write_trades_through_csv(out, tts);
        }
        manifest.output(tt_out);
        if (!events_out.empty()) {
            StreamOptions sopts;
            sopts.mode = parse_side_mode(mode);
            sopts.multiplicity = parse_multiplicity(multiplicity);
            if (origin_ns >= 0) {
                sopts.origin_ns = origin_ns;
            } else if (!tts.empty()) {
                sopts.origin_ns = session.empty() ? tts.front().ts_ns : session_opt()->origin_for(tts.front().ts_ns);
            }
            manifest.params["origin_ns"] = sopts.origin_ns;
            auto out = open_out(events_out);
            write_events_csv(out, to_streams(tts, sopts));
            manifest.output(events_out);
        }
        std::size_t by_depth[64] = {};
        for (const auto& t : tts) ++by_depth[std::min(t.depth, 63)];
        std::cout << "trades_through " << tts.size() << '\n';
        for (int d = 1; d <= depth && d < 64; ++d) std::cout << "depth_" << d << ' ' << by_depth[d] << '\n';
    } else if (*simulate_cmd) {
        manifest.command = "simulate";
        manifest.seed = seed;
        manifest.input("params", params_path);
        auto p = load_params(params_path);
        if (horizon > 0.0) p.horizon = horizon;
        manifest.params = {{"horizon", p.horizon}};
        const auto events = simulate(p, seed);
        auto out = open_out(out_path);
        write_events_csv(out, events);
        manifest.output(out_path);
        const auto counts = count_by_stream(events);
        std::cout << "events_A " << counts[0] << "\nevents_B " << counts[1] << '\n';
    } else if (*fit_cmd) {
        manifest.command = "fit";
        manifest.params = fit_in.describe();
        const auto events = fit_in.load(manifest);
        if (!(horizon > 0.0)) {
            if (fit_in.session.empty()) throw CLI::ValidationError("fit", "needs --horizon or --session");
            horizon = SessionWindow::parse(fit_in.session).length_seconds();
        }
        manifest.params["horizon"] = horizon;
        manifest.params["bins"] = bins;
        HawkesParams init;
        if (!init_path.empty()) {
            manifest.input("init", init_path);
            init = load_params(init_path);
        } else {
            init = default_init(events, horizon, bins);
        }
        FitOptions fopts;
        fopts.max_iters = max_iters;
        fopts.fit_eta = !no_eta;
        FitResult fit;
        bool converged = true;
        try {
            fit = fit_mle(events, horizon, init, fopts);
        } catch (const Nonconvergence& e) {
            std::cerr << e.what() << "; writing best parameters\n";
            fit = e.best();
            converged = false;
        }
        save_params(out_path, fit.params);
        manifest.output(out_path);
        std::cout << "loglik " << fit.loglik << "\ngrad_norm " << fit.grad_norm << "\niterations " << fit.iterations
                  << "\nspectral_radius " << fit.stability.radius << "\nstable " << fit.stability.stable << '\n';
        if (!converged) {
            write_manifest(manifest, manifest_path, args);
            return 1;
        }
    } else if (*diagnose_cmd) {
        manifest.command = "diagnose";
        manifest.params = diag_in.describe();
        manifest.params["lags"] = lags;
        manifest.input("params", params_path);
        const auto p = load_params(params_path);
        const auto events = diag_in.load(manifest);
        const auto report = diagnose(events, p, lags);
        {
            auto out = open_out(out_path);
            out << report_to_json(report);
        }
        manifest.output(out_path);
        if (!qq_path.empty()) {
            const auto res = residuals(events, p);
            auto out = open_out(qq_path);
            out << std::setprecision(10) << "series,theoretical,sample\n";
            const std::pair<const char*, const std::vector<double>*> named[] = {
                {"A", &res.per_stream[0]}, {"B", &res.per_stream[1]}, {"pooled", &res.pooled}};
            for (const auto& [name, sample] : named) {
                for (const auto& [x, y] : qq_data(*sample)) out << name << ',' << x << ',' << y << '\n';
            }
            manifest.output(qq_path);
        }
        for (const auto& s : report.series) {
            std::cout << s.name << " n=" << s.count << " ks_p=" << s.ks.p_value;
            if (s.ljung_box_available) std::cout << " lb_p=" << s.ljung_box.p_value;
            std::cout << '\n';
        }
    } else if (*detect_cmd) {
        manifest.command = "detect";
        manifest.params = det_in.describe();
        manifest.input("ref", params_path);
        const auto ref = load_params(params_path);
        std::int64_t origin = 0;
        const auto events = det_in.load(manifest, &origin);
        ropts.multiplicity = parse_multiplicity(det_in.multiplicity);
        const auto side = parse_side_mode(det_in.mode);
        ropts.streams = {side != SideMode::Bid, side != SideMode::Ask};
        if (ropts.multiplicity == Multiplicity::PerLimit) {
            if (mean_depth <= 0.0 && !ref_events.empty()) {
                manifest.input("ref_events", ref_events);
                const auto ref_tts = parse_trades_through_csv(ref_events);
                double sum = 0.0;
                std::size_t n = 0;
                for (const auto& t : ref_tts) {
                    if ((t.side == kBidSide && !ropts.streams[1]) || (t.side == kAskSide && !ropts.streams[0])) continue;
                    sum += t.depth;
                    ++n;
                }
                if (n == 0) throw InsufficientData("reference events contain no trades-through on the chosen sides");
                mean_depth = sum / static_cast<double>(n);
            }
            if (mean_depth <= 0.0) {
                throw CLI::ValidationError("detect", "per-limit mode needs --mean-depth or --ref-events");
            }
            ropts.mean_depth = mean_depth;
        }
        if (ropts.end_time <= 0.0) ropts.end_time = ref.horizon;
        ropts.origin_ns = origin;
        manifest.params.update({{"rho_up", ropts.rho_up},
                                {"rho_down", ropts.rho_down},
                                {"m", ropts.threshold},
                                {"mean_depth", ropts.mean_depth},
                                {"depth", ropts.max_depth},
                                {"end_time", ropts.end_time}});
        const auto report = run_two_sided(events, ref, ropts);
        {
            auto out = open_out(out_path);
            write_regimes_csv(out, report, origin);
        }
        manifest.output(out_path);
        int ups = 0, downs = 0;
        for (const auto& a : report.alarms) (a.direction == Direction::Up ? ups : downs)++;
        std::cout << "events " << report.total_count << "\ncompensator " << report.total_compensator << "\nalarms_up "
                  << ups << "\nalarms_down " << downs << '\n';
    } else if (*arl_cmd) {
        manifest.command = "arl";
        manifest.params = {{"rho", rho}, {"m", m}, {"start", start}, {"tilde", tilde}};
        double value;
        if (rho < 1.0) {
            value = tilde ? tilde_g(start, m, rho) : arl_decrease(start, m, rho);
        } else {
            value = tilde ? tilde_h(start, m, rho) : arl_increase(start, m, rho);
        }
        std::cout << std::fixed << std::setprecision(6) << value << '\n';
        if (!surface_path.empty()) {
            auto out = open_out(surface_path);
            out << std::setprecision(10) << "rho,m,arl,edd\n";
            for (double r : parse_list(rho_grid)) {
                for (double mm : parse_list(m_grid)) {
                    const double a = arl(mm, r);
                    const double e = r < 1.0 ? tilde_g(0.0, mm, r) : tilde_h(0.0, mm, r);
                    out << r << ',' << mm << ',' << a << ',' << e << '\n';
                }
            }
            manifest.output(surface_path);
            manifest.params["rho_grid"] = rho_grid;
            manifest.params["m_grid"] = m_grid;
        }
    } else if (*calibrate_cmd) {
        manifest.command = "calibrate";
        manifest.params = {{"rho", rho}, {"target", target}};
        std::cout << std::fixed << std::setprecision(9) << calibrate_threshold(target, rho) << '\n';
    } else if (*verify_arl) {
        manifest.command = "verify-arl";
        manifest.seed = seed;
        manifest.params = {{"rho", rho}, {"m", m}, {"reps", reps}, {"rate", rate}};
        const auto est = mc_arl(rho, m, rate, reps, seed);
        const double closed = arl(m, rho);
        std::cout << "mc_mean " << est.mean << "\nstd_error " << est.std_error << "\nclosed_form " << closed
                  << "\nrelative_diff " << (est.mean - closed) / closed << '\n';
    } else if (*verify_eps) {
        manifest.command = "verify-epsilon";
        manifest.seed = ccfg.seed;
        ccfg.eps_grid = parse_list(eps_list);
        manifest.params = {{"rho", ccfg.rho},         {"eps", ccfg.eps_grid}, {"paths", ccfg.paths},
                           {"horizon", ccfg.horizon}, {"limits", ccfg.limits}};
        const auto rep = check_reflected_convergence(ccfg);
        json j;
        j["checkpoints"] = rep.checkpoints;
        j["rows"] = json::array();
        for (const auto& r : rep.rows) {
            std::cout << "eps " << r.eps << " mean_gap " << r.mean_gap << " se " << r.std_error << " collisions "
                      << r.collision_rate << '\n';
            j["rows"].push_back({{"eps", r.eps},
                                 {"mean_gap", r.mean_gap},
                                 {"std_error", r.std_error},
                                 {"max_gap", r.max_gap},
                                 {"collision_rate", r.collision_rate}});
        }
        j["monotone"] = rep.monotone;
        j["within_tolerance"] = rep.within_tolerance;
        std::cout << "monotone " << rep.monotone << "\nwithin_tolerance " << rep.within_tolerance << '\n';
        if (!out_path.empty()) {
            auto out = open_out(out_path);
            out << j.dump(2) << '\n';
            manifest.output(out_path);
        }
    }
    write_manifest(manifest, manifest_path, args);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const liqshift::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
