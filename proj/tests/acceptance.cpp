// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every gated criterion passes.
//
// usage: acceptance <path-to-liqshift-cli>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "liqshift/cusum.hpp"
#include "liqshift/diagnostics.hpp"
#include "liqshift/hawkes.hpp"
#include "liqshift/hawkes_fit.hpp"
#include "liqshift/scale_function.hpp"
#include "liqshift/verification.hpp"
#include "oracles.hpp"

using namespace liqshift;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void verdict(int id, bool pass, const std::string& detail) {
    std::cout << "[" << (pass ? "PASS" : "FAIL") << "] criterion " << id << ": " << detail << std::endl;
    if (!pass) ++failures;
}

void note(int id, const std::string& detail) { std::cout << "       criterion " << id << " info: " << detail << std::endl; }

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

std::string run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = cli + " --manifest /dev/null " + args + " 2>&1";
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    if (!pipe) return {};
    std::string out;
    char buf[256];
    while (fgets(buf, sizeof buf, pipe.get())) out += buf;
    return out;
}

// 1. closed-form ARL anchors through the CLI.
void criterion1(const std::string& cli) {
    const auto t0 = Clock::now();
    const double down = std::strtod(run_cli(cli, "arl --rho 0.5 --m 5").c_str(), nullptr);
    const double up = std::strtod(run_cli(cli, "arl --rho 1.5 --m 5").c_str(), nullptr);
    const double elapsed = seconds_since(t0);
    const bool pass = std::abs(down - 75.97) <= 0.01 && std::abs(up - 60.4) <= 0.1 && elapsed < 1.0;
    verdict(1, pass,
            "arl(rho=0.5,m=5)=" + fmt(down, 8) + " (target 75.97+-0.01), arl(rho=1.5,m=5)=" + fmt(up, 8) +
                " (target 60.4+-0.1), " + fmt(elapsed, 3) + " s");
    note(1, "post-change variants at m=5: tilde_g(rho=0.5)=" + fmt(tilde_g(0, 5, 0.5)) +
                ", tilde_h(rho=1.5)=" + fmt(tilde_h(0, 5, 1.5)));
}

// 2. Monte-Carlo ARL against the closed forms.
void criterion2() {
    const auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    for (double rho : {0.5, 1.5}) {
        for (double m : {1.0, 3.0, 5.0}) {
            const auto est = mc_arl(rho, m, 1.0, 10000, 1);
            const double closed = arl(m, rho);
            const double rel = (est.mean - closed) / closed;
            pass = pass && std::abs(rel) < 0.02;
            detail += " (rho=" + fmt(rho) + ",m=" + fmt(m) + ": mc " + fmt(est.mean) + "+-" + fmt(est.std_error, 3) +
                      " vs " + fmt(closed) + ", " + fmt(100 * rel, 3) + "%)";
        }
    }
    const double elapsed = seconds_since(t0);
    pass = pass && elapsed < 120.0;
    verdict(2, pass, "10^4 reps each, tolerance 2%;" + detail + " " + fmt(elapsed, 3) + " s");
}

HawkesParams random_params(std::mt19937_64& rng, double horizon) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto p = HawkesParams::with_constant_baseline(0, 0, horizon);
    for (auto& m : p.mu) {
        for (auto& v : m) v = 0.1 + 0.6 * u(rng);
    }
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            p.decay[i][j] = 0.5 + 2.5 * u(rng);
            p.alpha[i][j] = p.decay[i][j] * 0.35 * u(rng);
        }
        p.eta[i] = u(rng) < 0.3 ? 0.0 : 1.2 * u(rng);
        p.mark_rate[i] = 0.01 + u(rng);
    }
    return p;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

// 3. O(N) recursions against O(N^2) direct sums.
void criterion3() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(3);
    double worst = 0.0;
    std::size_t max_events = 0, total = 0;
    for (int inst = 0; inst < 100; ++inst) {
        auto p = random_params(rng, 200.0 + 400.0 * std::uniform_real_distribution<double>(0, 1)(rng));
        auto events = simulate(p, 1000 + static_cast<std::uint64_t>(inst));
        if (events.size() > 2000) {
            events.resize(2000);
            p.horizon = std::nextafter(events.back().time, 1e300);
        }
        max_events = std::max(max_events, events.size());
        total += events.size();

        worst = std::max(worst, rel_diff(log_likelihood(events, p).total(), oracle::loglik(events, p)));

        // intensity and compensator at random quiet points
        IntensityState state;
        std::size_t k = 0;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int q = 0; q < 50 && !events.empty(); ++q) {
            const auto idx = static_cast<std::size_t>(u(rng) * static_cast<double>(events.size() - 1));
            if (idx + 1 >= events.size() || idx < k) continue;
            for (; k <= idx; ++k) state.add(events[k], p);
            const double a = events[idx].time;
            const double b = events[idx + 1].time;
            const double t = a + u(rng) * (b - a);
            for (auto s : {Stream::A, Stream::B}) {
                const std::span<const MarkedEvent> hist(events.data(), idx + 1);
                worst = std::max(worst, rel_diff(ground_intensity(t, s, state, p) / oracle::intensity(t, s, hist, p), 1.0));
                const double c = compensator_increment(a, t, s, state, p);
                const double o = oracle::compensator(a, t, s, hist, p);
                worst = std::max(worst, std::abs(c - o) / std::max(o, 1e-300));
            }
        }

        const auto res = residuals(events, p);
        for (auto s : {Stream::A, Stream::B}) {
            const auto ref = oracle::residuals(events, s, p);
            const auto& got = res.per_stream[index(s)];
            if (ref.size() != got.size()) {
                worst = 1.0;
                continue;
            }
            for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(got[i] - ref[i]) / ref[i]);
        }
    }
    const double elapsed = seconds_since(t0);
    verdict(3, worst < 1e-8 && elapsed < 60.0,
            "100 instances (max " + std::to_string(max_events) + " events, " + std::to_string(total) +
                " total), worst relative difference " + fmt(worst, 3) + " (tolerance 1e-8), " + fmt(elapsed, 3) + " s");
}

HawkesParams recovery_model(double horizon) {
    auto p = HawkesParams::with_constant_baseline(0, 0, horizon);
    // intraday U-shape on both sides
    for (std::size_t b = 0; b < p.bins(); ++b) {
        const double x = (static_cast<double>(b) + 0.5) / static_cast<double>(p.bins()) - 0.5;
        p.mu[0][b] = 0.35 + 1.2 * x * x;
        p.mu[1][b] = 0.30 + 1.0 * x * x;
    }
    p.alpha = {{{0.6, 0.3}, {0.2, 0.5}}};
    p.decay = {{{1.2, 1.0}, {0.8, 1.5}}};
    p.eta = {0.5, 0.8};
    p.mark_rate = {0.012, 0.009};
    return p;
}

// 4. MLE recovery.
void criterion4() {
    const auto t0 = Clock::now();
    const auto truth = recovery_model(50000.0);
    const auto events = simulate(truth, 4);
    const auto init = default_init(events, truth.horizon);
    FitResult fit;
    bool converged = true;
    try {
        fit = fit_mle(events, truth.horizon, init);
    } catch (const Nonconvergence& e) {
        fit = e.best();
        converged = false;
    }
    const auto x_true = pack(truth);
    const auto x_fit = pack(fit.params);
    double worst = 0.0;
    std::size_t worst_idx = 0;
    for (std::size_t i = 0; i < x_true.size(); ++i) {
        const double rel = std::abs(x_fit[i] - x_true[i]) / x_true[i];
        if (rel > worst) {
            worst = rel;
            worst_idx = i;
        }
    }
    for (std::size_t i = 0; i < 2; ++i) {
        worst = std::max(worst, std::abs(fit.params.mark_rate[i] - truth.mark_rate[i]) / truth.mark_rate[i]);
    }
    const double ll_true = log_likelihood(events, truth).total();
    const double slack = 1.0;
    const double elapsed = seconds_since(t0);
    const bool pass = converged && worst < 0.10 && fit.loglik >= ll_true - slack && elapsed < 300.0;
    verdict(4, pass,
            std::to_string(events.size()) + " events, " + std::to_string(x_true.size() + 2) +
                " parameters, worst relative error " + fmt(100 * worst, 3) + "% (param #" + std::to_string(worst_idx) +
                "), loglik fit " + fmt(fit.loglik, 12) + " vs truth " + fmt(ll_true, 12) + " (slack " + fmt(slack) +
                "), converged " + (converged ? "yes" : "no") + ", " + fmt(elapsed, 3) + " s");
    note(4, "fitted alpha [[" + fmt(fit.params.alpha[0][0], 4) + "," + fmt(fit.params.alpha[0][1], 4) + "],[" +
                fmt(fit.params.alpha[1][0], 4) + "," + fmt(fit.params.alpha[1][1], 4) + "]] decay [[" +
                fmt(fit.params.decay[0][0], 4) + "," + fmt(fit.params.decay[0][1], 4) + "],[" +
                fmt(fit.params.decay[1][0], 4) + "," + fmt(fit.params.decay[1][1], 4) + "]] eta [" +
                fmt(fit.params.eta[0], 4) + "," + fmt(fit.params.eta[1], 4) + "] radius " +
                fmt(fit.stability.radius, 4));
}

// 5. KS and Ljung-Box calibration on well-specified residuals.
void criterion5() {
    const auto t0 = Clock::now();
    const auto p = recovery_model(1500.0);
    int tests = 0, ks_reject = 0, lb_reject = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto res = residuals(simulate(p, seed), p);
        for (const auto& r : res.per_stream) {
            ++tests;
            if (ks_exp1(r).p_value < 0.05) ++ks_reject;
            if (ljung_box(r, 20).p_value < 0.05) ++lb_reject;
        }
    }
    const double ks_rate = static_cast<double>(ks_reject) / tests;
    const double lb_rate = static_cast<double>(lb_reject) / tests;
    const double elapsed = seconds_since(t0);
    const bool pass = std::abs(ks_rate - 0.05) <= 0.02 && std::abs(lb_rate - 0.05) <= 0.02 && elapsed < 300.0;
    verdict(5, pass,
            "200 seeds x 2 streams: KS rejection " + fmt(100 * ks_rate, 3) + "%, Ljung-Box(20) rejection " +
                fmt(100 * lb_rate, 3) + "% (target 5+-2%), " + fmt(elapsed, 3) + " s");
}

// 6. Injected increase: detection delay and false alarms before the change.
void criterion6() {
    const auto t0 = Clock::now();
    const double rho_up = 1.5, m = 5.0, rate = 1.0, t_star = 400.0, horizon = t_star + 200.0;
    const int paths = 500;
    const double arl_up = arl_increase(0, m, rho_up);
    double delay_sum = 0.0;
    int detected = 0;
    double pre_events = 0.0, pre_alarms = 0.0;
    std::vector<double> per_path_alarms;
    for (int path = 0; path < paths; ++path) {
        std::mt19937_64 rng(6000 + static_cast<std::uint64_t>(path));
        CusumDetector det({rho_up, m, 1});
        // reference compensator: constant rate before and after (H0 model)
        const CompensatorFn lambda = [rate](double a, double b) { return rate * (b - a); };
        double t = 0.0, path_alarms = 0.0, post_count = 0.0;
        bool found = false;
        std::exponential_distribution<double> pre(rate), post(rho_up * rate);
        while (true) {
            const double next = t < t_star ? t + pre(rng) : t + post(rng);
            double tn = next;
            if (t < t_star && next >= t_star) {
                // memoryless restart of the clock at the change point
                tn = t_star + post(rng);
            }
            if (tn > horizon) break;
            t = tn;
            det.advance(t, lambda);
            if (t < t_star) pre_events += 1.0;
            else post_count += 1.0;
            if (det.on_event(1.0)) {
                det.restart();
                if (t < t_star) {
                    path_alarms += 1.0;
                } else {
                    delay_sum += post_count;
                    ++detected;
                    found = true;
                    break;
                }
            }
        }
        (void)found;
        pre_alarms += path_alarms;
        per_path_alarms.push_back(path_alarms);
    }
    const double mean_delay = delay_sum / std::max(detected, 1);
    const double delay_rel = (mean_delay - arl_up) / arl_up;
    const double expected = pre_events / arl_up;
    double var = 0.0;
    const double mean_alarms = pre_alarms / paths;
    for (double a : per_path_alarms) var += (a - mean_alarms) * (a - mean_alarms);
    const double se = std::sqrt(var / (paths - 1) * paths);
    const bool delay_ok = detected == paths && std::abs(delay_rel) <= 0.25;
    const bool false_ok = std::abs(pre_alarms - expected) <= 2.0 * se;
    const double elapsed = seconds_since(t0);
    verdict(6, delay_ok && false_ok,
            "500 paths: mean event-count delay " + fmt(mean_delay) + " vs arl_increase " + fmt(arl_up) + " (" +
                fmt(100 * delay_rel, 3) + "%, tolerance 25%, detected " + std::to_string(detected) +
                "); false UP alarms before t* " + fmt(pre_alarms) + " vs expected " + fmt(expected) + " +- 2x" +
                fmt(se, 4) + " (" + (false_ok ? "ok" : "outside") + "), " + fmt(elapsed, 3) + " s");
    note(6, "post-change expected delay tilde_h(0,5,1.5) = " + fmt(tilde_h(0, m, rho_up)) + "; measured " +
                fmt(mean_delay) + " (" + fmt(100 * (mean_delay - tilde_h(0, m, rho_up)) / tilde_h(0, m, rho_up), 3) +
                "%)");
    note(6, "false-alarm count implied by the target ARL 60.4 would be " + fmt(pre_events / 60.4));
}

// 7. eps-shift convergence of the reflected statistic.
void criterion7() {
    const auto t0 = Clock::now();
    ConvergenceConfig cfg;
    cfg.rho = 0.5;
    cfg.paths = 1000;
    cfg.seed = 7;
    cfg.eps_grid = {0.1, 0.05, 0.01};
    const auto rep = check_reflected_convergence(cfg);
    std::string detail;
    for (const auto& r : rep.rows) {
        detail += " eps=" + fmt(r.eps) + ": " + fmt(r.mean_gap, 4) + "+-" + fmt(r.std_error, 3) + " (collisions " +
                  fmt(100 * r.collision_rate, 3) + "%);";
    }
    bool strictly = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) strictly = strictly && rep.rows[i].mean_gap < rep.rows[i - 1].mean_gap;
    const double elapsed = seconds_since(t0);
    verdict(7, strictly && rep.within_tolerance,
            "1000 paths, D=4, mean |U~eps - U~| at deciles:" + detail + " decreasing " + (strictly ? "yes" : "no") +
                ", below 0.05 at eps=0.01 " + (rep.within_tolerance ? "yes" : "no") + ", " + fmt(elapsed, 3) + " s");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <liqshift-cli>\n";
        return 2;
    }
    const std::string cli = argv[1];
    criterion1(cli);
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    std::cout << "[DECLARED] criterion 8: results that need the proprietary order-book data (test pass rates, "
                 "fitted branching ratio and mark rates, real-data figures) are not reproduced; criteria 2-7 "
                 "stand in for them on synthetic data"
              << std::endl;
    std::cout << (failures == 0 ? "all gated criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
