#include "liqshift/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "liqshift/errors.hpp"

namespace liqshift {

namespace {

std::mt19937_64 rep_rng(std::uint64_t seed, std::uint64_t rep) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
    return std::mt19937_64(seq);
}

// Gap used for each arrival: smallest difference between consecutive
// distinct times of {0} and all arrivals up to and including it.
std::vector<std::vector<double>> running_min_gap(const StreamTimes& streams) {
    std::vector<std::pair<double, std::size_t>> all;  // time, stream
    for (std::size_t i = 0; i < streams.size(); ++i) {
        for (std::size_t k = 0; k < streams[i].size(); ++k) {
            if (k > 0 && streams[i][k] < streams[i][k - 1]) throw InvalidConfig("stream times must be sorted");
            all.emplace_back(streams[i][k], i);
        }
    }
    std::sort(all.begin(), all.end());
    std::vector<std::vector<double>> gaps(streams.size());
    double prev = 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::size_t a = 0;
    while (a < all.size()) {
        const double t = all[a].first;
        if (t < 0.0) throw InvalidConfig("arrival times must be >= 0");
        if (t > prev) {
            best = std::min(best, t - prev);
            prev = t;
        }
        for (; a < all.size() && all[a].first == t; ++a) gaps[all[a].second].push_back(best);
    }
    return gaps;
}

ShiftResult shift(const StreamTimes& streams, double eps, double sign) {
    if (!(eps > 0.0)) throw InvalidConfig("eps must be positive");
    const auto gaps = running_min_gap(streams);
    const double d = static_cast<double>(streams.size());
    ShiftResult out;
    out.times.resize(streams.size());
    for (std::size_t i = 0; i < streams.size(); ++i) {
        const auto& s = streams[i];
        const double weight = static_cast<double>(i + 1) / d * eps;
        for (std::size_t k = 0; k < s.size(); ++k) {
            // a zero-time arrival has no positive gap; leave it in place
            const double delta = std::isfinite(gaps[i][k]) ? weight * gaps[i][k] : 0.0;
            const double moved = sign > 0 ? s[k] + delta : std::max(0.0, s[k] - delta);
            out.times[i].push_back(moved);
            if (sign > 0 && k + 1 < s.size() && moved >= s[k + 1]) out.collision = true;
            if (sign < 0 && k > 0 && moved <= s[k - 1]) out.collision = true;
        }
    }
    return out;
}

}  // namespace

ShiftResult shift_forward(const StreamTimes& streams, double eps) { return shift(streams, eps, +1.0); }

ShiftResult shift_backward(const StreamTimes& streams, double eps) { return shift(streams, eps, -1.0); }

std::vector<double> reflected_at(const StreamTimes& streams, double rate, double rho,
                                 std::span<const double> checkpoints) {
    std::vector<double> times;
    for (const auto& s : streams) times.insert(times.end(), s.begin(), s.end());
    std::sort(times.begin(), times.end());

    CusumDetector det({rho, 1.0, std::numeric_limits<int>::max()});
    det.set_silent(true);
    const CompensatorFn lambda = [rate](double a, double b) { return rate * (b - a); };
    std::vector<double> out;
    out.reserve(checkpoints.size());
    std::size_t k = 0;
    for (double c : checkpoints) {
        while (k < times.size() && times[k] <= c) {
            const double t = times[k];
            double jump = 0.0;
            for (; k < times.size() && times[k] == t; ++k) jump += 1.0;
            det.advance(t, lambda);
            det.on_event(jump);
        }
        det.advance(c, lambda);
        out.push_back(det.state().reflected);
    }
    return out;
}

ConvergenceReport check_reflected_convergence(const ConvergenceConfig& cfg) {
    if (cfg.limits < 1 || cfg.paths < 2 || !(cfg.horizon > 0.0) || !(cfg.rate > 0.0)) {
        throw InvalidConfig("convergence check needs limits >= 1, paths >= 2, positive horizon and rate");
    }
    if (cfg.eps_grid.empty()) throw InvalidConfig("eps grid is empty");
    for (std::size_t i = 1; i < cfg.eps_grid.size(); ++i) {
        if (!(cfg.eps_grid[i] < cfg.eps_grid[i - 1])) throw InvalidConfig("eps grid must be decreasing");
    }
    const double mean_depth = [&] {
        // E[min(1 + Geom, D)] with continuation probability q
        double m = 0.0, p = 1.0;
        for (int d = 1; d <= cfg.limits; ++d) {
            m += p;
            p *= cfg.deeper_probability;
        }
        return m;
    }();
    const double lambda_sum = cfg.rate * mean_depth;

    ConvergenceReport report;
    for (int q = 1; q <= 9; ++q) report.checkpoints.push_back(cfg.horizon * q / 10.0);

    const auto n_eps = cfg.eps_grid.size();
    std::vector<std::vector<double>> gaps(n_eps, std::vector<double>(static_cast<std::size_t>(cfg.paths)));
    std::vector<int> collisions(n_eps, 0);
    for (int path = 0; path < cfg.paths; ++path) {
        auto rng = rep_rng(cfg.seed, static_cast<std::uint64_t>(path));
        std::exponential_distribution<double> gap(cfg.rate);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        StreamTimes streams(static_cast<std::size_t>(cfg.limits));
        for (double t = gap(rng); t < cfg.horizon; t += gap(rng)) {
            int depth = 1;
            while (depth < cfg.limits && unit(rng) < cfg.deeper_probability) ++depth;
            for (int n = 0; n < depth; ++n) streams[static_cast<std::size_t>(n)].push_back(t);
        }
        const auto base = reflected_at(streams, lambda_sum, cfg.rho, report.checkpoints);
        for (std::size_t e = 0; e < n_eps; ++e) {
            const auto shifted = cfg.rho < 1.0 ? shift_forward(streams, cfg.eps_grid[e])
                                               : shift_backward(streams, cfg.eps_grid[e]);
            if (shifted.collision) ++collisions[e];
            const auto moved = reflected_at(shifted.times, lambda_sum, cfg.rho, report.checkpoints);
            double sum = 0.0;
            for (std::size_t c = 0; c < base.size(); ++c) sum += std::abs(moved[c] - base[c]);
            gaps[e][static_cast<std::size_t>(path)] = sum / static_cast<double>(base.size());
        }
    }

    const double n = static_cast<double>(cfg.paths);
    for (std::size_t e = 0; e < n_eps; ++e) {
        EpsilonRow row;
        row.eps = cfg.eps_grid[e];
        double sum = 0.0, sum2 = 0.0;
        for (double g : gaps[e]) {
            sum += g;
            sum2 += g * g;
            row.max_gap = std::max(row.max_gap, g);
        }
        row.mean_gap = sum / n;
        row.std_error = std::sqrt(std::max(0.0, sum2 / n - row.mean_gap * row.mean_gap) / (n - 1.0));
        row.collision_rate = collisions[e] / n;
        report.rows.push_back(row);
    }
    report.monotone = true;
    for (std::size_t e = 1; e < n_eps; ++e) {
        const auto& a = report.rows[e - 1];
        const auto& b = report.rows[e];
        // paired differences would be tighter; the marginal bound is conservative
        if (b.mean_gap > a.mean_gap + 2.0 * std::hypot(a.std_error, b.std_error)) report.monotone = false;
    }
    report.within_tolerance = report.rows.back().mean_gap < cfg.tolerance;
    return report;
}

ArlEstimate mc_arl(double rho, double threshold, double rate, int reps, std::uint64_t seed) {
    if (reps < 1) throw InvalidConfig("reps must be >= 1");
    if (!(rate > 0.0)) throw InvalidConfig("rate must be positive");
    const CompensatorFn lambda = [rate](double a, double b) { return rate * (b - a); };
    double sum = 0.0, sum2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto rng = rep_rng(seed, static_cast<std::uint64_t>(r));
        std::exponential_distribution<double> gap(rate);
        CusumDetector det({rho, threshold, 1});
        double t = 0.0;
        double count = 0.0;
        while (true) {
            t += gap(rng);
            if (auto a = det.advance(t, lambda)) {
                count = a->run_count;
                break;
            }
            if (auto a = det.on_event(1.0)) {
                count = a->run_count;
                break;
            }
        }
        sum += count;
        sum2 += count * count;
    }
    const double n = reps;
    ArlEstimate est;
    est.reps = reps;
    est.mean = sum / n;
    est.std_error = reps > 1 ? std::sqrt(std::max(0.0, sum2 / n - est.mean * est.mean) / (n - 1.0)) : 0.0;
    return est;
}

}  // namespace liqshift
