#include "liqshift/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include "liqshift/errors.hpp"

namespace liqshift {

ResidualSeries residuals(std::span<const MarkedEvent> events, const HawkesParams& p) {
    ResidualSeries out;
    IntensityState state;
    std::array<double, 2> pending{0.0, 0.0};
    double pending_total = 0.0;
    double t = 0.0;
    for (const auto& e : events) {
        if (e.time > t) {
            for (auto s : {Stream::A, Stream::B}) {
                const double inc = compensator_increment(t, e.time, s, state, p);
                pending[index(s)] += inc;
                pending_total += inc;
            }
            t = e.time;
        }
        const auto i = index(e.stream);
        out.per_stream[i].push_back(pending[i]);
        out.pooled.push_back(pending_total);
        pending[i] = 0.0;
        pending_total = 0.0;
        state.add(e, p);
    }
    return out;
}

double kolmogorov_survival(double x) noexcept {
    if (!(x > 0.2)) return 1.0;  // the series has not converged this close to 0, where Q is 1 to 1e-12
    double sum = 0.0;
    for (int k = 1; k <= 20; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    }
    return std::clamp(sum, 0.0, 1.0);
}

TestResult ks_exp1(std::span<const double> sample) {
    if (sample.empty()) throw InsufficientData("KS test needs a non-empty sample");
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double cdf = x[i] > 0.0 ? -std::expm1(-x[i]) : 0.0;
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - cdf, cdf - static_cast<double>(i) / n});
    }
    return {d, kolmogorov_survival(std::sqrt(n) * d)};
}

TestResult ljung_box(std::span<const double> sample, int lags) {
    if (lags < 1) throw InsufficientData("Ljung-Box needs lags >= 1");
    const auto n = sample.size();
    if (n <= static_cast<std::size_t>(lags)) {
        throw InsufficientData("Ljung-Box needs more than " + std::to_string(lags) + " points, got " +
                               std::to_string(n));
    }
    const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(n);
    double denom = 0.0;
    for (double v : sample) denom += (v - mean) * (v - mean);
    if (!(denom > 0.0)) throw InsufficientData("Ljung-Box sample has zero variance");
    const double dn = static_cast<double>(n);
    double q = 0.0;
    for (int k = 1; k <= lags; ++k) {
        double num = 0.0;
        for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) {
            num += (sample[t] - mean) * (sample[t - static_cast<std::size_t>(k)] - mean);
        }
        const double r = num / denom;
        q += r * r / (dn - k);
    }
    q *= dn * (dn + 2.0);
    return {q, boost::math::gamma_q(0.5 * lags, 0.5 * q)};
}

std::vector<std::pair<double, double>> qq_data(std::span<const double> sample) {
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    std::vector<std::pair<double, double>> out;
    out.reserve(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double pos = (static_cast<double>(k) + 0.5) / n;
        out.emplace_back(-std::log1p(-pos), x[k]);
    }
    return out;
}

DiagnosticsReport diagnose(std::span<const MarkedEvent> events, const HawkesParams& p, int lags) {
    const auto res = residuals(events, p);
    DiagnosticsReport report;
    report.lags = lags;
    const std::array<std::pair<const char*, const std::vector<double>*>, 3> named{
        {{"A", &res.per_stream[0]}, {"B", &res.per_stream[1]}, {"pooled", &res.pooled}}};
    for (const auto& [name, sample] : named) {
        SeriesReport s;
        s.name = name;
        s.count = sample->size();
        if (sample->empty()) {
            report.series.push_back(s);
            continue;
        }
        s.mean = std::accumulate(sample->begin(), sample->end(), 0.0) / static_cast<double>(s.count);
        s.ks = ks_exp1(*sample);
        try {
            s.ljung_box = ljung_box(*sample, lags);
            s.ljung_box_available = true;
        } catch (const InsufficientData&) {
        }
        report.series.push_back(s);
    }
    return report;
}

std::string report_to_json(const DiagnosticsReport& report) {
    using nlohmann::json;
    auto test_json = [](const TestResult& t) {
        return json{{"statistic", t.statistic},
                    {"p_value", t.p_value},
                    {"pass", {{"1%", t.p_value > 0.01}, {"2.5%", t.p_value > 0.025}, {"5%", t.p_value > 0.05}}}};
    };
    json j;
    j["lags"] = report.lags;
    j["series"] = json::object();
    for (const auto& s : report.series) {
        json e{{"count", s.count}, {"mean_residual", s.mean}};
        if (s.count > 0) e["ks"] = test_json(s.ks);
        e["ljung_box"] = s.ljung_box_available ? test_json(s.ljung_box) : json(nullptr);
        j["series"][s.name] = e;
    }
    return j.dump(2) + "\n";
}

}  // namespace liqshift
