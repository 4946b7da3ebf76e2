#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "liqshift/events.hpp"
#include "liqshift/hawkes.hpp"

namespace liqshift {

/// Compensator increments between consecutive events. The first residual of
/// each series is measured from time 0.
struct ResidualSeries {
    std::array<std::vector<double>, 2> per_stream;
    std::vector<double> pooled;  ///< superposed process A+B
};

[[nodiscard]] ResidualSeries residuals(std::span<const MarkedEvent> events, const HawkesParams& p);

struct TestResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov test against Exp(1) with the asymptotic
/// Kolmogorov p-value (20-term series). Throws InsufficientData when empty.
[[nodiscard]] TestResult ks_exp1(std::span<const double> sample);

/// Asymptotic Kolmogorov survival function P(K > x).
[[nodiscard]] double kolmogorov_survival(double x) noexcept;

/// Ljung-Box portmanteau test with a chi-square(lags) p-value. Throws
/// InsufficientData if lags < 1, the sample has at most `lags` points, or
/// it has zero variance.
[[nodiscard]] TestResult ljung_box(std::span<const double> sample, int lags = 20);

/// (theoretical Exp(1) quantile, sample order statistic) at plotting
/// positions (k - 0.5) / n.
[[nodiscard]] std::vector<std::pair<double, double>> qq_data(std::span<const double> sample);

struct SeriesReport {
    std::string name;
    std::size_t count = 0;
    double mean = 0.0;
    TestResult ks;
    TestResult ljung_box;
    bool ljung_box_available = false;
};

struct DiagnosticsReport {
    int lags = 20;
    std::vector<SeriesReport> series;  ///< A, B, pooled
};

[[nodiscard]] DiagnosticsReport diagnose(std::span<const MarkedEvent> events, const HawkesParams& p, int lags = 20);

/// JSON with statistics, p-values and pass flags at the 1%, 2.5% and 5% levels.
[[nodiscard]] std::string report_to_json(const DiagnosticsReport& report);

}  // namespace liqshift
