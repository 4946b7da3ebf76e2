#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "liqshift/events.hpp"
#include "liqshift/hawkes.hpp"
#include "liqshift/trades_through.hpp"

namespace liqshift {

inline constexpr int kParamsSchema = 1;

/// JSON with keys schema, horizon, mu_A, mu_B, alpha, beta (decay matrix,
/// rows = excited stream), eta_A, eta_B, beta_A, beta_B (mark rates).
[[nodiscard]] std::string params_to_json(const HawkesParams& p);
/// Rejects unknown keys, missing keys and schema mismatches with InvalidConfig.
[[nodiscard]] HawkesParams params_from_json(const std::string& text);
[[nodiscard]] HawkesParams load_params(const std::string& path);
void save_params(const std::string& path, const HawkesParams& p);

/// Events CSV: `time,stream,mark,jump` with stream in {A,B}.
void write_events_csv(std::ostream& out, std::span<const MarkedEvent> events);
[[nodiscard]] EventStream parse_events_csv(std::istream& in);

/// Loads either an events CSV or a trades-through CSV (detected from the
/// header); the latter is mapped through to_streams with `opts`.
[[nodiscard]] EventStream load_events(const std::string& path, const StreamOptions& opts = {});

}  // namespace liqshift
