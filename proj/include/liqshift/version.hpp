#pragma once

namespace liqshift {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace liqshift
