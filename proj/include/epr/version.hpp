#pragma once

namespace epr {

inline constexpr const char* kToolName = "eprsim";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace epr
