#pragma once

namespace uwarma {

inline constexpr const char* kToolName = "uwarma";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace uwarma
