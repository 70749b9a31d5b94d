#pragma once

namespace gridsweep {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "gridsweep";

}  // namespace gridsweep
