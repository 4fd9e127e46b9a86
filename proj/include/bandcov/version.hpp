#pragma once

namespace bandcov {

inline constexpr const char* kToolName = "bandcov";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace bandcov
