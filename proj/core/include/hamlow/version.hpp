#pragma once

namespace hamlow {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kVersionString = "hamlow 0.1.0";

}  // namespace hamlow
