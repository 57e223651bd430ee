#pragma once

namespace oscbm::version {

inline constexpr const char* kName = "oscbm";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace oscbm::version
