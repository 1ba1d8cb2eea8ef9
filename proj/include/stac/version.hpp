#pragma once

namespace stac {

inline constexpr const char* kToolName = "stac";
inline constexpr const char* kVersion = "0.1.0";

} // namespace stac
