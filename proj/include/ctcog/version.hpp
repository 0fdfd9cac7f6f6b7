#pragma once

#include <string_view>

namespace ctcog {

inline constexpr std::string_view kToolName = "ctcog";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace ctcog
