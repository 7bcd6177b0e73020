#pragma once

#include <string_view>

namespace mtkit {

inline constexpr std::string_view kVersion = "0.1.0";
/// Written into metric signatures: "mtkit-<version>".
inline constexpr std::string_view kToolkitId = "mtkit-0.1.0";

}  // namespace mtkit
