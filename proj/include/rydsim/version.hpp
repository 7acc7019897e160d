#pragma once

namespace rydsim {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "rydsim";

}  // namespace rydsim
