#pragma once

namespace mamreal {

inline constexpr const char* kToolName = "mamrealize";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace mamreal
