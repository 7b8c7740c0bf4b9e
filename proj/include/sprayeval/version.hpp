#pragma once

namespace sprayeval {

inline constexpr const char* kToolVersion = "0.1.0";

// Bumped whenever the JSON report layout changes incompatibly.
inline constexpr int kReportSchemaVersion = 1;

}  // namespace sprayeval
