#pragma once

namespace cyclewalk::cli {

inline constexpr const char* kToolName = "cyclewalk";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace cyclewalk::cli
