#pragma once

namespace varapps {

inline constexpr const char* kEngineVersion = "1.0.0";
inline constexpr int kProtocolVersion = 1;
inline constexpr int kTrajectoryFormatVersion = 1;

}  // namespace varapps
