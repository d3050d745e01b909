// version.hpp — library and file-format versions

#pragma once

namespace becmon {

inline constexpr const char* kVersion = "1.0.0";

inline constexpr int kConfigFormatVersion = 1;
inline constexpr int kTrajectoryFormatVersion = 1;
inline constexpr int kWignerFormatVersion = 1;
inline constexpr int kManifestFormatVersion = 1;
// record format version lives in record.hpp next to its codecs

} // namespace becmon
