#pragma once

namespace garble {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Bumped when the JSON table file layout changes incompatibly.
inline constexpr int kTableFormatVersion = 1;

// Bumped when dataset/manifest/report layouts change incompatibly.
inline constexpr int kDatasetFormatVersion = 1;

}  // namespace garble
