#pragma once

namespace qscram {
inline constexpr const char* kVersion = "0.1.0";
}
