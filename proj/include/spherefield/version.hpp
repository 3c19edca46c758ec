#pragma once

namespace spherefield {
inline constexpr const char* kVersion = "0.1.0";
}
