#pragma once

namespace rps {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rps
