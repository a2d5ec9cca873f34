#pragma once

namespace normaudit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace normaudit
