#pragma once

namespace mtskl {

inline constexpr const char* kVersion = "0.1.0";

} // namespace mtskl
