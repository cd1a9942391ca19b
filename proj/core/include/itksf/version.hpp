#pragma once

namespace itksf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace itksf
