#pragma once

namespace becsim {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace becsim
