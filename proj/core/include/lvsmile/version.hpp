#pragma once

namespace lvsmile {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lvsmile
