#pragma once

namespace rowloss {

inline constexpr const char* version = "0.1.0";

}  // namespace rowloss
