#pragma once

namespace fdrl {

inline constexpr const char* version = "0.1.0";

}  // namespace fdrl
