#pragma once

namespace sigsim {

inline constexpr const char* version = "0.1.0";

} // namespace sigsim
