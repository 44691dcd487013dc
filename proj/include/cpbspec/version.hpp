// version.hpp — library version string, embedded into serialized results

#pragma once

#include <string_view>

namespace cpbspec {

inline constexpr std::string_view version = "0.1.0";

} // namespace cpbspec
