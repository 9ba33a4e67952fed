#pragma once

namespace rdexp {

inline constexpr const char* version = "0.1.0";

}
