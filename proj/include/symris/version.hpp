#pragma once

namespace symris {

inline constexpr const char* kVersion = "symris 0.1.0";

}
