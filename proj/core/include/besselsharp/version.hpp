#pragma once

namespace bsharp {

inline constexpr const char* version = "0.1.0";

} // namespace bsharp
