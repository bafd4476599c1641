#pragma once

namespace dbisim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dbisim
