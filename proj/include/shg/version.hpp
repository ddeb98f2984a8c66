#pragma once

#define SHG_VERSION_MAJOR 0
#define SHG_VERSION_MINOR 3
#define SHG_VERSION_PATCH 0

namespace shg {
inline constexpr const char* version_string = "0.3.0";
}
