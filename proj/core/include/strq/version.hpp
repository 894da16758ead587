#pragma once

#define STRQ_VERSION_MAJOR 1
#define STRQ_VERSION_MINOR 0
#define STRQ_VERSION_PATCH 0
#define STRQ_VERSION_STRING "1.0.0"

namespace strq {
inline const char* version() { return STRQ_VERSION_STRING; }
}  // namespace strq
