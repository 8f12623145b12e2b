#pragma once

#define FXSCALE_VERSION_MAJOR 0
#define FXSCALE_VERSION_MINOR 1
#define FXSCALE_VERSION_PATCH 0
#define FXSCALE_VERSION_STRING "0.1.0"

namespace fxscale {

inline const char* version() { return FXSCALE_VERSION_STRING; }

}  // namespace fxscale
