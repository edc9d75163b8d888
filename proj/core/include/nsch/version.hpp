#pragma once

namespace nsch {

inline constexpr const char* kVersionString = "nsch 1.0.0";

}  // namespace nsch
