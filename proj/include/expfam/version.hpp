#pragma once

namespace expfam {

inline constexpr const char* version = "1.0.0";

}
