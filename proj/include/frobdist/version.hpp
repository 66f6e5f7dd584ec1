#pragma once

namespace frobdist {

inline constexpr const char *kVersion = "1.0.0";

} // namespace frobdist
