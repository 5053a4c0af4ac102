#pragma once

// Named parameter sets for the four regimes of the MW-dressed ladder.

#include "rydmw/params.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace rydmw {

/// eia, deit, crossover, dats. Omega_mw is left at 0.
std::optional<SystemParams> preset(std::string_view name);
std::vector<std::string_view> preset_names();

}  // namespace rydmw
