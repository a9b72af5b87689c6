#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "bellfilter/pauli.hpp"

namespace bellfilter {

// State file format: {"re": [[4x4]], "im": [[4x4]]}, row-major. "im" may be
// omitted for real matrices. Loaded states go through make_density.

DensityMatrix parse_state_json(std::string_view text);
DensityMatrix load_state_file(const std::filesystem::path& path);
std::string state_to_json(const DensityMatrix& rho, int indent = -1);

}  // namespace bellfilter
