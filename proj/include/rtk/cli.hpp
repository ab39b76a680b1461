#pragma once

#include <string>
#include <vector>

#include "rtk/scene.hpp"

namespace rtk {

/// Entry point of the `rtk` tool. Returns 0 on success, 1 for invalid input
/// or usage, 2 for IO failures.
int cli_main(int argc, char** argv);
int cli_main(const std::vector<std::string>& args);

/// Template and lane count of a batch scene are functions of its seed, so a
/// scene is identified by its seed alone.
SceneTemplate template_for_seed(std::uint64_t seed);
int lanes_for_seed(std::uint64_t seed);

}  // namespace rtk
