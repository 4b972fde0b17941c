#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adatest/sim.hpp"

namespace adatest {

// One vector per line as 0/1 characters in PI order. Blank lines and lines
// starting with '#' are ignored.
std::vector<PatternVector> parse_patterns(std::string_view text,
                                          std::optional<std::size_t> width = std::nullopt);
std::vector<PatternVector> read_pattern_file(const std::filesystem::path& path,
                                             std::optional<std::size_t> width = std::nullopt);
std::string write_patterns(std::span<const PatternVector> vectors);

}  // namespace adatest
