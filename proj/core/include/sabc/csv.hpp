#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sabc/models.hpp"

namespace sabc {

/// Shortest round-trip decimal representation ("inf", "-inf", "nan" for
/// non-finite values).
std::string format_real(double x);

/// Fixed notation with the given number of decimals.
std::string format_fixed(double x, int decimals);

/// Reads observations from a CSV file: optional header row, values taken
/// from the first column. Throws std::runtime_error on unreadable input.
Dataset read_observations_csv(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace sabc
