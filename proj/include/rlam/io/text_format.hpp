#pragma once

#include <string>

namespace rlam::io {

// Shortest round-trip decimal form via std::to_chars; bit-identical inputs
// give byte-identical text, which the reproducibility checks rely on.
std::string format_double(double value);

}  // namespace rlam::io
