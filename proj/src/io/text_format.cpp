#include "rlam/io/text_format.hpp"

#include <charconv>
#include <stdexcept>

namespace rlam::io {

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw std::runtime_error("double formatting failed");
    return std::string(buf, ptr);
}

}  // namespace rlam::io
