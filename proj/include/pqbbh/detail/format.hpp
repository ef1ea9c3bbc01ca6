#ifndef PQBBH_DETAIL_FORMAT_HPP
#define PQBBH_DETAIL_FORMAT_HPP

#include <charconv>
#include <string>

namespace pqbbh::detail {

// Shortest decimal representation that round-trips to the same double;
// locale-independent, so output files diff byte-stable.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace pqbbh::detail

#endif
