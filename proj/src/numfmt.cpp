#include "fitsd/numfmt.hpp"

#include "fitsd/engine.hpp"

#include <charconv>
#include <cmath>

namespace fitsd {

std::string format_number(double v)
{
    if (v == 0)
        v = 0;  // drop the sign of negative zero
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_number(const std::string& text, const std::string& what)
{
    double v = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+')
        ++first;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || text.empty())
        throw InputError(what + ": '" + text + "' is not a number");
    if (!std::isfinite(v))
        throw InputError(what + ": value must be finite");
    return v;
}

}  // namespace fitsd
