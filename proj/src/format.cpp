#include "gmmrec/format.hpp"

#include <charconv>
#include <cstdio>
#include <string>

#include "gmmrec/errors.hpp"

namespace gmmrec {

std::string format_g17(double v) {
    char buf[40];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view raw, const char* what) {
    const std::string_view s = trim(raw);
    T value{};
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw DomainError(std::string("cannot parse '") + std::string(raw) + "' as " + what);
    return value;
}

}  // namespace

double parse_double(std::string_view s) {
    return parse_number<double>(s, "a real number");
}

std::int64_t parse_int(std::string_view s) {
    return parse_number<std::int64_t>(s, "an integer");
}

std::uint64_t parse_uint(std::string_view s) {
    return parse_number<std::uint64_t>(s, "an unsigned integer");
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace gmmrec
