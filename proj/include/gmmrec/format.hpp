#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gmmrec {

/// printf("%.17g"): 17 significant digits, enough for an exact double round-trip.
std::string format_g17(double v);

/// Strict parse of a whole string as a double / integer. Throws DomainError.
double parse_double(std::string_view s);
std::int64_t parse_int(std::string_view s);
std::uint64_t parse_uint(std::string_view s);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

std::string hex64(std::uint64_t v);

}  // namespace gmmrec
