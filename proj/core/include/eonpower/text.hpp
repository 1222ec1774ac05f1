#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace eonpower {

/// Shortest round-trip decimal form of a double; locale independent.
/// Non-finite values print as "nan", "inf" or "-inf".
[[nodiscard]] std::string format_number(double value);
[[nodiscard]] std::string format_number(std::int64_t value);

/// Joins already formatted cells with commas, quoting cells that need it.
[[nodiscard]] std::string csv_row(const std::vector<std::string>& cells);

/// Parses "1..100", "3,5,9", "1..10,20" into an ascending, duplicate-free list.
/// Throws std::invalid_argument on malformed input.
[[nodiscard]] std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace eonpower
