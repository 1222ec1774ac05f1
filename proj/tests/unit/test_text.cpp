#include "eonpower/text.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace eonpower {
namespace {

TEST(FormatNumber, RoundTripsRandomDoubles) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> exponent(-300.0, 300.0);
    for (int i = 0; i < 10000; ++i) {
        const double v = std::pow(10.0, exponent(rng)) * (i % 2 ? -1.0 : 1.0);
        EXPECT_EQ(std::stod(format_number(v)), v);
    }
}

TEST(FormatNumber, NonFiniteAndIntegers) {
    EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(format_number(std::int64_t{-42}), "-42");
    EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(CsvRow, QuotesOnlyWhenNeeded) {
    EXPECT_EQ(csv_row({"a", "b,c", "say \"hi\""}), "a,\"b,c\",\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_row({}), "");
}

TEST(SeedList, RangesListsAndDuplicates) {
    EXPECT_EQ(parse_seed_list("1..3"), (std::vector<std::uint64_t>{1, 2, 3}));
    EXPECT_EQ(parse_seed_list("9,3,5,3"), (std::vector<std::uint64_t>{3, 5, 9}));
    EXPECT_EQ(parse_seed_list("1..2, 10"), (std::vector<std::uint64_t>{1, 2, 10}));
    EXPECT_EQ(parse_seed_list("1..100").size(), 100u);
}

TEST(SeedList, RejectsMalformedInput) {
    EXPECT_THROW((void)parse_seed_list("5..1"), std::invalid_argument);
    EXPECT_THROW((void)parse_seed_list("abc"), std::invalid_argument);
    EXPECT_THROW((void)parse_seed_list("1..x"), std::invalid_argument);
    EXPECT_THROW((void)parse_seed_list("-3"), std::invalid_argument);
}

}  // namespace
}  // namespace eonpower
