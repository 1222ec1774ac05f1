#pragma once

#include <span>
#include <vector>

namespace eonpower {

/// Physical constants and unit conversions shared by every module.
/// Launch powers travel through the public API in dBm; the physics works in watts.

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLn10 = 2.30258509299404568402;

[[nodiscard]] double dbm_to_watts(double dbm) noexcept;
[[nodiscard]] double watts_to_dbm(double watts) noexcept;

/// Power ratio in dB to linear.
[[nodiscard]] double db_to_linear(double db) noexcept;
[[nodiscard]] double linear_to_db(double ratio) noexcept;

[[nodiscard]] std::vector<double> dbm_to_watts(std::span<const double> dbm);
[[nodiscard]] std::vector<double> watts_to_dbm(std::span<const double> watts);

/// Field attenuation in 1/km from a loss figure in dB/km.
[[nodiscard]] double field_attenuation_per_km(double loss_db_per_km) noexcept;

}  // namespace eonpower
