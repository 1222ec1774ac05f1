#include "eonpower/units.hpp"

#include <cmath>

namespace eonpower {

double dbm_to_watts(double dbm) noexcept { return 1e-3 * std::exp(dbm * (kLn10 / 10.0)); }

double watts_to_dbm(double watts) noexcept { return 10.0 * std::log10(watts / 1e-3); }

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

double linear_to_db(double ratio) noexcept { return 10.0 * std::log10(ratio); }

std::vector<double> dbm_to_watts(std::span<const double> dbm) {
    std::vector<double> out;
    out.reserve(dbm.size());
    for (double v : dbm) out.push_back(dbm_to_watts(v));
    return out;
}

std::vector<double> watts_to_dbm(std::span<const double> watts) {
    std::vector<double> out;
    out.reserve(watts.size());
    for (double v : watts) out.push_back(watts_to_dbm(v));
    return out;
}

double field_attenuation_per_km(double loss_db_per_km) noexcept {
    return loss_db_per_km * kLn10 / 20.0;
}

}  // namespace eonpower
