#pragma once

#include <numbers>

namespace opshare {

// All conversions between logarithmic and linear quantities go through here;
// everything else in the library works in linear watts and natural-log rates.

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

enum class RateUnit { nats, bits };

/// Converts a rate expressed in nats (natural log) to the requested unit.
constexpr double convert_rate(double nats, RateUnit unit) {
  return unit == RateUnit::bits ? nats / std::numbers::ln2 : nats;
}

const char* to_string(RateUnit unit);
RateUnit parse_rate_unit(const char* text);

}  // namespace opshare
