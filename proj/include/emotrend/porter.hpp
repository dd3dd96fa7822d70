#pragma once

#include <string>

namespace emotrend {

// Classic Porter stemmer (1980), matching the author's reference C version
// including its two marked step-2 departures ("bli"->"ble", "logi"->"log").
// Expects a lowercase token; words shorter than 3 letters and tokens with
// non-alphabetic characters are returned unchanged. Idempotent on its own
// output for practical vocabulary (verified property-style in tests).
std::string porter_stem(const std::string& token);

}  // namespace emotrend
