#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace adm {

// Uniform carrier for market data: parallel timestamp/value arrays.
// Timestamps are epoch seconds. validate() enforces the market-input
// contract; synthetic outputs (forecasts) may skip it since extrapolated
// values can leave the positive range.
struct PriceSeries {
    std::vector<double> timestamps;
    std::vector<double> values;
    std::string label = "close";

    std::size_t size() const { return values.size(); }

    void validate() const {
        if (timestamps.size() != values.size()) {
            throw std::domain_error("timestamp/value length mismatch");
        }
        if (values.size() < 2) throw std::domain_error("series needs at least 2 points");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(timestamps[i]) || !std::isfinite(values[i]) || values[i] <= 0.0) {
                throw std::domain_error("non-finite or non-positive entry at index " + std::to_string(i));
            }
            if (i > 0 && timestamps[i] <= timestamps[i - 1]) {
                throw std::domain_error("timestamps not strictly increasing at index " + std::to_string(i));
            }
        }
    }
};

} // namespace adm
