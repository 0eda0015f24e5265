#pragma once

#include "adelmarket/price_series.hpp"
#include "adelmarket/waves.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace adm::io {

// Malformed input data (as opposed to usage errors); the CLI maps this to
// its data-error exit code. Messages carry the 1-based row number.
class CsvError : public std::runtime_error {
public:
    explicit CsvError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr const char* kPriceHeader = "timestamp,open,high,low,close,volume";

// "YYYY-MM-DD", optionally with "[T ]HH:MM:SS" and a trailing "Z", or a
// plain number of epoch seconds.
double parse_timestamp(std::string_view cell);

// Epoch seconds (midnight-aligned) back to "YYYY-MM-DD".
std::string format_date(double epoch_seconds);

// Strict loader for the fixed header above. Timestamps must strictly
// increase; the selected column must be finite and positive; volume cells
// may be empty unless volume is the selected column.
PriceSeries load_csv(const std::string& path, const std::string& column = "close");

std::string read_file(const std::string& path);

// Write-to-temp plus rename: the destination is never left half-written.
void atomic_write_file(const std::string& path, std::string_view content);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// FNV-1a over the raw bytes, as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

// "t,y" rows of a sampled wave.
std::string wave_csv(const waves::WaveCurve& curve);
void write_wave_csv(const std::string& path, const waves::WaveCurve& curve);

// "t,A,price" rows; attendance and price series must have equal length.
std::string attendance_csv(const PriceSeries& price, const std::vector<double>& attendance);
void write_attendance_csv(const std::string& path, const PriceSeries& price,
                          const std::vector<double>& attendance);

// "timestamp,value,is_forecast" rows: history flagged 0, forecast 1.
// Either series may be empty.
std::string forecast_csv(const PriceSeries& history, const PriceSeries& forecast);
void write_forecast_csv(const std::string& path, const PriceSeries& history,
                        const PriceSeries& forecast);

// Full price schema from a close series: open carries the previous close,
// high/low bracket them, volume stays empty. Timestamps must be
// midnight-aligned since they are written as dates.
std::string ohlc_csv(const PriceSeries& close);
void write_ohlc_csv(const std::string& path, const PriceSeries& close);

} // namespace adm::io
