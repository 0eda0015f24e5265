#include "adelmarket/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace adm::io {

namespace {

constexpr double kSecondsPerDay = 86400.0;

// Proleptic Gregorian day count with day 0 = 1970-01-01.
long long days_from_civil(long long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

void civil_from_days(long long z, long long& y, unsigned& m, unsigned& d) {
    z += 719468;
    const long long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long long yr = static_cast<long long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = yr + (m <= 2);
}

bool parse_uint_field(std::string_view s, unsigned& out) {
    if (s.empty()) return false;
    unsigned value = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') return false;
        value = value * 10 + static_cast<unsigned>(ch - '0');
    }
    out = value;
    return true;
}

bool parse_full_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

} // namespace

double parse_timestamp(std::string_view cell) {
    cell = trim(cell);
    double numeric = 0.0;
    if (parse_full_double(cell, numeric)) {
        if (!std::isfinite(numeric)) throw CsvError("non-finite timestamp");
        return numeric;
    }

    // YYYY-MM-DD with an optional time-of-day tail
    if (cell.size() < 10 || cell[4] != '-' || cell[7] != '-') {
        throw CsvError("timestamp is neither a number nor ISO-8601: '" + std::string(cell) + "'");
    }
    unsigned year = 0, month = 0, day = 0;
    if (!parse_uint_field(cell.substr(0, 4), year) || !parse_uint_field(cell.substr(5, 2), month) ||
        !parse_uint_field(cell.substr(8, 2), day)) {
        throw CsvError("bad date in timestamp: '" + std::string(cell) + "'");
    }
    if (month < 1 || month > 12 || day < 1 || day > 31) {
        throw CsvError("date out of range: '" + std::string(cell) + "'");
    }
    const long long days = days_from_civil(year, month, day);
    {
        long long ry;
        unsigned rm, rd;
        civil_from_days(days, ry, rm, rd);
        if (ry != static_cast<long long>(year) || rm != month || rd != day) {
            throw CsvError("no such calendar day: '" + std::string(cell) + "'");
        }
    }

    double seconds = 0.0;
    std::string_view tail = cell.substr(10);
    if (!tail.empty()) {
        if (tail.front() != 'T' && tail.front() != ' ') {
            throw CsvError("bad time separator in '" + std::string(cell) + "'");
        }
        tail.remove_prefix(1);
        if (!tail.empty() && tail.back() == 'Z') tail.remove_suffix(1);
        unsigned hh = 0, mm = 0, ss = 0;
        if (tail.size() != 8 || tail[2] != ':' || tail[5] != ':' ||
            !parse_uint_field(tail.substr(0, 2), hh) || !parse_uint_field(tail.substr(3, 2), mm) ||
            !parse_uint_field(tail.substr(6, 2), ss) || hh > 23 || mm > 59 || ss > 60) {
            throw CsvError("bad time of day in '" + std::string(cell) + "'");
        }
        seconds = 3600.0 * hh + 60.0 * mm + ss;
    }
    return static_cast<double>(days) * kSecondsPerDay + seconds;
}

std::string format_date(double epoch_seconds) {
    const double days_real = epoch_seconds / kSecondsPerDay;
    const double rounded = std::round(days_real);
    if (std::fabs(days_real - rounded) > 1e-9) {
        throw std::domain_error("timestamp is not midnight-aligned");
    }
    long long y;
    unsigned m, d;
    civil_from_days(static_cast<long long>(rounded), y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u", y, m, d);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw std::runtime_error("read failed on " + path);
    return buffer.str();
}

void atomic_write_file(const std::string& path, std::string_view content) {
    const std::string temp = path + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + temp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed on " + temp);
    }
    std::error_code ec;
    std::filesystem::rename(temp, path, ec);
    if (ec) {
        std::filesystem::remove(temp);
        throw std::runtime_error("cannot move " + temp + " into place: " + ec.message());
    }
}

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

PriceSeries load_csv(const std::string& path, const std::string& column) {
    static const std::vector<std::string> kColumns = {"timestamp", "open", "high",
                                                      "low",       "close", "volume"};
    const auto col_it = std::find(kColumns.begin(), kColumns.end(), column);
    if (col_it == kColumns.end() || column == "timestamp") {
        throw CsvError("unknown column '" + column + "'");
    }
    const std::size_t col_idx = static_cast<std::size_t>(col_it - kColumns.begin());

    const std::string content = read_file(path);
    PriceSeries series;
    series.label = column;

    std::size_t line_start = 0;
    std::size_t row = 0; // 1-based, including the header
    while (line_start <= content.size()) {
        std::size_t line_end = content.find('\n', line_start);
        if (line_end == std::string::npos) line_end = content.size();
        std::string_view line(content.data() + line_start, line_end - line_start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        line_start = line_end + 1;
        if (line.empty()) {
            if (line_start > content.size()) break;
            continue;
        }
        ++row;

        if (row == 1) {
            if (line != kPriceHeader) {
                throw CsvError("row 1: header must be '" + std::string(kPriceHeader) + "', got '" +
                               std::string(line) + "'");
            }
            continue;
        }

        const std::vector<std::string_view> fields = split_fields(line);
        if (fields.size() != kColumns.size()) {
            throw CsvError("row " + std::to_string(row) + ": expected " +
                           std::to_string(kColumns.size()) + " fields, got " +
                           std::to_string(fields.size()));
        }

        double ts;
        try {
            ts = parse_timestamp(fields[0]);
        } catch (const CsvError& e) {
            throw CsvError("row " + std::to_string(row) + ": " + e.what());
        }
        if (!series.timestamps.empty() && ts <= series.timestamps.back()) {
            throw CsvError("row " + std::to_string(row) +
                           ": timestamps must strictly increase (got " +
                           std::string(trim(fields[0])) + ")");
        }

        const std::string_view cell = trim(fields[col_idx]);
        double value = 0.0;
        if (!parse_full_double(cell, value)) {
            throw CsvError("row " + std::to_string(row) + ": non-numeric " + column + " value '" +
                           std::string(cell) + "'");
        }
        if (!std::isfinite(value) || value <= 0.0) {
            throw CsvError("row " + std::to_string(row) + ": " + column +
                           " must be finite and positive");
        }

        series.timestamps.push_back(ts);
        series.values.push_back(value);
    }

    if (series.size() < 2) throw CsvError("need at least 2 data rows, got " +
                                          std::to_string(series.size()));
    return series;
}

std::string wave_csv(const waves::WaveCurve& curve) {
    std::string out = "t,y\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        out += format_double(curve.t[i]);
        out += ',';
        out += format_double(curve.y[i]);
        out += '\n';
    }
    return out;
}

void write_wave_csv(const std::string& path, const waves::WaveCurve& curve) {
    atomic_write_file(path, wave_csv(curve));
}

std::string attendance_csv(const PriceSeries& price, const std::vector<double>& attendance) {
    if (price.size() != attendance.size()) {
        throw std::domain_error("attendance/price length mismatch");
    }
    std::string out = "t,A,price\n";
    for (std::size_t i = 0; i < attendance.size(); ++i) {
        out += format_double(price.timestamps[i]);
        out += ',';
        out += format_double(attendance[i]);
        out += ',';
        out += format_double(price.values[i]);
        out += '\n';
    }
    return out;
}

void write_attendance_csv(const std::string& path, const PriceSeries& price,
                          const std::vector<double>& attendance) {
    atomic_write_file(path, attendance_csv(price, attendance));
}

std::string forecast_csv(const PriceSeries& history, const PriceSeries& forecast) {
    std::string out = "timestamp,value,is_forecast\n";
    auto append = [&out](const PriceSeries& s, const char* flag) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            out += format_double(s.timestamps[i]);
            out += ',';
            out += format_double(s.values[i]);
            out += ',';
            out += flag;
            out += '\n';
        }
    };
    append(history, "0");
    append(forecast, "1");
    return out;
}

void write_forecast_csv(const std::string& path, const PriceSeries& history,
                        const PriceSeries& forecast) {
    atomic_write_file(path, forecast_csv(history, forecast));
}

std::string ohlc_csv(const PriceSeries& close) {
    close.validate();
    std::string out = std::string(kPriceHeader) + "\n";
    for (std::size_t i = 0; i < close.size(); ++i) {
        const double open = i == 0 ? close.values[0] : close.values[i - 1];
        const double c = close.values[i];
        out += format_date(close.timestamps[i]);
        out += ',';
        out += format_double(open);
        out += ',';
        out += format_double(std::max(open, c));
        out += ',';
        out += format_double(std::min(open, c));
        out += ',';
        out += format_double(c);
        out += ",\n"; // volume intentionally empty
    }
    return out;
}

void write_ohlc_csv(const std::string& path, const PriceSeries& close) {
    atomic_write_file(path, ohlc_csv(close));
}

} // namespace adm::io
