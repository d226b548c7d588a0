#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>

#include "dualwin/error.hpp"
#include "dualwin/sweep.hpp"

namespace dualwin {

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

double parse_double(const std::string& s) {
    if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    std::istringstream is(s);
    is.imbue(std::locale::classic());
    double v = 0.0;
    is >> v;
    if (is.fail() || !(is >> std::ws).eof()) fail(ErrorCode::io_failure, "csv: bad number '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<SweepRecord>& records, const std::vector<DetectorTag>& strategies) {
    os << "snr_db";
    for (auto t : strategies) os << ",detprob_" << to_string(t) << ",runtime_" << to_string(t);
    os << ",fallback_rate,trials\n";
    for (const auto& r : records) {
        os << format_double(r.snr_db);
        for (auto t : strategies) {
            auto it = r.strategies.find(t);
            if (it == r.strategies.end()) fail(ErrorCode::invalid_argument, "csv: record lacks strategy " + to_string(t));
            os << ',' << format_double(it->second.detection_probability) << ','
               << format_double(it->second.normalized_runtime);
        }
        os << ',' << format_double(r.fallback_rate) << ',' << r.trials << '\n';
    }
}

void emit_csv(const std::vector<SweepRecord>& records, const std::vector<DetectorTag>& strategies,
              const std::string& path) {
    std::ofstream f(path);
    if (!f) fail(ErrorCode::io_failure, "cannot open '" + path + "' for writing");
    write_csv(f, records, strategies);
    f.flush();
    if (!f) fail(ErrorCode::io_failure, "write to '" + path + "' failed");
}

std::vector<SweepRecord> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) fail(ErrorCode::io_failure, "csv: empty input");
    const auto header = split(line);
    if (header.size() < 3 || header.front() != "snr_db" || header[header.size() - 2] != "fallback_rate" ||
        header.back() != "trials" || (header.size() - 3) % 2 != 0)
        fail(ErrorCode::io_failure, "csv: unexpected header");
    std::vector<DetectorTag> tags;
    for (std::size_t i = 1; i + 2 < header.size(); i += 2) {
        const std::string& a = header[i];
        const std::string& b = header[i + 1];
        if (a.rfind("detprob_", 0) != 0 || b.rfind("runtime_", 0) != 0 || a.substr(8) != b.substr(8))
            fail(ErrorCode::io_failure, "csv: malformed strategy columns");
        tags.push_back(parse_detector_tag(a.substr(8)));
    }
    std::vector<SweepRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) fail(ErrorCode::io_failure, "csv: row width differs from header");
        SweepRecord r;
        r.snr_db = parse_double(cells[0]);
        for (std::size_t k = 0; k < tags.size(); ++k) {
            StrategySummary s;
            s.detection_probability = parse_double(cells[1 + 2 * k]);
            s.normalized_runtime = parse_double(cells[2 + 2 * k]);
            r.strategies[tags[k]] = s;
        }
        r.fallback_rate = parse_double(cells[cells.size() - 2]);
        const double trials = parse_double(cells.back());
        if (!(trials >= 0) || trials != std::floor(trials)) fail(ErrorCode::io_failure, "csv: bad trial count");
        r.trials = static_cast<std::size_t>(trials);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace dualwin
