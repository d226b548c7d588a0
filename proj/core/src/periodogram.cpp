#include "dualwin/periodogram.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "dualwin/error.hpp"
#include "dualwin/fft.hpp"

namespace dualwin {

namespace {

RangeDopplerMap map_from(const ComplexFrame& frame, const Matrix<double>* weights, std::string tag,
                         const OfdmConfig& config) {
    auto engine = SpectrumEngine::lease(config);
    const auto x = engine->transform(frame.data, weights);
    RangeDopplerMap map{Matrix<double>(config.n_per, config.m_per), config, std::move(tag)};
    const double scale = 1.0 / static_cast<double>(config.n_subcarriers * config.n_symbols);
    auto out = map.power.flat();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(x[i]) * scale;
    return map;
}

}  // namespace

SearchRegion SearchRegion::up_to_range(const OfdmConfig& config, double max_range_m) {
    const double bins = max_range_m / config.range_bin_m();
    const auto n_max = static_cast<std::size_t>(std::ceil(std::max(bins, 0.0)));
    return {std::min(n_max, config.n_per - 1)};
}

RangeDopplerMap compute_map(const ComplexFrame& frame, const WindowMatrix& window, const OfdmConfig& config) {
    return map_from(frame, &window.weights, window.tag(), config);
}

RangeDopplerMap compute_map(const ComplexFrame& frame, const OfdmConfig& config) {
    return map_from(frame, nullptr, "rectangular", config);
}

PhysicalPoint bin_to_physical(std::size_t n, std::size_t m, const OfdmConfig& config) {
    const auto half = config.m_per / 2;
    const double signed_m = m < half ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(config.m_per);
    return {static_cast<double>(n) * config.range_bin_m(), signed_m * config.velocity_bin_mps()};
}

PeakEstimate find_peak(const Matrix<double>& power, const SearchRegion& region, const OfdmConfig& config) {
    if (power.empty() || region.n_max >= power.rows())
        fail(ErrorCode::invalid_argument, "find_peak: search region outside the map");
    std::size_t best_n = 0, best_m = 0;
    double best = power(0, 0);
    for (std::size_t n = 0; n <= region.n_max; ++n) {
        auto row = power.row(n);
        for (std::size_t m = 0; m < row.size(); ++m) {
            // Strict comparison keeps the first (smallest n, then m) maximum.
            if (row[m] > best) {
                best = row[m];
                best_n = n;
                best_m = m;
            }
        }
    }
    const auto p = bin_to_physical(best_n, best_m, config);
    return {best_n, best_m, best, p.range_m, p.velocity_mps};
}

PeakEstimate find_peak(const RangeDopplerMap& map, const SearchRegion& region) {
    return find_peak(map.power, region, map.config);
}

void write_map(std::ostream& os, const RangeDopplerMap& map) {
    std::ostringstream hdr;
    hdr.imbue(std::locale::classic());
    hdr.precision(17);
    hdr << "# dualwin-map v1\n"
        << "# n_per " << map.power.rows() << " m_per " << map.power.cols() << '\n'
        << "# range_bin_m " << map.config.range_bin_m() << " velocity_bin_mps " << map.config.velocity_bin_mps()
        << " window " << (map.window_tag.empty() ? "unknown" : map.window_tag) << '\n';
    os << hdr.str();
    std::ostringstream line;
    line.imbue(std::locale::classic());
    line.precision(10);
    for (std::size_t n = 0; n < map.power.rows(); ++n) {
        line.str({});
        auto row = map.power.row(n);
        for (std::size_t m = 0; m < row.size(); ++m) {
            if (m) line << ' ';
            line << row[m];
        }
        line << '\n';
        os << line.str();
    }
    if (!os) fail(ErrorCode::io_failure, "write_map: stream error");
}

RangeDopplerMap read_map(std::istream& is, const OfdmConfig& config) {
    is.imbue(std::locale::classic());
    std::string line, tok;
    std::size_t rows = 0, cols = 0;
    std::string tag;
    if (!std::getline(is, line) || line != "# dualwin-map v1") fail(ErrorCode::io_failure, "read_map: bad magic");
    if (!std::getline(is, line)) fail(ErrorCode::io_failure, "read_map: truncated header");
    {
        std::istringstream ls(line);
        std::string hash, k1, k2;
        ls >> hash >> k1 >> rows >> k2 >> cols;
        if (!ls || k1 != "n_per" || k2 != "m_per") fail(ErrorCode::io_failure, "read_map: bad dimensions line");
    }
    if (!std::getline(is, line)) fail(ErrorCode::io_failure, "read_map: truncated header");
    {
        std::istringstream ls(line);
        std::string hash, k1, k2, k3;
        double dr = 0, dv = 0;
        ls >> hash >> k1 >> dr >> k2 >> dv >> k3 >> tag;
        if (!ls || k3 != "window") fail(ErrorCode::io_failure, "read_map: bad scale line");
    }
    RangeDopplerMap map{Matrix<double>(rows, cols), config, tag};
    for (auto& v : map.power.flat()) {
        if (!(is >> v)) fail(ErrorCode::io_failure, "read_map: truncated grid");
    }
    return map;
}

}  // namespace dualwin
