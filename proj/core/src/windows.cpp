#include "dualwin/windows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dualwin/error.hpp"
#include "dualwin/fft.hpp"

namespace dualwin {

namespace {

constexpr double pi = std::numbers::pi;

// Chebyshev polynomial T_n(x), valid outside [-1, 1].
double chebyshev_poly(std::size_t n, double x) {
    const auto nd = static_cast<double>(n);
    if (std::abs(x) <= 1.0) return std::cos(nd * std::acos(x));
    const double v = std::cosh(nd * std::acosh(std::abs(x)));
    return (x < 0.0 && n % 2 == 1) ? -v : v;
}

std::vector<double> dolph_chebyshev(std::size_t length, double attenuation_db) {
    if (length == 1) return {1.0};
    const std::size_t order = length - 1;
    const auto nd = static_cast<double>(length);
    const double r = std::pow(10.0, attenuation_db / 20.0);
    const double beta = std::cosh(std::acosh(r) / static_cast<double>(order));

    // Frequency samples of the equiripple response; even lengths carry a
    // half-sample linear phase so the inverse DFT is real and symmetric.
    std::vector<cdouble> spectrum(length);
    for (std::size_t k = 0; k < length; ++k) {
        const double a = pi * static_cast<double>(k) / nd;
        const double p = chebyshev_poly(order, beta * std::cos(a));
        spectrum[k] = (length % 2 == 1) ? cdouble(p, 0.0) : p * std::polar(1.0, a);
    }

    std::vector<double> coeffs(length);
    for (std::size_t i = 0; i < length; ++i) {
        cdouble acc{};
        for (std::size_t k = 0; k < length; ++k)
            acc += spectrum[k] * std::polar(1.0, -2.0 * pi * static_cast<double>(i * k % length) / nd);
        coeffs[i] = acc.real();
    }

    std::vector<double> w(length);
    if (length % 2 == 1) {
        const std::size_t half = (length + 1) / 2;
        for (std::size_t i = 0; i < half; ++i) {
            w[half - 1 + i] = coeffs[i];
            w[half - 1 - i] = coeffs[i];
        }
    } else {
        const std::size_t half = length / 2 + 1;
        // w = [c[half-1], ..., c[1], c[1], ..., c[half-1]]
        std::size_t out = 0;
        for (std::size_t i = half - 1; i >= 1; --i) w[out++] = coeffs[i];
        for (std::size_t i = 1; i < half; ++i) w[out++] = coeffs[i];
    }
    const double peak = *std::max_element(w.begin(), w.end());
    for (auto& v : w) v /= peak;
    return w;
}

std::vector<double> power_spectrum_db(const WindowKind& kind, std::size_t length, std::size_t oversample) {
    const auto w = make_window(kind, length);
    const auto spec = padded_dft(w, length * oversample);
    std::vector<double> db(spec.size());
    const double peak = std::norm(spec[0]);
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double p = std::norm(spec[i]) / peak;
        db[i] = 10.0 * std::log10(std::max(p, 1e-300));
    }
    return db;
}

}  // namespace

std::string WindowKind::tag() const {
    switch (family) {
        case Family::rectangular: return "rectangular";
        case Family::hamming: return "hamming";
        case Family::dolph_chebyshev: {
            std::ostringstream os;
            os << "chebyshev" << attenuation_db;
            return os.str();
        }
    }
    return "unknown";
}

WindowKind WindowKind::parse(const std::string& text) {
    if (text == "rectangular" || text == "rect") return rectangular();
    if (text == "hamming") return hamming();
    for (const std::string prefix : {"chebyshev:", "chebyshev", "dolph_chebyshev("}) {
        if (text.rfind(prefix, 0) == 0) {
            std::string rest = text.substr(prefix.size());
            if (!rest.empty() && rest.back() == ')') rest.pop_back();
            try {
                std::size_t used = 0;
                const double db = std::stod(rest, &used);
                if (used == rest.size()) {
                    auto k = dolph_chebyshev(db);
                    k.validate();
                    return k;
                }
            } catch (const std::logic_error&) {
            }
        }
    }
    fail(ErrorCode::invalid_argument, "unknown window '" + text + "'");
}

void WindowKind::validate() const {
    if (family == Family::dolph_chebyshev && !(attenuation_db > 13.0))
        fail(ErrorCode::invalid_argument, "Dolph-Chebyshev attenuation must exceed 13 dB");
}

std::vector<double> make_window(const WindowKind& kind, std::size_t length) {
    kind.validate();
    if (length < 2) fail(ErrorCode::invalid_argument, "make_window: length must be >= 2");
    switch (kind.family) {
        case WindowKind::Family::rectangular: return std::vector<double>(length, 1.0);
        case WindowKind::Family::hamming: {
            std::vector<double> w(length);
            const auto denom = static_cast<double>(length - 1);
            for (std::size_t k = 0; k < length; ++k)
                w[k] = 0.54 - 0.46 * std::cos(2.0 * pi * static_cast<double>(k) / denom);
            const double peak = *std::max_element(w.begin(), w.end());
            for (auto& v : w) v /= peak;
            return w;
        }
        case WindowKind::Family::dolph_chebyshev: return dolph_chebyshev(length, kind.attenuation_db);
    }
    fail(ErrorCode::invalid_argument, "make_window: unknown family");
}

std::string WindowMatrix::tag() const {
    return kind_k == kind_l ? kind_k.tag() : kind_k.tag() + "x" + kind_l.tag();
}

WindowMatrix window_matrix(const WindowKind& kind_k, const WindowKind& kind_l, const OfdmConfig& config) {
    const auto wk = make_window(kind_k, config.n_subcarriers);
    const auto wl = make_window(kind_l, config.n_symbols);
    WindowMatrix wm{Matrix<double>(wk.size(), wl.size()), kind_k, kind_l};
    for (std::size_t k = 0; k < wk.size(); ++k) {
        auto row = wm.weights.row(k);
        for (std::size_t l = 0; l < wl.size(); ++l) row[l] = wk[k] * wl[l];
    }
    return wm;
}

WindowProfile profile_window(const WindowKind& kind, std::size_t length, std::size_t oversample) {
    if (oversample < 4) fail(ErrorCode::invalid_argument, "profile_window: oversample must be >= 4");
    const auto db = power_spectrum_db(kind, length, oversample);
    const std::size_t half = db.size() / 2;

    std::size_t edge = 1;
    while (edge < half && !(db[edge] <= db[edge - 1] && db[edge] <= db[edge + 1] && db[edge] < -20.0)) ++edge;

    WindowProfile prof;
    prof.mainlobe_halfwidth_bins = edge;

    double highest = -std::numeric_limits<double>::infinity();
    std::vector<double> peaks;
    for (std::size_t i = edge + 1; i < half; ++i) {
        highest = std::max(highest, db[i]);
        if (db[i] > db[i - 1] && db[i] >= db[i + 1]) peaks.push_back(db[i]);
    }
    prof.psl_db = -highest;
    prof.sidelobe_count = peaks.size();
    if (!peaks.empty()) {
        double mean = 0.0;
        for (double p : peaks) mean += p;
        mean /= static_cast<double>(peaks.size());
        double var = 0.0;
        for (double p : peaks) var += (p - mean) * (p - mean);
        prof.sidelobe_ripple_db = std::sqrt(var / static_cast<double>(peaks.size()));
    }
    return prof;
}

std::size_t mainlobe_extent_bins(const WindowKind& kind, std::size_t length, std::size_t oversample,
                                 double level_db) {
    const auto db = power_spectrum_db(kind, length, oversample);
    const std::size_t half = db.size() / 2;
    std::size_t i = 1;
    while (i < half && db[i] > -level_db && !(db[i] <= db[i - 1] && db[i] <= db[i + 1])) ++i;
    return i;
}

}  // namespace dualwin
