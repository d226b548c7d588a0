#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "dualwin/matrix.hpp"
#include "dualwin/ofdm_config.hpp"

namespace dualwin {

/// Forward DFT of x zero-padded to nfft points (e^{-j 2 pi i k / nfft}).
std::vector<cdouble> padded_dft(std::span<const double> x, std::size_t nfft);

/// Zero-padded 2D transform of an N x M frame into the N_Per x M_Per grid:
///   X(n, m) = sum_k sum_l G(k, l) w(k, l) e^{-j 2 pi l m / M_Per} e^{+j 2 pi k n / N_Per}
/// Forward FFT along each of the N subcarrier rows, then an inverse-direction
/// (unnormalized) FFT along each of the M_Per columns. Plans and the work
/// buffer are owned by the engine, so one engine must not be shared across
/// threads; lease() hands out pooled engines to concurrent callers.
class SpectrumEngine {
public:
    explicit SpectrumEngine(const OfdmConfig& config);
    ~SpectrumEngine();
    SpectrumEngine(const SpectrumEngine&) = delete;
    SpectrumEngine& operator=(const SpectrumEngine&) = delete;

    /// weights may be null (rectangular). Returns a view of the internal
    /// N_Per x M_Per row-major buffer, valid until the next call.
    std::span<const cdouble> transform(const Matrix<cdouble>& frame, const Matrix<double>* weights);

    std::size_t n_per() const noexcept { return n_per_; }
    std::size_t m_per() const noexcept { return m_per_; }

    class Lease;
    /// Borrow an engine for the config's dimensions from a process-wide pool.
    static Lease lease(const OfdmConfig& config);

private:
    struct Plans;
    std::size_t n_, m_, n_per_, m_per_;
    cdouble* buffer_ = nullptr;
    std::unique_ptr<Plans> plans_;
};

class SpectrumEngine::Lease {
public:
    Lease(Lease&& other) noexcept : engine_(std::exchange(other.engine_, nullptr)) {}
    Lease& operator=(Lease&&) = delete;
    ~Lease();

    SpectrumEngine& operator*() const noexcept { return *engine_; }
    SpectrumEngine* operator->() const noexcept { return engine_; }

private:
    friend class SpectrumEngine;
    explicit Lease(SpectrumEngine* e) : engine_(e) {}
    SpectrumEngine* engine_;
};

}  // namespace dualwin
