#include "dualwin/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "dualwin/error.hpp"

namespace dualwin {

namespace {

// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(cdouble* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

std::vector<cdouble> padded_dft(std::span<const double> x, std::size_t nfft) {
    if (x.size() > nfft) fail(ErrorCode::invalid_argument, "padded_dft: input longer than nfft");
    std::vector<cdouble> buf(nfft);
    std::copy(x.begin(), x.end(), buf.begin());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(nfft), as_fftw(buf.data()), as_fftw(buf.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return buf;
}

struct SpectrumEngine::Plans {
    fftw_plan rows = nullptr;
    fftw_plan cols = nullptr;
};

SpectrumEngine::SpectrumEngine(const OfdmConfig& config)
    : n_(config.n_subcarriers), m_(config.n_symbols), n_per_(config.n_per), m_per_(config.m_per),
      plans_(std::make_unique<Plans>()) {
    config.validate();
    std::lock_guard lock(planner_mutex());
    buffer_ = reinterpret_cast<cdouble*>(fftw_malloc(sizeof(cdouble) * n_per_ * m_per_));
    if (!buffer_) fail(ErrorCode::internal_invariant, "SpectrumEngine: allocation failed");

    // Rows 0..N-1, forward transform of length M_Per each.
    const int row_len = static_cast<int>(m_per_);
    plans_->rows = fftw_plan_many_dft(1, &row_len, static_cast<int>(n_), as_fftw(buffer_), nullptr, 1, row_len,
                                      as_fftw(buffer_), nullptr, 1, row_len, FFTW_FORWARD, FFTW_MEASURE);
    // Every column, backward (e^{+j}) transform of length N_Per, stride M_Per.
    const int col_len = static_cast<int>(n_per_);
    plans_->cols = fftw_plan_many_dft(1, &col_len, row_len, as_fftw(buffer_), nullptr, row_len, 1,
                                      as_fftw(buffer_), nullptr, row_len, 1, FFTW_BACKWARD, FFTW_MEASURE);
    if (!plans_->rows || !plans_->cols) fail(ErrorCode::internal_invariant, "SpectrumEngine: FFTW planning failed");
}

SpectrumEngine::~SpectrumEngine() {
    std::lock_guard lock(planner_mutex());
    if (plans_) {
        if (plans_->rows) fftw_destroy_plan(plans_->rows);
        if (plans_->cols) fftw_destroy_plan(plans_->cols);
    }
    fftw_free(buffer_);
}

std::span<const cdouble> SpectrumEngine::transform(const Matrix<cdouble>& frame, const Matrix<double>* weights) {
    if (frame.rows() != n_ || frame.cols() != m_)
        fail(ErrorCode::invalid_argument, "SpectrumEngine: frame dimensions do not match config");
    if (weights && (weights->rows() != n_ || weights->cols() != m_))
        fail(ErrorCode::invalid_argument, "SpectrumEngine: window dimensions do not match config");

    for (std::size_t k = 0; k < n_; ++k) {
        cdouble* dst = buffer_ + k * m_per_;
        auto src = frame.row(k);
        if (weights) {
            auto w = weights->row(k);
            for (std::size_t l = 0; l < m_; ++l) dst[l] = src[l] * w[l];
        } else {
            std::copy(src.begin(), src.end(), dst);
        }
        std::fill(dst + m_, dst + m_per_, cdouble{});
    }
    std::fill(buffer_ + n_ * m_per_, buffer_ + n_per_ * m_per_, cdouble{});

    fftw_execute(plans_->rows);
    fftw_execute(plans_->cols);
    return {buffer_, n_per_ * m_per_};
}

namespace {

using EngineKey = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;

struct EnginePool {
    std::mutex mutex;
    std::map<EngineKey, std::vector<std::unique_ptr<SpectrumEngine>>> idle;
    std::map<SpectrumEngine*, EngineKey> owned;
};

// Leaked on purpose: engines may be returned during static destruction.
EnginePool& pool() {
    static auto* p = new EnginePool;
    return *p;
}

}  // namespace

SpectrumEngine::Lease SpectrumEngine::lease(const OfdmConfig& config) {
    const EngineKey key{config.n_subcarriers, config.n_symbols, config.n_per, config.m_per};
    auto& p = pool();
    {
        std::lock_guard lock(p.mutex);
        auto& free_list = p.idle[key];
        if (!free_list.empty()) {
            auto* e = free_list.back().release();
            free_list.pop_back();
            return Lease(e);
        }
    }
    auto* e = new SpectrumEngine(config);
    {
        std::lock_guard lock(p.mutex);
        p.owned.emplace(e, key);
    }
    return Lease(e);
}

SpectrumEngine::Lease::~Lease() {
    if (!engine_) return;
    auto& p = pool();
    std::lock_guard lock(p.mutex);
    p.idle[p.owned.at(engine_)].emplace_back(engine_);
}

}  // namespace dualwin
