#include "ucnwave/fourier.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <string>

#include "ucnwave/errors.hpp"

namespace ucn {

namespace {

std::mutex planner_mutex;  // the FFTW planner is not thread-safe

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_length(std::size_t n) {
    if (!is_power_of_two(n) || n < 8)
        throw validation_error("fourier: length must be a power of two >= 8, got " +
                               std::to_string(n));
}

}  // namespace

FftEngine::FftEngine(std::size_t n) : n_(n) {
    check_length(n);
    buf_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n));
    if (!buf_) throw std::bad_alloc();
    auto* raw = reinterpret_cast<fftw_complex*>(buf_);
    std::lock_guard<std::mutex> lock(planner_mutex);
    // FFTW_ESTIMATE picks the plan from fixed heuristics, so identical inputs
    // give bit-identical outputs run to run.
    plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
}

FftEngine::~FftEngine() {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(buf_);
}

void FftEngine::forward_inplace() { fftw_execute(static_cast<fftw_plan>(plan_fwd_)); }

void FftEngine::backward_raw_inplace() { fftw_execute(static_cast<fftw_plan>(plan_bwd_)); }

void FftEngine::inverse_inplace() {
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    const double inv = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) buf_[j] *= inv;
}

void FftEngine::forward(std::span<const std::complex<double>> in,
                        std::span<std::complex<double>> out) {
    if (in.size() != n_ || out.size() != n_)
        throw validation_error("fourier: field length does not match engine size");
    std::memcpy(buf_, in.data(), n_ * sizeof(std::complex<double>));
    forward_inplace();
    std::memcpy(out.data(), buf_, n_ * sizeof(std::complex<double>));
}

void FftEngine::inverse(std::span<const std::complex<double>> in,
                        std::span<std::complex<double>> out) {
    if (in.size() != n_ || out.size() != n_)
        throw validation_error("fourier: field length does not match engine size");
    std::memcpy(buf_, in.data(), n_ * sizeof(std::complex<double>));
    inverse_inplace();
    std::memcpy(out.data(), buf_, n_ * sizeof(std::complex<double>));
}

namespace {

FftEngine& cached_engine(std::size_t n) {
    static std::mutex cache_mutex;
    static std::map<std::size_t, std::unique_ptr<FftEngine>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<FftEngine>(n);
    return *slot;
}

// The cached engines are shared, so the functional API serializes on them.
std::mutex transform_mutex;

}  // namespace

std::vector<std::complex<double>> forward_transform(std::span<const std::complex<double>> field) {
    check_length(field.size());
    std::vector<std::complex<double>> out(field.size());
    std::lock_guard<std::mutex> lock(transform_mutex);
    cached_engine(field.size()).forward(field, out);
    return out;
}

std::vector<std::complex<double>> inverse_transform(std::span<const std::complex<double>> field) {
    check_length(field.size());
    std::vector<std::complex<double>> out(field.size());
    std::lock_guard<std::mutex> lock(transform_mutex);
    cached_engine(field.size()).inverse(field, out);
    return out;
}

}  // namespace ucn
