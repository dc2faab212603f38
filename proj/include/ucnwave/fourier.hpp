#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ucn {

// DFT convention (fixed project-wide, nothing outside this header depends on
// the normalization directly):
//   forward:  F_m = sum_j f_j exp(-2*pi*i*j*m/n)      (plain unnormalized DFT)
//   inverse:  f_j = (1/n) sum_m F_m exp(+2*pi*i*j*m/n)
// so inverse(forward(f)) == f to round-off, and
//   sum_j |f_j|^2 = (1/n) sum_m |F_m|^2   (Parseval).

/// One FFT size: owns an aligned in-place work buffer and the two plans.
/// Plan creation is serialized internally (the planner is not thread-safe);
/// execution is. One engine per thread for concurrent use.
class FftEngine {
public:
    explicit FftEngine(std::size_t n);
    ~FftEngine();

    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    std::size_t size() const { return n_; }
    std::complex<double>* data() { return buf_; }

    void forward_inplace();
    void inverse_inplace();       // includes the 1/n
    void backward_raw_inplace();  // no 1/n; caller folds it elsewhere

    void forward(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out);
    void inverse(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out);

private:
    std::size_t n_;
    std::complex<double>* buf_;
    void* plan_fwd_;
    void* plan_bwd_;
};

/// Functional API over a per-size engine cache. Throws validation_error if the
/// length is not a power of two >= 8.
std::vector<std::complex<double>> forward_transform(std::span<const std::complex<double>> field);
std::vector<std::complex<double>> inverse_transform(std::span<const std::complex<double>> field);

}  // namespace ucn
