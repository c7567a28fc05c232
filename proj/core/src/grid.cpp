#include "kdv/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kdv {

namespace {

// FFTW's planner is not thread-safe; execution of existing plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

SpectralGrid::SpectralGrid(std::size_t n) : n_(n), plan_fwd_(nullptr), plan_bwd_(nullptr) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    // FFTW_UNALIGNED lets the new-array interface accept caller buffers of any
    // alignment; FFTW_ESTIMATE keeps planning deterministic.
    plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_bwd_ = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("SpectralGrid: FFTW planning failed");
}

SpectralGrid::~SpectralGrid() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

std::shared_ptr<const SpectralGrid> SpectralGrid::create(std::size_t n) {
    if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("SpectralGrid: n must be even and >= 8");
    return std::shared_ptr<const SpectralGrid>(new SpectralGrid(n));
}

double SpectralGrid::point(std::size_t j) const {
    return 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n_);
}

void SpectralGrid::forward(const double* samples, std::complex<double>* out) const {
    std::vector<std::complex<double>> in(n_);
    for (std::size_t j = 0; j < n_; ++j) in[j] = samples[j];
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out));
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] *= scale;
}

double SpectralGrid::backward(const std::complex<double>* coeffs, double* samples_out) const {
    std::vector<std::complex<double>> in(coeffs, coeffs + n_);
    std::vector<std::complex<double>> out(n_);
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    double residue = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        samples_out[j] = out[j].real();
        residue = std::max(residue, std::abs(out[j].imag()));
    }
    return residue;
}

std::shared_ptr<const SpectralGrid> SpectralGrid::padded() const {
    std::call_once(padded_once_, [this] {
        std::size_t m = (3 * n_ + 1) / 2;
        if (m % 2 != 0) ++m;
        padded_ = create(m);
    });
    return padded_;
}

} // namespace kdv
