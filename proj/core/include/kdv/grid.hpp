#ifndef KDV_GRID_HPP
#define KDV_GRID_HPP

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

namespace kdv {

/**
 * Uniform collocation grid on the 2*pi-periodic torus with cached FFT plans.
 *
 * Grid points are x_j = 2*pi*j/N for j = 0..N-1 with N even.  Fourier
 * coefficients are stored in FFT-natural bin order: bin k holds wavenumber
 * l = k for k < N/2 and l = k - N for k >= N/2, so the represented band is
 * {-N/2, ..., N/2-1}.  The forward transform carries the 1/N scaling,
 * coeff[bin(l)] = (1/N) * sum_j samples[j] * exp(-i*l*x_j), so bin 0 holds
 * the mean of the samples; the inverse transform is the plain unscaled sum.
 *
 * The bin l = -N/2 (the Nyquist bin) has no conjugate partner.  Transforms
 * preserve it with full fidelity (round trips are exact to rounding), but the
 * modewise operators in this library annihilate it: a real odd derivative or
 * a semigroup phase on an unpaired bin would break conjugate symmetry.  The
 * active band for operators is |l| <= N/2 - 1.
 *
 * Plans are created once per grid under a global planner lock and executed
 * through the FFTW new-array interface, so concurrent transforms on the same
 * grid from different threads are safe.
 */
class SpectralGrid {
  public:
    /** Creates a grid with n points; n must be even and >= 8. */
    static std::shared_ptr<const SpectralGrid> create(std::size_t n);
    ~SpectralGrid();

    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    std::size_t size() const { return n_; }

    /** Collocation point x_j = 2*pi*j/n. */
    double point(std::size_t j) const;

    /** Wavenumber held by a coefficient bin. */
    int wavenumber(std::size_t bin) const {
        return bin < n_ / 2 ? static_cast<int>(bin)
                            : static_cast<int>(bin) - static_cast<int>(n_);
    }

    /** Bin holding wavenumber l (valid for -n/2 <= l <= n/2-1). */
    std::size_t bin(int l) const {
        return l >= 0 ? static_cast<std::size_t>(l)
                      : static_cast<std::size_t>(l + static_cast<int>(n_));
    }

    std::size_t nyquist_bin() const { return n_ / 2; }
    int max_active_mode() const { return static_cast<int>(n_) / 2 - 1; }

    /** Scaled forward DFT of real samples; out has n complex bins. */
    void forward(const double* samples, std::complex<double>* out) const;

    /**
     * Unscaled inverse DFT.  Real parts land in samples_out; the largest
     * imaginary magnitude encountered is returned so callers can track the
     * reality residue that was discarded.
     */
    double backward(const std::complex<double>* coeffs, double* samples_out) const;

    /** Grid with ceil(3n/2) points (rounded up to even) for dealiased products. */
    std::shared_ptr<const SpectralGrid> padded() const;

  private:
    explicit SpectralGrid(std::size_t n);

    std::size_t n_;
    void* plan_fwd_;
    void* plan_bwd_;
    mutable std::shared_ptr<const SpectralGrid> padded_;
    mutable std::once_flag padded_once_;
};

} // namespace kdv

#endif
