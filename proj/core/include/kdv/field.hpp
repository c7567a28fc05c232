#ifndef KDV_FIELD_HPP
#define KDV_FIELD_HPP

#include "kdv/grid.hpp"

#include <complex>
#include <memory>
#include <mutex>
#include <vector>

namespace kdv {

/**
 * Immutable real-valued field on a SpectralGrid, carrying both its sample and
 * Fourier-coefficient views.  Whichever view a field was built from is
 * authoritative; the other is materialized on first access and cached.
 * Copies are cheap (shared representation) and thread-safe to read.
 *
 * Realizing samples from coefficients keeps the real part; the largest
 * discarded imaginary magnitude is recorded and available as imag_residue()
 * so reality violations are observable rather than silently hidden.
 */
class Field {
  public:
    Field() = default;

    static Field from_samples(std::shared_ptr<const SpectralGrid> grid,
                              std::vector<double> samples);
    static Field from_coeffs(std::shared_ptr<const SpectralGrid> grid,
                             std::vector<std::complex<double>> coeffs);

    bool valid() const { return rep_ != nullptr; }
    const std::shared_ptr<const SpectralGrid>& grid() const;
    std::size_t size() const;

    const std::vector<double>& samples() const;
    const std::vector<std::complex<double>>& coeffs() const;

    /** Max |imaginary part| discarded when samples were realized (0 before). */
    double imag_residue() const;

    /** Mean value, i.e. the real part of coefficient bin 0. */
    double mean() const;

    /** Max |samples[j]|. */
    double max_abs() const;

  private:
    struct Rep;
    explicit Field(std::shared_ptr<Rep> rep) : rep_(std::move(rep)) {}
    std::shared_ptr<Rep> rep_;
};

/** Coefficient-space linear algebra; grids must match. */
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);

} // namespace kdv

#endif
