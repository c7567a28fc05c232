#include "kdv/field.hpp"

#include "kdv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kdv {

struct Field::Rep {
    std::shared_ptr<const SpectralGrid> grid;
    mutable std::mutex mutex;
    mutable std::vector<double> samples;
    mutable std::vector<std::complex<double>> coeffs;
    mutable bool has_samples = false;
    mutable bool has_coeffs = false;
    mutable double residue = 0.0;
};

Field Field::from_samples(std::shared_ptr<const SpectralGrid> grid,
                          std::vector<double> samples) {
    if (!grid) throw std::invalid_argument("Field: null grid");
    if (samples.size() != grid->size())
        throw std::invalid_argument("Field: sample count does not match grid");
    for (double v : samples)
        if (!std::isfinite(v)) throw std::invalid_argument("Field: non-finite sample");
    auto rep = std::make_shared<Rep>();
    rep->grid = std::move(grid);
    rep->samples = std::move(samples);
    rep->has_samples = true;
    return Field(std::move(rep));
}

Field Field::from_coeffs(std::shared_ptr<const SpectralGrid> grid,
                         std::vector<std::complex<double>> coeffs) {
    if (!grid) throw std::invalid_argument("Field: null grid");
    if (coeffs.size() != grid->size())
        throw std::invalid_argument("Field: coefficient count does not match grid");
    auto rep = std::make_shared<Rep>();
    rep->grid = std::move(grid);
    rep->coeffs = std::move(coeffs);
    rep->has_coeffs = true;
    return Field(std::move(rep));
}

const std::shared_ptr<const SpectralGrid>& Field::grid() const {
    if (!rep_) throw std::logic_error("Field: empty");
    return rep_->grid;
}

std::size_t Field::size() const { return grid()->size(); }

const std::vector<double>& Field::samples() const {
    if (!rep_) throw std::logic_error("Field: empty");
    std::lock_guard<std::mutex> lock(rep_->mutex);
    if (!rep_->has_samples) {
        rep_->samples.resize(rep_->grid->size());
        rep_->residue = rep_->grid->backward(rep_->coeffs.data(), rep_->samples.data());
        rep_->has_samples = true;
    }
    return rep_->samples;
}

const std::vector<std::complex<double>>& Field::coeffs() const {
    if (!rep_) throw std::logic_error("Field: empty");
    std::lock_guard<std::mutex> lock(rep_->mutex);
    if (!rep_->has_coeffs) {
        rep_->coeffs.resize(rep_->grid->size());
        rep_->grid->forward(rep_->samples.data(), rep_->coeffs.data());
        rep_->has_coeffs = true;
    }
    return rep_->coeffs;
}

double Field::imag_residue() const {
    if (!rep_) throw std::logic_error("Field: empty");
    std::lock_guard<std::mutex> lock(rep_->mutex);
    return rep_->residue;
}

double Field::mean() const { return coeffs()[0].real(); }

double Field::max_abs() const {
    double m = 0.0;
    for (double v : samples()) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// Distinct grid objects of equal size describe the same mathematical grid.
void check_same_grid(const Field& a, const Field& b) {
    if (a.grid()->size() != b.grid()->size())
        throw GridMismatchError("fields live on different grids");
}

} // namespace

Field operator+(const Field& a, const Field& b) {
    check_same_grid(a, b);
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    std::vector<std::complex<double>> out(ca.size());
    for (std::size_t k = 0; k < ca.size(); ++k) out[k] = ca[k] + cb[k];
    return Field::from_coeffs(a.grid(), std::move(out));
}

Field operator-(const Field& a, const Field& b) {
    check_same_grid(a, b);
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    std::vector<std::complex<double>> out(ca.size());
    for (std::size_t k = 0; k < ca.size(); ++k) out[k] = ca[k] - cb[k];
    return Field::from_coeffs(a.grid(), std::move(out));
}

Field operator*(double s, const Field& a) {
    const auto& ca = a.coeffs();
    std::vector<std::complex<double>> out(ca.size());
    for (std::size_t k = 0; k < ca.size(); ++k) out[k] = s * ca[k];
    return Field::from_coeffs(a.grid(), std::move(out));
}

} // namespace kdv
