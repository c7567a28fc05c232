#ifndef KDV_TEST_SUPPORT_HPP
#define KDV_TEST_SUPPORT_HPP

#include "kdv/field.hpp"
#include "kdv/rng.hpp"
#include "kdv/schemes.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace kdvtest {

/** Uniform random samples in [-1/2, 1/2); carries mean and Nyquist content. */
inline kdv::Field random_field(std::shared_ptr<const kdv::SpectralGrid> g,
                               std::uint64_t seed) {
    kdv::SplitMix64 rng(seed);
    std::vector<double> s(g->size());
    for (auto& v : s) v = rng.next_double() - 0.5;
    return kdv::Field::from_samples(std::move(g), std::move(s));
}

/** Random field with the mean removed exactly. */
inline kdv::Field random_zero_mean(std::shared_ptr<const kdv::SpectralGrid> g,
                                   std::uint64_t seed) {
    return kdv::reduce_mean(random_field(std::move(g), seed)).first;
}

/** Random zero-mean field restricted to the active band (no Nyquist). */
inline kdv::Field random_active(std::shared_ptr<const kdv::SpectralGrid> g,
                                std::uint64_t seed) {
    kdv::Field f = random_zero_mean(g, seed);
    auto c = f.coeffs();
    c[g->nyquist_bin()] = 0.0;
    return kdv::Field::from_coeffs(std::move(g), std::move(c));
}

/** Samples a pointwise expression onto the grid. */
inline kdv::Field sampled(std::shared_ptr<const kdv::SpectralGrid> g,
                          const std::function<double(double)>& fn) {
    std::vector<double> s(g->size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = fn(g->point(j));
    return kdv::Field::from_samples(std::move(g), std::move(s));
}

/** Max |a_j - b_j| over samples. */
inline double max_sample_diff(const kdv::Field& a, const kdv::Field& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        m = std::max(m, std::abs(a.samples()[j] - b.samples()[j]));
    return m;
}

/** Max coefficient discrepancy, relative to max|a|. */
inline double rel_coeff_diff(const kdv::Field& a, const kdv::Field& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a.coeffs()[k] - b.coeffs()[k]));
    return m / a.max_abs();
}

/** Max deviation of samples from a pointwise reference expression. */
inline double max_err_vs(const kdv::Field& f,
                         const std::function<double(double)>& fn) {
    double m = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
        m = std::max(m, std::abs(f.samples()[j] - fn(f.grid()->point(j))));
    return m;
}

} // namespace kdvtest

#endif
