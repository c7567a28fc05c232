#include "kdv/spectral_ops.hpp"

#include "kdv/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace kdv {

namespace {

using cplx = std::complex<double>;

// Applies a per-wavenumber symbol on the active band; bin 0 gets sym(0) and
// the Nyquist bin is zeroed (it has no conjugate partner, see grid.hpp).
template <class Symbol>
Field apply_symbol(const Field& f, Symbol&& sym) {
    const auto& c = f.coeffs();
    const auto& g = f.grid();
    const std::size_t n = g->size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (k == g->nyquist_bin()) {
            out[k] = 0.0;
            continue;
        }
        out[k] = sym(g->wavenumber(k)) * c[k];
    }
    return Field::from_coeffs(g, std::move(out));
}

} // namespace

Field apply_semigroup(const Field& f, double t) {
    return apply_symbol(f, [t](int l) {
        double ld = static_cast<double>(l);
        return std::polar(1.0, -t * ld * ld * ld);
    });
}

namespace {

// (i*l)^m as an exact axis-aligned complex number: i^m cycles through
// {1, i, -1, -i} and l^m is built by integer multiplication, so the symbol
// has no transcendental roundoff.
cplx il_pow(int l, int m) {
    double p = 1.0;
    for (int i = 0; i < m; ++i) p *= static_cast<double>(l);
    switch (m & 3) {
        case 0: return {p, 0.0};
        case 1: return {0.0, p};
        case 2: return {-p, 0.0};
        default: return {0.0, -p};
    }
}

cplx il_pow_inv(int l, int m) {
    double p = 1.0;
    for (int i = 0; i < m; ++i) p *= static_cast<double>(l);
    const double q = 1.0 / p;
    switch (m & 3) {
        case 0: return {q, 0.0};
        case 1: return {0.0, -q};
        case 2: return {-q, 0.0};
        default: return {0.0, q};
    }
}

} // namespace

Field derivative(const Field& f, int m) {
    if (m < 1) throw std::invalid_argument("derivative: order must be >= 1");
    return apply_symbol(f, [m](int l) { return il_pow(l, m); });
}

Field inverse_derivative(const Field& f, int m) {
    if (m < 1) throw std::invalid_argument("inverse_derivative: order must be >= 1");
    return apply_symbol(f, [m](int l) -> cplx {
        if (l == 0) return 0.0;
        return il_pow_inv(l, m);
    });
}

double sobolev_norm(const Field& f, double gamma) {
    const auto& c = f.coeffs();
    const auto& g = f.grid();
    double sum = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        double ld = static_cast<double>(g->wavenumber(k));
        sum += std::pow(1.0 + ld * ld, gamma) * std::norm(c[k]);
    }
    return std::sqrt(sum);
}

double mass(const Field& f) { return 2.0 * M_PI * f.coeffs()[0].real(); }

namespace {

Field multiply_plain(const Field& f, const Field& g) {
    const auto& a = f.samples();
    const auto& b = g.samples();
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
    return Field::from_samples(f.grid(), std::move(out));
}

// Zero-padded product: embed active-band coefficients in the 3/2 grid,
// multiply in physical space there, transform back and truncate.  Exact for
// the retained band of a quadratic product.  Nyquist content of the inputs is
// dropped, consistent with the operator convention.
Field multiply_dealiased(const Field& f, const Field& g) {
    const auto& grid = f.grid();
    auto pg = grid->padded();
    const std::size_t n = grid->size();
    const std::size_t m = pg->size();

    auto embed = [&](const Field& h) {
        const auto& c = h.coeffs();
        std::vector<cplx> pc(m, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            if (k == grid->nyquist_bin()) continue;
            pc[pg->bin(grid->wavenumber(k))] = c[k];
        }
        std::vector<double> s(m);
        pg->backward(pc.data(), s.data());
        return s;
    };

    std::vector<double> sa = embed(f);
    std::vector<double> sb = embed(g);
    for (std::size_t j = 0; j < m; ++j) sa[j] *= sb[j];

    std::vector<cplx> pc(m);
    pg->forward(sa.data(), pc.data());
    std::vector<cplx> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        if (k == grid->nyquist_bin()) continue;
        out[k] = pc[pg->bin(grid->wavenumber(k))];
    }
    return Field::from_coeffs(grid, std::move(out));
}

} // namespace

Field multiply(const Field& f, const Field& g, bool dealias) {
    if (f.grid()->size() != g.grid()->size())
        throw GridMismatchError("multiply: fields live on different grids");
    return dealias ? multiply_dealiased(f, g) : multiply_plain(f, g);
}

Field shift(const Field& f, double a) {
    return apply_symbol(f, [a](int l) {
        return std::polar(1.0, -static_cast<double>(l) * a);
    });
}

namespace {

// Shared direct-summation core.  Terms l = 1..N/2-1 are paired with their
// conjugates; the e^{ily} factors come from a rotation recurrence seeded by
// one std::polar call.  The Nyquist bin contributes Re(c)*cos((N/2)y).
void evaluate_series(const Field& f, double y, double* value, double* deriv) {
    const auto& c = f.coeffs();
    const auto& g = f.grid();
    const std::size_t n = g->size();
    const int lmax = g->max_active_mode();

    double v = c[0].real();
    double d = 0.0;
    const cplx rot = std::polar(1.0, y);
    cplx e = 1.0;
    for (int l = 1; l <= lmax; ++l) {
        e *= rot;
        // c_l e^{ily} + c_{-l} e^{-ily}; for real fields this is 2*Re(c_l e^{ily}).
        const cplx term = c[g->bin(l)] * e + c[g->bin(-l)] * std::conj(e);
        v += term.real();
        if (deriv) {
            const cplx dterm = cplx(0.0, l) * (c[g->bin(l)] * e - c[g->bin(-l)] * std::conj(e));
            d += dterm.real();
        }
    }
    const double half_n = static_cast<double>(n) / 2.0;
    const double cnyq = c[g->nyquist_bin()].real();
    if (cnyq != 0.0) {
        v += cnyq * std::cos(half_n * y);
        if (deriv) d -= cnyq * half_n * std::sin(half_n * y);
    }
    if (value) *value = v;
    if (deriv) *deriv = d;
}

} // namespace

double evaluate_offgrid(const Field& f, double y) {
    double v;
    evaluate_series(f, y, &v, nullptr);
    return v;
}

double evaluate_offgrid_derivative(const Field& f, double y) {
    double v, d;
    evaluate_series(f, y, &v, &d);
    return d;
}

void evaluate_offgrid_both(const Field& f, double y, double* value, double* deriv) {
    double d;
    evaluate_series(f, y, value, &d);
    if (deriv) *deriv = d;
}

} // namespace kdv
