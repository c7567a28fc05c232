#include "kdv/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace kdv {

GaussLegendre::GaussLegendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("GaussLegendre: n must be positive");
    nodes_.assign(n, 0.0);
    weights_.assign(n, 0.0);
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        // Tricomi initial guess for the i-th root of P_n, then Newton.
        double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - static_cast<double>(j) * p2) /
                     (static_cast<double>(j) + 1.0);
            }
            pp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one clean-up iteration after convergence
                if (iter > 0) break;
            }
        }
        nodes_[i] = -x;
        nodes_[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

} // namespace kdv
