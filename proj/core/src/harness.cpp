#include "kdv/harness.hpp"

#include "kdv/oracles.hpp"
#include "kdv/rng.hpp"
#include "kdv/spectral_ops.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace kdv {

const char* scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::lri2: return "lri2";
        case SchemeKind::lri1: return "lri1";
        case SchemeKind::strang: return "strang";
    }
    return "?";
}

SchemeKind scheme_from_name(const std::string& name) {
    if (name == "lri2") return SchemeKind::lri2;
    if (name == "lri1") return SchemeKind::lri1;
    if (name == "strang") return SchemeKind::strang;
    throw std::invalid_argument("unknown scheme '" + name + "' (expected lri2|lri1|strang)");
}

Field rough_data(const RoughDataSpec& spec, std::shared_ptr<const SpectralGrid> grid) {
    if (!grid) {
        grid = SpectralGrid::create(spec.n);
    } else if (grid->size() != spec.n) {
        throw std::invalid_argument("rough_data: grid size does not match spec.n");
    }
    if (!(spec.theta >= 0.0) || !std::isfinite(spec.theta))
        throw std::invalid_argument("rough_data: theta must be finite and >= 0");

    const std::size_t n = grid->size();
    SplitMix64 rng(spec.seed);
    std::vector<double> samples(n);
    for (std::size_t j = 0; j < n; ++j) samples[j] = rng.next_double();

    std::vector<std::complex<double>> c(n);
    grid->forward(samples.data(), c.data());
    c[0] = 0.0;
    c[grid->nyquist_bin()] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const int l = grid->wavenumber(k);
        if (l == 0 || k == grid->nyquist_bin()) continue;
        c[k] *= std::pow(static_cast<double>(std::abs(l)), -spec.theta);
    }

    std::vector<double> shaped(n);
    grid->backward(c.data(), shaped.data());
    double z = 0.0;
    for (double v : shaped) z = std::max(z, std::abs(v));
    if (!(z > 0.0)) throw Error("rough_data: degenerate field (zero after shaping)");

    // Normalize in coefficient space so the zero mean stays exact; the
    // max-norm is 1 up to one rounding.
    const double inv = 1.0 / z;
    for (auto& v : c) v *= inv;
    return Field::from_coeffs(grid, std::move(c));
}

DataDescriptor describe_rough(const RoughDataSpec& spec,
                              std::shared_ptr<const SpectralGrid> grid) {
    DataDescriptor d;
    d.u0 = rough_data(spec, std::move(grid));
    d.theta = spec.theta;
    char buf[96];
    std::snprintf(buf, sizeof buf, "rough(N=%zu,theta=%g,seed=%llu)", spec.n, spec.theta,
                  static_cast<unsigned long long>(spec.seed));
    d.name = buf;
    return d;
}

DataDescriptor describe_smooth(std::string name, Field u0) {
    DataDescriptor d;
    d.u0 = std::move(u0);
    d.name = std::move(name);
    return d;
}

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

void validate_tau_ladder(const std::vector<double>& taus, double T, double tau_ref) {
    if (taus.empty()) throw std::invalid_argument("study: empty tau list");
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] > 0.0)) throw std::invalid_argument("study: taus must be positive");
        if (i > 0 && !(taus[i] < taus[i - 1]))
            throw std::invalid_argument("study: taus must be strictly decreasing");
    }
    if (T > 0.0 && !(tau_ref <= taus.back() / 10.0))
        throw std::invalid_argument(
            "study: tau_ref must be at most one tenth of the smallest study tau");
}

double relative_error(const Field& approx, const Field& ref, double gamma) {
    const double diff = sobolev_norm(approx - ref, gamma);
    const double scale = sobolev_norm(ref, gamma);
    if (scale == 0.0)
        return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / scale;
}

// Slope between consecutive ladder entries; equals log2(e_i/e_{i+1}) on the
// dyadic ladders used throughout.
double pairwise_order(double tau_a, double err_a, double tau_b, double err_b) {
    return std::log(err_a / err_b) / std::log(tau_a / tau_b);
}

void finalize_orders(ConvergenceReport& r) {
    const std::size_t rows = r.rel_errors.size();
    r.observed_orders.assign(rows > 1 ? rows - 1 : 0,
                             std::numeric_limits<double>::quiet_NaN());
    r.in_fit.assign(r.observed_orders.size(), false);
    if (rows < 2) return;

    // Estimated relative error of the reference itself, assuming second order
    // with the same constant as the finest completed run; errors below ten
    // times this floor are excluded from the mean.
    double ref_floor = 0.0;
    for (std::size_t i = rows; i-- > 0;) {
        if (!r.dnf[i] && std::isfinite(r.rel_errors[i])) {
            const double ratio = r.tau_ref / r.taus[i];
            ref_floor = r.rel_errors[i] * ratio * ratio;
            break;
        }
    }

    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + 1 < rows; ++i) {
        if (r.dnf[i] || r.dnf[i + 1]) continue;
        const double ea = r.rel_errors[i], eb = r.rel_errors[i + 1];
        if (!std::isfinite(ea) || !std::isfinite(eb) || ea <= 0.0 || eb <= 0.0) continue;
        r.observed_orders[i] = pairwise_order(r.taus[i], ea, r.taus[i + 1], eb);
        if (ea > 10.0 * ref_floor && eb > 10.0 * ref_floor) {
            r.in_fit[i] = true;
            sum += r.observed_orders[i];
            ++count;
        }
    }
    if (count > 0) r.mean_observed_order = sum / static_cast<double>(count);
}

struct RunResult {
    double rel_error = std::numeric_limits<double>::quiet_NaN();
    double wall_ms = 0.0;
    bool dnf = false;
    std::string reason;
};

ConvergenceReport study_engine(SchemeKind scheme, double gamma, const DataDescriptor& data,
                               double T, const std::vector<double>& taus, double tau_ref,
                               const StudyOptions& options, const Field* shared_ref,
                               bool stop_on_failure) {
    validate_tau_ladder(taus, T, tau_ref);
    if (!(T > 0.0)) throw std::invalid_argument("study: T must be positive");

    ConvergenceReport report;
    report.scheme = scheme;
    report.gamma = gamma;
    report.theta = data.theta;
    report.T = T;
    report.tau_ref = tau_ref;
    report.data_name = data.name;

    Field ref = shared_ref ? *shared_ref
                           : reference_solution(data.u0, T, tau_ref, options.cache_dir);

    const std::size_t count = taus.size();
    std::vector<RunResult> results(count);

    auto run_one = [&](std::size_t i) {
        RunResult rr;
        const double start = now_ms();
        try {
            SchemeConfig cfg;
            cfg.kind = scheme;
            cfg.tau = taus[i];
            cfg.dealias = options.dealias;
            cfg.newton_tol = options.newton_tol;
            cfg.newton_max_iter = options.newton_max_iter;
            Field u = evolve(data.u0, T, cfg).u;
            rr.rel_error = relative_error(u, ref, gamma);
        } catch (const Error& e) {
            rr.dnf = true;
            rr.reason = e.what();
        }
        rr.wall_ms = now_ms() - start;
        results[i] = std::move(rr);
    };

    const int jobs = std::max(1, options.jobs);
    if (jobs == 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            run_one(i);
            if (stop_on_failure && results[i].dnf) {
                // Keep the rows attempted so far, the failed one included.
                report.taus.assign(taus.begin(), taus.begin() + static_cast<long>(i + 1));
                for (std::size_t j = 0; j <= i; ++j) {
                    report.rel_errors.push_back(results[j].rel_error);
                    report.wall_ms.push_back(results[j].wall_ms);
                    report.dnf.push_back(results[j].dnf);
                }
                report.aborted = true;
                report.abort_reason = results[i].reason;
                finalize_orders(report);
                throw StudyAbortedError(
                    std::string(scheme_name(scheme)) + " failed at tau = " +
                        std::to_string(taus[i]) + ": " + results[i].reason,
                    report, taus[i]);
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                run_one(i);
            }
        };
        std::vector<std::thread> pool;
        const std::size_t nthreads = std::min(static_cast<std::size_t>(jobs), count);
        pool.reserve(nthreads);
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (stop_on_failure) {
            for (std::size_t i = 0; i < count; ++i) {
                if (!results[i].dnf) continue;
                report.taus.assign(taus.begin(), taus.begin() + static_cast<long>(i + 1));
                for (std::size_t j = 0; j <= i; ++j) {
                    report.rel_errors.push_back(results[j].rel_error);
                    report.wall_ms.push_back(results[j].wall_ms);
                    report.dnf.push_back(results[j].dnf);
                }
                report.aborted = true;
                report.abort_reason = results[i].reason;
                finalize_orders(report);
                throw StudyAbortedError(
                    std::string(scheme_name(scheme)) + " failed at tau = " +
                        std::to_string(taus[i]) + ": " + results[i].reason,
                    report, taus[i]);
            }
        }
    }

    report.taus = taus;
    for (const auto& rr : results) {
        report.rel_errors.push_back(rr.rel_error);
        report.wall_ms.push_back(rr.wall_ms);
        report.dnf.push_back(rr.dnf);
    }
    finalize_orders(report);
    return report;
}

} // namespace

ConvergenceReport convergence_study(SchemeKind scheme, double gamma,
                                    const DataDescriptor& data, double T,
                                    const std::vector<double>& taus, double tau_ref,
                                    const StudyOptions& options) {
    return study_engine(scheme, gamma, data, T, taus, tau_ref, options, nullptr, true);
}

LocalErrorReport local_error_study(SchemeKind scheme, double gamma,
                                   const DataDescriptor& data, double t_n,
                                   const std::vector<double>& taus,
                                   const StudyOptions& options) {
    if (taus.empty()) throw std::invalid_argument("local_error_study: empty tau list");
    for (std::size_t i = 1; i < taus.size(); ++i)
        if (!(taus[i] < taus[i - 1]))
            throw std::invalid_argument("local_error_study: taus must be strictly decreasing");

    LocalErrorReport report;
    report.scheme = scheme;
    report.gamma = gamma;
    report.taus = taus;

    Field u0 = reduce_mean(data.u0).first;
    const int substeps = 128;
    for (double tau : taus) {
        SchemeConfig cfg;
        cfg.kind = scheme;
        cfg.tau = tau;
        cfg.dealias = options.dealias;
        cfg.newton_tol = options.newton_tol;
        cfg.newton_max_iter = options.newton_max_iter;
        Field one = scheme_step(u0, t_n, cfg);

        SchemeConfig fine;
        fine.kind = SchemeKind::lri2;
        fine.tau = tau / substeps;
        fine.dealias = options.dealias;
        Field ref = u0;
        for (int i = 0; i < substeps; ++i)
            ref = lri2_step(ref, t_n + i * fine.tau, fine);

        report.errors.push_back(relative_error(one, ref, gamma));
    }

    report.slopes.assign(taus.size() > 1 ? taus.size() - 1 : 0,
                         std::numeric_limits<double>::quiet_NaN());
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
        report.slopes[i] =
            pairwise_order(taus[i], report.errors[i], taus[i + 1], report.errors[i + 1]);
        sum += report.slopes[i];
        ++count;
    }
    if (count > 0) report.mean_slope = sum / static_cast<double>(count);
    return report;
}

CompareReport compare_schemes(double gamma, const DataDescriptor& data, double T,
                              const std::vector<double>& taus, double tau_ref,
                              const std::vector<SchemeKind>& schemes,
                              const StudyOptions& options) {
    if (schemes.empty()) throw std::invalid_argument("compare_schemes: no schemes");
    validate_tau_ladder(taus, T, tau_ref);
    Field ref = reference_solution(data.u0, T, tau_ref, options.cache_dir);
    CompareReport cr;
    for (SchemeKind s : schemes)
        cr.reports.push_back(
            study_engine(s, gamma, data, T, taus, tau_ref, options, &ref, false));
    return cr;
}

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_rows(std::ostream& out, const ConvergenceReport& r) {
    for (std::size_t i = 0; i < r.taus.size(); ++i) {
        out << scheme_name(r.scheme) << ',' << num(r.gamma) << ',' << num(r.theta) << ','
            << num(r.T) << ',' << num(r.taus[i]) << ',' << num(r.rel_errors[i]) << ',';
        if (i == 0) {
            // first row of a scheme: no previous pair, cell left blank
        } else {
            out << num(r.observed_orders[i - 1]);
        }
        out << ',' << num(r.wall_ms[i]) << '\n';
    }
    if (r.aborted) out << "# ABORTED\n";
}

} // namespace

void write_csv(std::ostream& out, const ConvergenceReport& report) {
    out << "scheme,gamma,theta,T,tau,rel_error,observed_order,wall_ms\n";
    write_rows(out, report);
}

void write_csv(std::ostream& out, const CompareReport& report) {
    out << "scheme,gamma,theta,T,tau,rel_error,observed_order,wall_ms\n";
    for (const auto& r : report.reports) write_rows(out, r);
}

} // namespace kdv
