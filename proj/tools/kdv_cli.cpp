// Command-line front end for the KdV low-regularity integrator library.
//
// Subcommands:
//   run      evolve initial data and report/save the final field
//   converge single-scheme convergence study against a fine reference
//   compare  convergence studies for several schemes on shared data
//   roughgen generate deterministic rough initial data
//
// Every flag can also be given in a config file (--config file with
// key=value lines, same names as the long flags); explicit flags win.
// Exit codes: 0 success, 2 configuration/validation error, 3 runtime
// (numerical) failure.

#include "kdv/errors.hpp"
#include "kdv/field_io.hpp"
#include "kdv/harness.hpp"
#include "kdv/oracles.hpp"
#include "kdv/schemes.hpp"
#include "kdv/spectral_ops.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
    std::string scheme = "lri2";
    double tau = 0.0;
    double T = 0.0;
    std::size_t n = 0;
    double theta = 4.0;
    std::uint64_t seed = 0;
    double gamma = 0.0;
    std::string tau_list;
    double tau_ref = 0.0;
    std::string dealias = "off";
    int jobs = 1;
    std::string out;
    std::string profile;
    std::string field_path;
    std::string cache_dir;
    std::string config_path;
};

void add_common_flags(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path,
                    "Config file with key=value lines mirroring these flags; "
                    "explicit flags override config values");
    cmd->add_option("--scheme", o.scheme, "Scheme: lri2|lri1|strang")
        ->check(CLI::IsMember({"lri2", "lri1", "strang"}));
    cmd->add_option("--tau", o.tau, "Time step");
    cmd->add_option("--T", o.T, "Final time");
    cmd->add_option("--N", o.n, "Grid size (even)");
    cmd->add_option("--theta", o.theta, "Rough-data regularity exponent");
    cmd->add_option("--seed", o.seed, "Rough-data seed");
    cmd->add_option("--gamma", o.gamma, "Sobolev index of the error norm");
    cmd->add_option("--tau-list", o.tau_list, "Comma-separated taus, strictly decreasing");
    cmd->add_option("--tau-ref", o.tau_ref, "Reference time step");
    cmd->add_option("--dealias", o.dealias, "Dealiased products: on|off")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--jobs", o.jobs, "Parallel runs for studies")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "Output path (field or CSV)");
    cmd->add_option("--profile", o.profile, "Preset sizes: desk (N=1024,T=1) or paper (N=4096,T=2)")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--field", o.field_path, "Read initial data from a field file");
    cmd->add_option("--cache-dir", o.cache_dir, "Reference-solution cache directory");
}

// Strict numeric conversions: the whole token must consume.
double config_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value '" + v + "' for key '" + key + "'");
    }
}

std::uint64_t config_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer value '" + v + "' for key '" + key + "'");
    }
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Loads key=value lines into any option the command line left untouched; the
// keys are exactly the long flag names.  Unknown keys and malformed lines are
// configuration errors (exit 2), never crashes.
void apply_config_file(const CLI::App* cmd, CommonOptions& o) {
    if (o.config_path.empty()) return;
    std::ifstream in(o.config_path);
    if (!in) throw std::invalid_argument("config: cannot open " + o.config_path);

    const auto member = [&](const std::string& key, const std::string& v,
                            std::initializer_list<const char*> allowed) {
        for (const char* a : allowed)
            if (v == a) return v;
        throw std::invalid_argument("config: bad value '" + v + "' for key '" + key + "'");
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key=value in " + o.config_path);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        static const char* known[] = {"scheme", "tau",     "T",    "N",       "theta",
                                      "seed",   "gamma",   "tau-list", "tau-ref",
                                      "dealias", "jobs",   "out",  "profile", "field",
                                      "cache-dir"};
        bool is_known = false;
        for (const char* k : known)
            if (key == k) is_known = true;
        if (!is_known)
            throw std::invalid_argument("config: unknown key '" + key + "' in " + o.config_path);
        const bool overridden = cmd->count("--" + key) > 0;
        if (key == "scheme") {
            if (!overridden) o.scheme = member(key, value, {"lri2", "lri1", "strang"});
        } else if (key == "tau") {
            if (!overridden) o.tau = config_double(key, value);
        } else if (key == "T") {
            if (!overridden) o.T = config_double(key, value);
        } else if (key == "N") {
            if (!overridden) o.n = static_cast<std::size_t>(config_u64(key, value));
        } else if (key == "theta") {
            if (!overridden) o.theta = config_double(key, value);
        } else if (key == "seed") {
            if (!overridden) o.seed = config_u64(key, value);
        } else if (key == "gamma") {
            if (!overridden) o.gamma = config_double(key, value);
        } else if (key == "tau-list") {
            if (!overridden) o.tau_list = value;
        } else if (key == "tau-ref") {
            if (!overridden) o.tau_ref = config_double(key, value);
        } else if (key == "dealias") {
            if (!overridden) o.dealias = member(key, value, {"on", "off"});
        } else if (key == "jobs") {
            if (!overridden) {
                o.jobs = static_cast<int>(config_u64(key, value));
                if (o.jobs < 1)
                    throw std::invalid_argument("config: jobs must be >= 1");
            }
        } else if (key == "out") {
            if (!overridden) o.out = value;
        } else if (key == "profile") {
            if (!overridden) o.profile = member(key, value, {"desk", "paper"});
        } else if (key == "field") {
            if (!overridden) o.field_path = value;
        } else if (key == "cache-dir") {
            if (!overridden) o.cache_dir = value;
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "' in " + o.config_path);
        }
    }
}

// Profile presets fill N and T only where the user did not set them.
void apply_profile(const CLI::App* cmd, CommonOptions& o) {
    if (o.profile.empty()) return;
    const bool desk = o.profile == "desk";
    if (cmd->count("--N") == 0 && o.n == 0) o.n = desk ? 1024 : 4096;
    if (cmd->count("--T") == 0 && o.T == 0.0) o.T = desk ? 1.0 : 2.0;
}

std::vector<double> parse_tau_list(const std::string& text) {
    std::vector<double> taus;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            double v = std::stod(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            taus.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad tau value '" + item + "' in --tau-list");
        }
    }
    if (taus.empty()) throw std::invalid_argument("--tau-list is empty");
    return taus;
}

kdv::DataDescriptor load_data(const CommonOptions& o) {
    if (!o.field_path.empty()) {
        kdv::Field f = kdv::read_field(o.field_path);
        return kdv::describe_smooth("file(" + o.field_path + ")", std::move(f));
    }
    if (o.n == 0)
        throw std::invalid_argument("no initial data: give --field, or --N (with --theta/--seed), or --profile");
    return kdv::describe_rough({o.n, o.theta, o.seed});
}

kdv::StudyOptions study_options(const CommonOptions& o) {
    kdv::StudyOptions opt;
    opt.dealias = o.dealias == "on";
    opt.jobs = o.jobs;
    opt.cache_dir = o.cache_dir;
    return opt;
}

void emit_csv_or_die(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    if (path.empty()) {
        writer(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw kdv::Error("cannot open output file " + path);
    writer(out);
    out.flush();
    if (!out) throw kdv::Error("write failed for " + path);
}

int cmd_run(const CLI::App* cmd, CommonOptions& o) {
    apply_config_file(cmd, o);
    apply_profile(cmd, o);
    if (!(o.tau > 0.0)) throw std::invalid_argument("run: --tau is required and must be > 0");
    if (!(o.T > 0.0)) throw std::invalid_argument("run: --T is required and must be > 0");

    kdv::DataDescriptor data = load_data(o);
    kdv::SchemeConfig cfg;
    cfg.kind = kdv::scheme_from_name(o.scheme);
    cfg.tau = o.tau;
    cfg.dealias = o.dealias == "on";
    kdv::SolverState final_state = kdv::evolve(data.u0, o.T, cfg);

    if (!o.out.empty()) kdv::write_field_file(o.out, final_state.u);
    std::printf("t=%.10g mass=%.10g h0=%.10g steps=%lld\n", final_state.t,
                kdv::mass(final_state.u), kdv::sobolev_norm(final_state.u, 0.0),
                final_state.step_count);
    return kExitOk;
}

int cmd_converge(const CLI::App* cmd, CommonOptions& o) {
    apply_config_file(cmd, o);
    apply_profile(cmd, o);
    if (!(o.T > 0.0)) throw std::invalid_argument("converge: --T is required and must be > 0");
    if (o.tau_list.empty()) throw std::invalid_argument("converge: --tau-list is required");
    if (!(o.tau_ref > 0.0)) throw std::invalid_argument("converge: --tau-ref is required");

    kdv::DataDescriptor data = load_data(o);
    const std::vector<double> taus = parse_tau_list(o.tau_list);
    try {
        kdv::ConvergenceReport report =
            kdv::convergence_study(kdv::scheme_from_name(o.scheme), o.gamma, data, o.T, taus,
                                   o.tau_ref, study_options(o));
        emit_csv_or_die(o.out, [&](std::ostream& os) { kdv::write_csv(os, report); });
        return kExitOk;
    } catch (const kdv::StudyAbortedError& e) {
        // Partial rows first, then the abort marker; the caller sees exit 3.
        emit_csv_or_die(o.out, [&](std::ostream& os) { kdv::write_csv(os, e.partial()); });
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}

int cmd_compare(const CLI::App* cmd, CommonOptions& o, bool scheme_given) {
    apply_config_file(cmd, o);
    apply_profile(cmd, o);
    if (!(o.T > 0.0)) throw std::invalid_argument("compare: --T is required and must be > 0");
    if (o.tau_list.empty()) throw std::invalid_argument("compare: --tau-list is required");
    if (!(o.tau_ref > 0.0)) throw std::invalid_argument("compare: --tau-ref is required");

    std::vector<kdv::SchemeKind> schemes;
    if (scheme_given) {
        schemes = {kdv::scheme_from_name(o.scheme)};
    } else {
        schemes = {kdv::SchemeKind::lri2, kdv::SchemeKind::lri1, kdv::SchemeKind::strang};
    }
    kdv::DataDescriptor data = load_data(o);
    const std::vector<double> taus = parse_tau_list(o.tau_list);
    kdv::CompareReport report =
        kdv::compare_schemes(o.gamma, data, o.T, taus, o.tau_ref, schemes, study_options(o));
    emit_csv_or_die(o.out, [&](std::ostream& os) { kdv::write_csv(os, report); });
    return kExitOk;
}

int cmd_roughgen(const CLI::App* cmd, CommonOptions& o) {
    apply_config_file(cmd, o);
    apply_profile(cmd, o);
    if (o.n == 0) throw std::invalid_argument("roughgen: --N is required");
    if (o.out.empty()) throw std::invalid_argument("roughgen: --out is required");

    kdv::Field f = kdv::rough_data({o.n, o.theta, o.seed});
    kdv::write_field_file(o.out, f);
    std::printf("N=%zu theta=%.10g seed=%llu htheta=%.10g linf=%.10g\n", o.n, o.theta,
                static_cast<unsigned long long>(o.seed), kdv::sobolev_norm(f, o.theta),
                f.max_abs());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral KdV solver: low-regularity exponential integrators "
                 "and a Strang splitting baseline on the 2*pi torus"};
    app.require_subcommand(1);

    CommonOptions run_o, conv_o, comp_o, rough_o;
    CLI::App* run = app.add_subcommand("run", "Evolve initial data to time T");
    add_common_flags(run, run_o);
    CLI::App* conv = app.add_subcommand("converge", "Convergence study for one scheme");
    add_common_flags(conv, conv_o);
    CLI::App* comp = app.add_subcommand("compare", "Convergence studies for all schemes");
    add_common_flags(comp, comp_o);
    CLI::App* rough = app.add_subcommand("roughgen", "Generate rough initial data");
    add_common_flags(rough, rough_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(run, run_o);
        if (conv->parsed()) return cmd_converge(conv, conv_o);
        if (comp->parsed()) return cmd_compare(comp, comp_o, comp->count("--scheme") > 0);
        if (rough->parsed()) return cmd_roughgen(rough, rough_o);
        std::fprintf(stderr, "error: no subcommand\n");
        return kExitConfig;
    } catch (const kdv::NonIntegerStepCountError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const kdv::FieldFormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const kdv::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
