#pragma once

// Experiment runner: flat key = value config with [section] headers, method
// sweeps over (s, resolution), CSV artifacts per experiment kind, and a
// summary CSV of the acceptance criteria touched by the requested methods.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclab/checks.hpp"
#include "fraclab/csv.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/heat.hpp"
#include "fraclab/inequalities.hpp"
#include "fraclab/parametrix.hpp"
#include "fraclab/pvkernel.hpp"

namespace fraclab {

struct ExperimentConfig {
    std::string manifold = "torus1";  // torus1 | torus2 | sphere
    std::vector<double> s_values;
    std::vector<int> resolutions;
    double epsilon_rule = 4.0;  // multiplier of grid spacing
    std::vector<std::string> methods;
    int band_limit = 8;
    std::uint64_t seed = 1;
    std::string output = "out";
};

namespace experiment_detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace experiment_detail

// Flat key = value lines; [section] headers are accepted and ignored beyond
// syntax checking; '#' starts a comment.
inline ExperimentConfig parse_config(std::istream& in) {
    using experiment_detail::split_list;
    using experiment_detail::trim;
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed section header");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "manifold") {
            cfg.manifold = val;
        } else if (key == "s") {
            cfg.s_values.clear();
            for (const auto& t : split_list(val)) cfg.s_values.push_back(std::stod(t));
        } else if (key == "resolutions") {
            cfg.resolutions.clear();
            for (const auto& t : split_list(val)) cfg.resolutions.push_back(std::stoi(t));
        } else if (key == "epsilon_rule") {
            cfg.epsilon_rule = std::stod(val);
        } else if (key == "methods") {
            cfg.methods = split_list(val);
        } else if (key == "band_limit") {
            cfg.band_limit = std::stoi(val);
        } else if (key == "seed") {
            cfg.seed = std::stoull(val);
        } else if (key == "output") {
            cfg.output = val;
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    return parse_config(in);
}

inline Manifold manifold_from_name(const std::string& name) {
    if (name == "torus1") return Manifold::torus(1);
    if (name == "torus2") return Manifold::torus(2);
    if (name == "sphere") return Manifold::sphere();
    throw std::invalid_argument("unknown manifold '" + name + "'");
}

// Validates every method's preconditions against the listed parameters;
// throws invalid_argument with a one-line reason before any computation.
inline void validate_config(const ExperimentConfig& cfg) {
    Manifold m = manifold_from_name(cfg.manifold);
    const std::set<std::string> known{"spectral", "heat", "pv", "riesz", "parametrix"};
    for (const auto& meth : cfg.methods)
        if (!known.count(meth)) throw std::invalid_argument("unknown method '" + meth + "'");
    if (cfg.methods.empty()) return;  // vacuous run
    if (cfg.s_values.empty()) throw std::invalid_argument("no s values listed");
    if (cfg.resolutions.empty()) throw std::invalid_argument("no resolutions listed");
    for (double s : cfg.s_values)
        if (!(s > -1.0 && s < 1.0) || s == 0.0)
            throw std::invalid_argument("s outside (-1,1)\\{0}");
    if (!(cfg.epsilon_rule >= 2.0))
        throw std::invalid_argument("epsilon rule below 2 grid spacings");
    if (cfg.band_limit < 1) throw std::invalid_argument("band_limit < 1");
    for (int res : cfg.resolutions) {
        if (res < 4) throw std::invalid_argument("resolution < 4");
        GridPtr g = build_grid(m, res);
        if (cfg.band_limit > nyquist_band_limit(*g))
            throw std::invalid_argument("band_limit beyond Nyquist at resolution " +
                                        std::to_string(res));
    }
    auto has_s = [&](bool positive) {
        for (double s : cfg.s_values)
            if ((s > 0.0) == positive) return true;
        return false;
    };
    for (const auto& meth : cfg.methods) {
        if ((meth == "heat" || meth == "pv") && !has_s(true))
            throw std::invalid_argument("method '" + meth + "' needs some s in (0,1)");
        if (meth == "riesz") {
            if (!has_s(false))
                throw std::invalid_argument("method 'riesz' needs some s in (-1,0)");
            for (double s : cfg.s_values)
                if (s < 0.0 && m.dim + 2.0 * s <= 0.0)
                    throw std::invalid_argument("riesz: n + 2s <= 0 (logarithmic case)");
            if (m.kind == ManifoldKind::Torus && m.dim == 2)
                throw std::invalid_argument("riesz: exact kernel on T^2 not supported");
        }
    }
}

// Runs the configured sweeps. Returns 0 on success, 1 on validation error,
// 2 if any touched acceptance criterion fails. Validation failures print a
// machine-readable "error: ..." line to err.
inline int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate_config(cfg);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output);
    auto path = [&](const std::string& name) { return (fs::path(cfg.output) / name).string(); };

    const std::set<std::string> methods(cfg.methods.begin(), cfg.methods.end());
    Manifold m = manifold_from_name(cfg.manifold);

    if (!methods.empty()) {
        // deterministic per-resolution probe fields
        std::map<int, GridPtr> grids;
        std::map<int, Basis> bases;
        std::map<int, Field> fields;
        for (int res : cfg.resolutions) {
            grids[res] = build_grid(m, res);
            bases[res] = eigenbasis(grids[res], cfg.band_limit);
            GaussianSampler rng(cfg.seed);
            fields[res] = random_field(bases[res], rng);
        }

        if (methods.count("spectral") || methods.count("heat")) {
            CsvWriter w(path("heat_vs_spectral.csv"),
                        {"s", "band_limit", "method", "L2_error", "Linf_error",
                         "runtime_seconds", "status"});
            for (double s : cfg.s_values) {
                for (int res : cfg.resolutions) {
                    const Field& f = fields[res];
                    if (methods.count("spectral") && s != 0.0) {
                        auto t0 = std::chrono::steady_clock::now();
                        Field ref = fractional_apply_spectral(f, s, bases[res]);
                        std::chrono::duration<double> dt =
                            std::chrono::steady_clock::now() - t0;
                        (void)ref;
                        w.row({csv_num(s), csv_num(cfg.band_limit), "spectral", csv_num(0.0),
                               csv_num(0.0), csv_num(dt.count()), "ok"});
                    }
                    if (methods.count("heat") && s > 0.0) {
                        std::string status = "ok";
                        double l2 = std::nan(""), li = std::nan(""), secs = std::nan("");
                        try {
                            Field ref = fractional_apply_spectral(f, s, bases[res]);
                            auto t0 = std::chrono::steady_clock::now();
                            Field got = fractional_apply_heat(f, s, TimeQuadrature{}, bases[res]);
                            std::chrono::duration<double> dt =
                                std::chrono::steady_clock::now() - t0;
                            secs = dt.count();
                            Field diff = got - ref;
                            l2 = l2_norm(diff);
                            li = linf_norm(diff);
                        } catch (const std::exception& e) {
                            status = std::string("not_converged:") + e.what();
                        }
                        w.row({csv_num(s), csv_num(cfg.band_limit), "heat", csv_num(l2),
                               csv_num(li), csv_num(secs), status});
                    }
                }
            }
        }

        if (methods.count("pv") || methods.count("riesz")) {
            CsvWriter w(path("pv_riesz.csv"),
                        {"manifold", "n", "s", "resolution", "epsilon", "mode",
                         "L2_rel_error", "Linf_rel_error", "kernel_limit_estimate",
                         "kernel_limit_target", "slope", "status"});
            // diagonal asymptotics once per s (resolution-independent)
            std::map<double, DiagonalAsymptotics> diag;
            std::vector<double> d_seq;
            for (int i = 0; i < 8; ++i) d_seq.push_back(0.03 * std::pow(10.0, i / 7.0));
            for (double s : cfg.s_values) {
                bool needed = (s > 0.0 && methods.count("pv")) ||
                              (s < 0.0 && methods.count("riesz"));
                if (!needed) continue;
                if (s < 0.0 && m.kind == ManifoldKind::Torus && m.dim == 2) continue;
                diag.emplace(s, diagonal_asymptotics_check(s, m, d_seq));
            }
            for (double s : cfg.s_values) {
                for (int res : cfg.resolutions) {
                    const char* meth = s > 0.0 ? "pv" : "riesz";
                    if (!methods.count(meth)) continue;
                    const Field& f = fields[res];
                    PVScheme scheme;
                    scheme.grid = grids[res];
                    scheme.epsilon = cfg.epsilon_rule * grids[res]->spacing();
                    std::string status = "ok";
                    double l2 = std::nan(""), li = std::nan("");
                    try {
                        Field ref = fractional_apply_spectral(f, s, bases[res]);
                        Field got = s > 0.0
                                        ? pv_apply(f, make_kernel_spec(m, s), scheme, bases[res])
                                        : riesz_apply(f, make_kernel_spec(m, s), scheme);
                        Field diff = got - ref;
                        l2 = l2_norm(diff) / l2_norm(ref);
                        li = linf_norm(diff) / linf_norm(ref);
                    } catch (const std::exception& e) {
                        status = std::string("not_converged:") + e.what();
                    }
                    auto it = diag.find(s);
                    double lim = it != diag.end() ? it->second.limit : std::nan("");
                    double slope = it != diag.end() ? it->second.slope : std::nan("");
                    double target = c_ns_constant(m.dim, s);
                    w.row({cfg.manifold, csv_num(m.dim), csv_num(s), csv_num(res),
                           csv_num(scheme.epsilon), "full", csv_num(l2), csv_num(li),
                           csv_num(lim), csv_num(target), csv_num(slope), status});
                }
            }
        }

        if (methods.count("parametrix")) {
            {
                CsvWriter w(path("parametrix_ray.csv"),
                            {"r", "u0", "theta_inv_sqrt", "abs_diff"});
                auto sol = solve_transport_u0(make_parametrix_geometry(m), 0.9 * kPi, 90);
                for (std::size_t i = 0; i < sol.r.size(); ++i) {
                    double ref = 1.0 / std::sqrt(theta_radial(m, sol.r[i]));
                    w.row({csv_num(sol.r[i]), csv_num(sol.u0[i]), csv_num(ref),
                           csv_num(std::abs(sol.u0[i] - ref))});
                }
            }
            CsvWriter w(path("parametrix_remainder.csv"),
                        {"N", "z_re", "z_im", "residual_L2", "status"});
            const Complex z(-1.0, 0.0);
            for (int depth : {0, 1}) {
                int res = cfg.resolutions.front();
                std::string status = "ok";
                double rl2 = std::nan("");
                try {
                    auto pr = ResolventParametrix::make(m, depth);
                    rl2 = remainder_probe(pr, z, fields[res], bases[res]).residual_l2;
                } catch (const std::exception& e) {
                    status = std::string("not_converged:") + e.what();
                }
                w.row({csv_num(depth), csv_num(z.real()), csv_num(z.imag()), csv_num(rl2),
                       status});
            }
        }
    }

    // summary over the acceptance criteria owned by the touched modules
    std::set<std::string> touched;
    for (const auto& meth : cfg.methods) {
        if (meth == "spectral") touched.insert("spectral");
        if (meth == "heat") touched.insert("heat");
        if (meth == "pv" || meth == "riesz") touched.insert("pvkernel");
        if (meth == "parametrix") touched.insert("parametrix");
    }
    bool all_pass = true;
    {
        CsvWriter w(path("summary.csv"), {"criterion", "module", "pass", "details"});
        for (const auto& def : check_registry()) {
            if (!touched.count(def.module)) continue;
            CheckResult r = def.fn();
            if (!r.pass) all_pass = false;
            std::string det = r.details;
            for (auto& ch : det)
                if (ch == ',') ch = ';';
            w.row({r.name, r.module, r.pass ? "pass" : "fail", det});
            out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.details << "\n";
        }
    }
    return all_pass ? 0 : 2;
}

}  // namespace fraclab
