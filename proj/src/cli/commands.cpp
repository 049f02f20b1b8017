// Copyright 2026 The superres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superres/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "superres/analytics.hpp"
#include "superres/cli/presets.hpp"
#include "superres/errors.hpp"
#include "superres/estimation.hpp"
#include "superres/fisherinfo.hpp"
#include "superres/memoryqubit.hpp"
#include "superres/montecarlo.hpp"

#ifndef SUPERRES_VERSION
#define SUPERRES_VERSION "unknown"
#endif

namespace superres::cli {

namespace {

using json = nlohmann::ordered_json;

Convention parse_convention(const std::string& s) {
    if (s == "physical") {
        return Convention::Physical;
    }
    if (s == "effective") {
        return Convention::Effective;
    }
    throw InputError("field 'convention' must be physical or effective, got '" + s + "'");
}

Sampler parse_sampler(const std::string& s) {
    if (s == "binomial") {
        return Sampler::Binomial;
    }
    if (s == "per-shot") {
        return Sampler::PerShot;
    }
    throw InputError("field 'sampler' must be binomial or per-shot, got '" + s + "'");
}

std::vector<double> sweep(const RunConfig& cfg, const std::string& key, bool log_spacing) {
    std::vector<double> g = parse_grid(cfg.text(key));
    if (log_spacing) {
        if (!(g.front() > 0.0) || !(g.back() > 0.0)) {
            throw InputError("field '" + key + "': a log grid needs positive endpoints");
        }
        return g.size() == 1 ? g : log_spaced(g.front(), g.back(), g.size());
    }
    return g;
}

std::int64_t positive(const RunConfig& cfg, const std::string& key) {
    const std::int64_t v = cfg.integer(key);
    if (v < 1) {
        throw InputError("field '" + key + "' must be positive");
    }
    return v;
}

RunSeed root_seed(const RunConfig& cfg) { return RunSeed{cfg.require_seed(), 0}; }

std::string setting_label(const std::string& key, double v) { return key + "=" + format_double(v); }

// ---------------------------------------------------------------------------

CommandOutput run_prob_scan(const RunConfig& cfg) {
    const double amp = cfg.real("sigma_t");
    const std::string& model = cfg.text("model");
    AmplitudeModel am;
    if (model == "gaussian") {
        am = GaussianIID{amp};
    } else if (model == "bessel") {
        am = FixedAmpUniformPhase{amp};
    } else {
        throw InputError("field 'model' must be gaussian or bessel, got '" + model + "'");
    }
    const TwoToneSignal signal(cfg.real("omega_s_t"), cfg.real("omega_r_t"), am);
    NoiseSpec noise;
    noise.kappa = cfg.real("kappa_t");
    noise.readout_eps = cfg.real("readout_eps");
    noise.floor_eps = cfg.real("floor_eps");
    noise.validate();
    const Convention conv = parse_convention(cfg.text("convention"));
    const std::int64_t shots = cfg.integer("shots");
    if (shots < 0) {
        throw InputError("field 'shots' must be non-negative");
    }
    const auto grid = sweep(cfg, "delta_grid", false);

    CommandOutput out;
    out.table = shots > 0 ? Table({"delta_s_t", "p", "p_hat", "n_ones"}) : Table({"delta_s_t", "p"});
    SimOptions sim{cfg.threads, parse_sampler(cfg.text("sampler")), 0.0};
    const RunSeed seed = shots > 0 ? root_seed(cfg) : RunSeed{};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const BatchSettings s{signal, EffectiveProbe{signal.omega_s() + grid[k], 1.0, conv}, noise};
        const double p = transition_probability(s.signal, s.control, s.noise);
        if (shots > 0) {
            const ShotBatch b = simulate_batch(s, shots, seed.child(k), sim);
            out.table.add_row({grid[k], p, b.frequency(), static_cast<double>(b.n_ones)});
            out.counts.push_back({setting_label("delta_s_t", grid[k]), b.n_shots, b.n_ones});
        } else {
            out.table.add_row({grid[k], p});
        }
    }
    out.summary_json = json{{"points", grid.size()}, {"shots", shots}}.dump();
    return out;
}

CommandOutput run_fisher_scan(const RunConfig& cfg) {
    const double sigma_t = cfg.real("sigma_t");
    const double x = cfg.real("omega_r_t");
    const Convention conv = parse_convention(cfg.text("convention"));
    const auto grid = sweep(cfg, "delta_grid", false);
    std::vector<double> fi(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        fi[k] = fisher_r(grid[k], sigma_t, x, conv).value;
    }
    const auto peak = std::max_element(fi.begin(), fi.end());
    const double fmax = *peak;
    CommandOutput out;
    out.table = Table({"delta_s_t", "fisher_r", "fisher_r_normalized", "lorentzian"});
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double d = grid[k] - kTwoPi;
        out.table.add_row({grid[k], fi[k], fmax > 0.0 ? fi[k] / fmax : 0.0, x * x / (x * x + d * d)});
    }
    out.summary_json = json{{"peak_delta_s_t", grid[static_cast<std::size_t>(peak - fi.begin())]},
                            {"peak_fisher_r", fmax},
                            {"convention", to_string(conv)}}
                           .dump();
    return out;
}

CommandOutput run_mle(const RunConfig& cfg) {
    const double sigma_t = cfg.real("sigma_t");
    const double x = cfg.real("omega_r_t");
    const double hi = cfg.real("omega_r_max_t");
    const Convention conv = parse_convention(cfg.text("convention"));
    const std::int64_t shots = positive(cfg, "shots");
    const auto replicates = static_cast<int>(positive(cfg, "replicates"));
    const auto bins = static_cast<int>(positive(cfg, "bins"));
    const auto detunings = cfg.reals("delta_s_t");
    if (detunings.empty()) {
        throw InputError("field 'delta_s_t' must list at least one detuning");
    }
    const TwoToneSignal signal(cfg.real("omega_s_t"), x, GaussianIID{sigma_t});
    StudyOptions opts;
    opts.threads = cfg.threads;
    opts.sim.sampler = parse_sampler(cfg.text("sampler"));
    const RunSeed seed = root_seed(cfg);

    CommandOutput out;
    out.table = Table({"delta_s_t", "replicate", "n_ones", "estimate_t", "at_boundary"});
    json summary = json::array();
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        const BatchSettings truth{signal, EffectiveProbe{signal.omega_s() + detunings[i], 1.0, conv}, {}};
        const ReplicateStudy st = replicate_mle_1d(truth, shots, replicates, seed.child(i), 0.0, hi, opts);
        std::vector<std::int64_t> hist(static_cast<std::size_t>(bins), 0);
        int boundary = 0;
        for (std::size_t r = 0; r < st.estimates.size(); ++r) {
            const double e = st.estimates[r];
            out.table.add_row({detunings[i], static_cast<double>(r), static_cast<double>(st.n_ones[r]), e,
                               st.at_boundary[r] ? 1.0 : 0.0});
            out.counts.push_back({setting_label("delta_s_t", detunings[i]) + ";replicate=" + std::to_string(r), shots,
                                  st.n_ones[r]});
            const auto b = std::min<std::int64_t>(bins - 1, static_cast<std::int64_t>(e / hi * bins));
            ++hist[static_cast<std::size_t>(std::max<std::int64_t>(0, b))];
            boundary += st.at_boundary[r] ? 1 : 0;
        }
        double predicted = std::nan("");
        try {
            predicted = 1.0 / std::sqrt(fisher_r(detunings[i], sigma_t, x, conv).value * static_cast<double>(shots));
        } catch (const SingularityError&) {
        }
        summary.push_back({{"delta_s_t", detunings[i]},
                           {"truth_t", st.truth},
                           {"rmse_t", st.rmse},
                           {"bias_t", st.bias},
                           {"rmse_over_truth", st.rmse / st.truth},
                           {"cramer_rao_t", predicted},
                           {"fraction_at_boundary", static_cast<double>(boundary) / replicates},
                           {"histogram", {{"lo", 0.0}, {"hi", hi}, {"counts", hist}}}});
    }
    out.summary_json = json{{"shots", shots}, {"replicates", replicates}, {"studies", summary}}.dump();
    return out;
}

CommandOutput run_multiparam(const RunConfig& cfg) {
    const double sigma_t = cfg.real("sigma_t");
    const double x = cfg.real("omega_r_t");
    const std::int64_t shots = positive(cfg, "shots");
    const auto replicates = static_cast<int>(positive(cfg, "replicates"));
    const TwoToneSignal truth(cfg.real("omega_s_t"), x, GaussianIID{sigma_t});
    StudyOptions opts;
    opts.threads = cfg.threads;
    opts.sim.sampler = Sampler::Binomial;
    const MultiparamStudy st = multiparam_study(truth, 1.0, shots, replicates, root_seed(cfg), opts);

    CommandOutput out;
    out.table = Table({"replicate", "omega_r_t", "omega_s_t", "sigma_t", "n_ones_0", "n_ones_1", "n_ones_2"});
    for (std::size_t r = 0; r < st.estimates.size(); ++r) {
        const auto& e = st.estimates[r];
        const auto& n = st.n_ones[r];
        out.table.add_row({static_cast<double>(r), e(0), e(1), e(2), static_cast<double>(n[0]),
                           static_cast<double>(n[1]), static_cast<double>(n[2])});
        for (std::size_t k = 0; k < 3; ++k) {
            out.counts.push_back({"replicate=" + std::to_string(r) + ";" + setting_label("delta_s_t", st.detunings_t[k]),
                                  shots, n[k]});
        }
    }
    const double fr = fisher_r(kTwoPi, sigma_t, x, Convention::Physical).value;
    out.summary_json = json{{"detunings_t", st.detunings_t},
                            {"rmse", {st.rmse(0), st.rmse(1), st.rmse(2)}},
                            {"predicted_rmse_omega_r_t", predicted_multiparam_error(fr, 3 * shots)},
                            {"omega_r_over_rmse", x / st.rmse(0)}}
                           .dump();
    return out;
}

double readout_fisher(double sigma_t, double x, double eps, Convention c) {
    auto p = [&](double w) { return p_readout(ramsey_probability(w, kTwoPi, sigma_t, c), eps); };
    const double h = 1e-3 * x;
    return binary_fisher(p(x), (p(x + h) - p(x - h)) / (2.0 * h));
}

CommandOutput run_noise_sweep(const RunConfig& cfg) {
    const std::string& kind = cfg.text("kind");
    const bool log_grid = cfg.flag("log_grid");
    const auto grid = sweep(cfg, "grid", log_grid);
    const Convention conv = parse_convention(cfg.text("convention"));
    CommandOutput out;
    json summary{{"kind", kind}};
    if (kind == "floor" || kind == "readout") {
        const double sigma_t = cfg.real("sigma_t");
        out.table = Table({"eps", "omega_r_t", "fisher_r", "fisher_r_normalized"});
        json thresholds = json::array();
        for (const double x : cfg.reals("omega_r_t")) {
            std::vector<double> f;
            for (const double eps : grid) {
                f.push_back(kind == "floor" ? fisher_with_floor(sigma_t, x, eps, conv).value
                                            : readout_fisher(sigma_t, x, eps, conv));
            }
            const double fmax = *std::max_element(f.begin(), f.end());
            for (std::size_t k = 0; k < grid.size(); ++k) {
                out.table.add_row({grid[k], x, f[k], fmax > 0.0 ? f[k] / fmax : 0.0});
            }
            thresholds.push_back(
                {{"omega_r_t", x}, {"half_max_eps", sigma_t * sigma_t * x * x / (2.0 * kPi * kPi)}});
        }
        summary["predicted"] = thresholds;
    } else if (kind == "dephasing") {
        const double sigma = cfg.real("sigma");
        const double omega_r = cfg.real("omega_r");
        const double kappa = cfg.real("kappa");
        out.table = Table({"t", "fisher_r", "fisher_r_per_time"});
        for (const double t : grid) {
            const double f = t * t * fisher_dephasing(sigma * t, omega_r * t, kappa * t).value;
            out.table.add_row({t, f, f / t});
        }
        summary["minimal_time"] = std::cbrt(kappa / (sigma * sigma * omega_r * omega_r));
    } else if (kind == "ou") {
        const double sigma_n = cfg.real("sigma_n");
        const std::int64_t paths = positive(cfg, "paths");
        // The leading-order floor refers to free evolution over one period of omega_s.
        const double t = 1.0;
        const TwoToneSignal s(kTwoPi / t, 0.0, GaussianIID{0.0});
        const RunSeed seed = root_seed(cfg);
        out.table = Table({"gamma_t", "floor_mc", "floor_mc_se", "floor_leading_order"});
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const OuParams ou{grid[k] / t, sigma_n};
            const auto phases = simulate_ou_phases(s, ou, FreeEvolution{t}, paths, seed.child(k));
            double m = 0.0;
            double m2 = 0.0;
            for (const double phi : phases) {
                const double v = std::sin(phi) * std::sin(phi);
                m += v;
                m2 += v * v;
            }
            m /= static_cast<double>(paths);
            const double var = std::max(0.0, m2 / static_cast<double>(paths) - m * m);
            out.table.add_row({grid[k], m, std::sqrt(var / static_cast<double>(paths)),
                               ou_noise_floor(sigma_n, ou.gamma, t).eps});
        }
    } else {
        throw InputError("field 'kind' must be floor, readout, dephasing or ou, got '" + kind + "'");
    }
    out.summary_json = summary.dump();
    return out;
}

CommandOutput run_qft(const RunConfig& cfg) {
    const auto n = static_cast<int>(positive(cfg, "n"));
    const auto m = static_cast<int>(positive(cfg, "m"));
    const double omega_s = 1.0;
    const double tau = kTwoPi / (n * omega_s);
    const double big_t = kTwoPi * m / omega_s;
    const double sigma = cfg.real("sigma_tau") / tau;
    const double omega_r = cfg.real("omega_r_T") / big_t;
    const TwoToneSignal s(omega_s, omega_r, GaussianIID{sigma});
    const RunSeed seed = root_seed(cfg);
    Rng rng(seed.child(0));
    const Eigen::VectorXd spectrum = dft_spectrum(build_phase_state(draw_quadratures(s.amplitude(), rng), s, n, m));
    const McMean mc = qft_nonharmonic_mc(s, n, m, positive(cfg, "draws"), seed.child(1), cfg.threads);
    CommandOutput out;
    out.table = spectrum_table(spectrum, m);
    const double x = sigma * tau * omega_r * big_t;
    out.summary_json = json{{"nonharmonic_first_draw", nonharmonic_probability(spectrum, n, m)},
                            {"nonharmonic_mean", mc.mean},
                            {"nonharmonic_se", mc.std_error},
                            {"nonharmonic_expected", x * x / 6.0},
                            {"fisher_r", qft_fisher(sigma, tau, big_t)},
                            {"draws", mc.draws}}
                           .dump();
    return out;
}

CommandOutput run_correlation(const RunConfig& cfg) {
    const double omega_s = 1.0;
    const double tau = cfg.real("tau_periods") * kTwoPi / omega_s;
    const double big_t = static_cast<double>(positive(cfg, "periods")) * kTwoPi / omega_s;
    const double sigma = cfg.real("sigma_tau") / tau;
    const double omega_r = cfg.real("omega_r_T") / big_t;
    const TwoToneSignal s(omega_s, omega_r, GaussianIID{sigma});
    const McMean mc = correlation_mc(s, tau, big_t, positive(cfg, "draws"), root_seed(cfg), cfg.threads);
    CommandOutput out;
    out.table = Table({"omega_r_T", "p_mc", "p_mc_se", "p_closed_form", "fisher_r"});
    out.table.add_row({omega_r * big_t, mc.mean, mc.std_error,
                       correlation_probability(sigma, tau, big_t, omega_s, omega_r),
                       correlation_fisher(sigma, tau, big_t, omega_s)});
    out.summary_json = json{{"draws", mc.draws}, {"fisher_ratio_to_qft", correlation_fisher(sigma, tau, big_t, omega_s) /
                                                                           qft_fisher(sigma, tau, big_t)}}
                           .dump();
    return out;
}

CommandOutput run_criterion(const RunConfig& cfg) {
    if (cfg.text("family") != "ramsey") {
        throw InputError("field 'family' must be ramsey, got '" + cfg.text("family") + "'");
    }
    const double lo = cfg.real("sep_lo");
    const double hi = cfg.real("sep_hi");
    const auto points = static_cast<std::size_t>(positive(cfg, "points"));
    if (!(lo > 0.0) || !(hi > lo)) {
        throw InputError("fields 'sep_lo' and 'sep_hi' need 0 < sep_lo < sep_hi");
    }
    const auto family = ramsey_family(cfg.real("delta_s_t"), cfg.real("sigma_t"),
                                      parse_convention(cfg.text("convention")), 1e-3 * lo);
    const auto grid = log_spaced(lo, hi, points);
    const auto r = superres_criterion<double>(family, Eigen::VectorXd::Zero(1), 0, grid);
    CommandOutput out;
    out.table = Table({"exponent_k", "limit_fi", "verdict", "eigen_index"});
    out.table.add_row({r.exponent_defined ? r.exponent_k : std::nan(""), r.limit_fi, r.verdict ? 1.0 : 0.0,
                       static_cast<double>(r.eigen_index)});
    out.summary_json = json{{"verdict", r.verdict}, {"exponent_k", r.exponent_k}, {"limit_fi", r.limit_fi}}.dump();
    return out;
}

using Runner = CommandOutput (*)(const RunConfig&);

struct Registered {
    CommandSpec spec;
    Runner runner;
};

const std::vector<Registered>& registry() {
    static const std::vector<Registered> r = [] {
        const TomlValue grid = std::string("4.5:8.0:400");
        std::vector<Registered> v;
        v.push_back({{"prob-scan",
                      "transition probability against detuning, optionally sampled",
                      {{"sigma_t", 1.0, "amplitude times t (sigma, or Omega for the bessel model)"},
                       {"omega_r_t", 0.01, "half separation times t"},
                       {"omega_s_t", 1000.0, "center frequency times t"},
                       {"delta_grid", grid, "detuning grid delta_s t as start:stop:count"},
                       {"model", std::string("gaussian"), "amplitude model: gaussian or bessel"},
                       {"convention", std::string("physical"), "physical or effective"},
                       {"kappa_t", 0.0, "probe dephasing rate times t"},
                       {"readout_eps", 0.0, "readout flip probability"},
                       {"floor_eps", 0.0, "additive probability floor"},
                       {"shots", std::int64_t{0}, "shots per point; 0 disables sampling"},
                       {"sampler", std::string("binomial"), "binomial or per-shot"}}},
                     run_prob_scan});
        v.push_back({{"fisher-scan",
                      "separation information against detuning",
                      {{"sigma_t", 5.0, "amplitude times t"},
                       {"omega_r_t", 0.01, "half separation times t"},
                       {"delta_grid", grid, "detuning grid delta_s t as start:stop:count"},
                       {"convention", std::string("physical"), "physical or effective"}}},
                     run_fisher_scan});
        v.push_back({{"mle",
                      "replicated maximum-likelihood separation estimates",
                      {{"sigma_t", 5.0, "amplitude times t"},
                       {"omega_r_t", 0.01, "half separation times t"},
                       {"omega_s_t", 1000.0, "center frequency times t"},
                       {"delta_s_t", TomlArray{kTwoPi}, "detunings delta_s t, comma separated"},
                       {"shots", std::int64_t{1000000}, "shots per replicate"},
                       {"replicates", std::int64_t{200}, "replicates per detuning"},
                       {"omega_r_max_t", 0.2, "upper search bound on omega_r t"},
                       {"convention", std::string("physical"), "physical or effective"},
                       {"sampler", std::string("binomial"), "binomial or per-shot"},
                       {"bins", std::int64_t{40}, "histogram bins"}}},
                     run_mle});
        v.push_back({{"multiparam",
                      "joint estimation from three detunings",
                      {{"sigma_t", 5.0, "amplitude times t"},
                       {"omega_r_t", 0.01, "half separation times t"},
                       {"omega_s_t", 1000.0, "center frequency times t"},
                       {"shots", std::int64_t{300000}, "shots per detuning"},
                       {"replicates", std::int64_t{100}, "replicates"}}},
                     run_multiparam});
        v.push_back({{"noise-sweep",
                      "information under noise floors, readout errors, dephasing or OU drift",
                      {{"kind", std::string("floor"), "floor, readout, dephasing or ou"},
                       {"sigma_t", 1.0, "amplitude times t (floor, readout)"},
                       {"omega_r_t", TomlArray{0.001, 0.01, 0.1}, "separations (floor, readout)"},
                       {"grid", std::string("1e-10:1e-1:91"), "sweep: eps, t (dephasing) or gamma t (ou)"},
                       {"log_grid", true, "geometric spacing between the grid endpoints"},
                       {"convention", std::string("effective"), "physical or effective"},
                       {"sigma", 10.0, "amplitude (dephasing)"},
                       {"omega_r", 1.0, "half separation (dephasing)"},
                       {"kappa", 1.0, "dephasing rate (dephasing)"},
                       {"sigma_n", 0.3, "OU diffusion with t = 1 (ou)"},
                       {"paths", std::int64_t{2000}, "OU paths per point (ou)"}}},
                     run_noise_sweep});
        v.push_back({{"qft",
                      "memory-register Fourier scheme: spectrum of one draw and the mean nonharmonic weight",
                      {{"n", std::int64_t{8}, "samples per signal period"},
                       {"m", std::int64_t{32}, "signal periods"},
                       {"sigma_tau", 1.0, "sigma times the window length"},
                       {"omega_r_T", 0.05, "half separation times the total time"},
                       {"draws", std::int64_t{20000}, "amplitude draws"}}},
                     run_qft});
        v.push_back({{"correlation",
                      "single memory qubit correlation scheme",
                      {{"sigma_tau", 1.0, "sigma times the window length"},
                       {"tau_periods", 0.025, "window length in signal periods"},
                       {"periods", std::int64_t{16}, "window separation in signal periods"},
                       {"omega_r_T", 0.05, "half separation times the separation"},
                       {"draws", std::int64_t{20000}, "amplitude draws"}}},
                     run_correlation});
        v.push_back({{"criterion",
                      "eigenvalue-scaling superresolution test on a built-in family",
                      {{"family", std::string("ramsey"), "built-in family (ramsey)"},
                       {"delta_s_t", kTwoPi, "detuning times t"},
                       {"sigma_t", 1.0, "amplitude times t"},
                       {"convention", std::string("physical"), "physical or effective"},
                       {"sep_lo", 1e-4, "smallest separation omega_r t"},
                       {"sep_hi", 1e-2, "largest separation omega_r t"},
                       {"points", std::int64_t{9}, "log-spaced separations"}}},
                     run_criterion});
        return v;
    }();
    return r;
}

std::string dashed(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw InputError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw InputError("field 'out': cannot write '" + path + "'");
    }
    f << text;
}

struct SubcommandState {
    const CommandSpec* spec = nullptr;
    CLI::App* app = nullptr;
    std::string config;
    std::string preset;
    std::string seed;
    std::string out;
    std::string format;
    std::string record;
    int threads = 0;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
};

RunConfig resolve(const SubcommandState& st) {
    RunConfig cfg = RunConfig::defaults(*st.spec);
    if (!st.preset.empty()) {
        const auto body = find_preset(st.preset);
        if (!body) {
            std::string names;
            for (const auto& n : preset_names()) {
                names += " " + n;
            }
            throw InputError("field 'preset': unknown preset '" + st.preset + "' (available:" + names + ")");
        }
        cfg.merge(parse_toml(std::string(*body)), *st.spec, "preset '" + st.preset + "'");
    }
    if (!st.config.empty()) {
        cfg.merge(parse_toml(read_file(st.config)), *st.spec, st.config);
    }
    if (!st.seed.empty()) {
        std::uint64_t s = 0;
        const auto r = std::from_chars(st.seed.data(), st.seed.data() + st.seed.size(), s);
        if (r.ec != std::errc() || r.ptr != st.seed.data() + st.seed.size() ||
            s > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            throw InputError("field 'seed': expects an integer in [0, 2^63)");
        }
        cfg.seed = s;
    }
    if (st.threads > 0) {
        cfg.threads = st.threads;
    }
    if (!st.format.empty()) {
        cfg.format = st.format;
    }
    if (!st.out.empty()) {
        cfg.out = st.out;
    }
    for (const auto& [key, opt] : st.options) {
        if (opt->count() > 0) {
            cfg.set_from_text(*st.spec, key, st.values.at(key));
        }
    }
    cfg.validate();
    return cfg;
}

int report(const std::exception& e, int code) {
    std::cerr << "error: " << e.what() << '\n';
    return code;
}

}  // namespace

const std::vector<CommandSpec>& command_specs() {
    static const std::vector<CommandSpec> specs = [] {
        std::vector<CommandSpec> v;
        for (const auto& r : registry()) {
            v.push_back(r.spec);
        }
        return v;
    }();
    return specs;
}

const CommandSpec& command_spec(const std::string& name) {
    for (const auto& s : command_specs()) {
        if (s.name == name) {
            return s;
        }
    }
    throw InputError("unknown subcommand '" + name + "'");
}

CommandOutput execute(const RunConfig& cfg) {
    for (const auto& r : registry()) {
        if (r.spec.name == cfg.command) {
            return r.runner(cfg);
        }
    }
    throw InputError("unknown subcommand '" + cfg.command + "'");
}

std::string render(const CommandOutput& out, const std::string& format) {
    if (format == "csv") {
        return out.table.to_csv();
    }
    if (format != "json") {
        throw InputError("field 'format' must be csv or json");
    }
    json rows = json::array();
    for (const auto& row : out.table.rows()) {
        rows.push_back(row);
    }
    json j{{"summary", json::parse(out.summary_json)},
           {"table", {{"columns", out.table.columns()}, {"rows", rows}}}};
    return j.dump(2) + "\n";
}

std::string digest(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentRecord make_record(const RunConfig& cfg, const CommandOutput& out, double seconds) {
    ExperimentRecord r;
    r.version = SUPERRES_VERSION;
    r.command = cfg.command;
    r.master_seed = cfg.seed.value_or(0);
    RunConfig snapshot = cfg;
    snapshot.out.clear();
    r.config_toml = serialize_toml(snapshot.to_toml());
    r.wall_clock_seconds = seconds;
    r.created_utc = utc_now();
    r.counts = out.counts;
    r.output_digest = digest(render(out, cfg.format));
    return r;
}

std::string replay_record(const ExperimentRecord& rec, int threads) {
    const CommandSpec& spec = command_spec(rec.command);
    RunConfig cfg = RunConfig::from_toml(parse_toml(rec.config_toml), spec);
    cfg.seed = rec.master_seed;
    if (threads > 0) {
        cfg.threads = threads;
    }
    const CommandOutput out = execute(cfg);
    if (out.counts.size() != rec.counts.size()) {
        return "count entries differ: recorded " + std::to_string(rec.counts.size()) + ", replayed " +
               std::to_string(out.counts.size());
    }
    for (std::size_t i = 0; i < out.counts.size(); ++i) {
        if (!(out.counts[i] == rec.counts[i])) {
            return "counts differ at entry " + std::to_string(i) + " (" + rec.counts[i].setting + ")";
        }
    }
    if (counts_text(out.counts) != counts_text(rec.counts)) {
        return "serialized counts differ";
    }
    if (!rec.output_digest.empty() && digest(render(out, cfg.format)) != rec.output_digest) {
        return "output digest differs";
    }
    return {};
}

int run(int argc, char** argv) {
    CLI::App app{"superres: two-tone spectral superresolution toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SUPERRES_VERSION);

    std::vector<std::unique_ptr<SubcommandState>> states;
    for (const auto& spec : command_specs()) {
        auto st = std::make_unique<SubcommandState>();
        st->spec = &spec;
        st->app = app.add_subcommand(spec.name, spec.summary);
        CLI::App* sub = st->app;
        sub->add_option("--config", st->config, "TOML config file");
        sub->add_option("--preset", st->preset, "built-in preset");
        sub->add_option("--seed", st->seed, "master seed (required for stochastic runs)");
        sub->add_option("--out", st->out, "output path (default stdout)");
        sub->add_option("--format", st->format, "csv or json");
        sub->add_option("--threads", st->threads, "worker threads");
        sub->add_option("--record", st->record, "write an experiment record to this path");
        for (const auto& p : spec.params) {
            st->options[p.key] = sub->add_option("--" + dashed(p.key), st->values[p.key],
                                                 p.help + " [" + format_toml_value(p.fallback) + "]");
        }
        states.push_back(std::move(st));
    }
    CLI::App* record = app.add_subcommand("record", "experiment records");
    record->require_subcommand(1);
    CLI::App* replay = record->add_subcommand("replay", "rerun a record and compare its counts");
    std::string replay_path;
    int replay_threads = 0;
    replay->add_option("path", replay_path, "record file")->required();
    replay->add_option("--threads", replay_threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (replay->parsed()) {
            const ExperimentRecord rec = ExperimentRecord::load(replay_path);
            const std::string diff = replay_record(rec, replay_threads);
            if (!diff.empty()) {
                std::cerr << "replay mismatch: " << diff << '\n';
                return 3;
            }
            std::cout << "replay ok: " << rec.counts.size() << " count entries identical\n";
            return 0;
        }
        for (const auto& st : states) {
            if (!st->app->parsed()) {
                continue;
            }
            const RunConfig cfg = resolve(*st);
            const auto start = std::chrono::steady_clock::now();
            const CommandOutput out = execute(cfg);
            const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            write_output(cfg.out, render(out, cfg.format));
            if (cfg.format == "csv") {
                std::cerr << out.summary_json << '\n';
            }
            if (!st->record.empty()) {
                make_record(cfg, out, seconds).save(st->record);
            }
            return 0;
        }
    } catch (const InputError& e) {
        return report(e, 2);
    } catch (const ValidationError& e) {
        return report(e, 2);
    } catch (const DomainError& e) {
        return report(e, 2);
    } catch (const PreconditionError& e) {
        return report(e, 2);
    } catch (const SingularSpacingError& e) {
        return report(e, 2);
    } catch (const std::exception& e) {
        return report(e, 3);
    }
    return 2;
}

}  // namespace superres::cli
