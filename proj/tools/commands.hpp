// Copyright 2026 The noon-forge Authors
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

#pragma once

// Subcommands of the noon-forge tool. Exit codes: 0 success, 1 a cross-check
// or acceptance criterion failed, 2 bad input.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance_suite.hpp"
#include "cli_io.hpp"
#include "noon/noon.hpp"
#include "reproduction.hpp"

namespace noon::cli {

using Clock = std::chrono::steady_clock;

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitBadInput = 2;

/// "auto" is handled by the caller; accepts "p/q", decimals ("0.25" is kept
/// exact as 1/4) and anything else std::stod reads.
inline Transmission parse_transmission(const std::string &s) {
    if (auto f = parse_fraction(s)) return Transmission(*f);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        throw InvalidInput("bad transmission '" + s + "'");
    }
    if (used != s.size()) throw InvalidInput("bad transmission '" + s + "'");
    const auto dot = s.find('.');
    const bool plain = s.find_first_not_of("0123456789.") == std::string::npos;
    if (plain && dot != std::string::npos) {
        const std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        num::BigInt den = 1;
        for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
        num::ExactRational r(num::BigInt(digits.empty() ? "0" : digits, 10), den);
        r.canonicalize();
        return Transmission(r);
    }
    if (plain) return Transmission(num::ExactRational(num::BigInt(s, 10)));
    return Transmission::from_double(v);
}

inline json exact_json(const num::QuadraticRational &q) {
    return json{{"rational", num::to_string(q.rational)},
                {"irrational", num::to_string(q.irrational)},
                {"radicand", q.radicand.get_str()}};
}

inline json distribution_json(const OutcomeDistribution &d, const std::string &variable) {
    json j;
    j["set"] = std::string(set_name(d.set));
    j["engine"] = std::string(engine_name(d.engine));
    json fixed = json::object();
    for (const auto &[det, m] : d.fixed) fixed["m" + std::string(detector_name(det))] = m;
    j["fixed"] = fixed;
    j["variable"] = variable;
    j["total_probability"] = d.total;
    j["log_total_probability"] = d.log_total;
    j["underflow_flushed"] = d.underflow;
    j["probability"] = d.probability;
    if (!d.exact.empty()) {
        json ex = json::array();
        for (const auto &p : d.exact) ex.push_back(exact_json(p));
        j["exact_joint_probability"] = ex;
    }
    if (d.remaining() > 0) {
        auto q = quality::report(d);
        j["q1"] = q.q1;
        j["q2"] = q.q2;
        j["mean"] = q.mean;
        j["variance"] = q.variance;
    }
    return j;
}

inline std::string distribution_csv(const std::vector<double> &p, const std::string &variable,
                                    const std::vector<double> *extra = nullptr, const std::string &extra_name = "") {
    std::vector<std::string> header{variable, "probability"};
    if (extra) header.push_back(extra_name);
    CsvTable t(header);
    for (std::size_t k = 0; k < p.size(); ++k) {
        std::vector<std::string> row{std::to_string(k), format_double(p[k])};
        if (extra) row.push_back(format_double((*extra)[k]));
        t.add(std::move(row));
    }
    return t.str();
}

/// Writes a CSV curve (or JSON report when the path ends in .json), the
/// manifest, and optionally a gnuplot script.
inline void write_curve(const std::string &out, const std::string &csv, const json &report, const RunManifest &m,
                        Clock::time_point started, bool gnuplot, const std::string &x, const std::string &y,
                        const std::string &title) {
    if (out.empty()) return;
    if (ends_with(out, ".json")) {
        emit(out, report.dump(2) + "\n", m, started);
        return;
    }
    emit(out, csv, m, started);
    if (gnuplot) write_atomic(out + ".gp", gnuplot_script(out, x, y, title));
}

// ---------------------------------------------------------------------------

struct DistOptions {
    int na = 0, nb = 0, m1 = 0, m2 = 0;
    std::optional<int> m9;
    std::string T = "auto";
    std::string xi = "auto";
    std::string theta = "pi/2";
    std::string zeta = "pi/2";
    std::string set = "789";
    std::string engine = "exact";
    std::string out;
    bool gnuplot = false;
};

inline CircuitConfig dist_config(const DistOptions &o, DetectorSet set) {
    CircuitConfig c;
    c.N_alpha = o.na;
    c.N_beta = o.nb;
    c.theta = parse_angle(o.theta);
    c.zeta = parse_angle(o.zeta);
    if (o.xi == "auto") {
        c.xi = set == DetectorSet::Middle ? 0.0 : (o.m1 >= o.m2 ? -1 : 1) * num::rm::pi<double>() / 2;
    } else {
        c.xi = parse_angle(o.xi);
    }
    if (o.T != "auto") {
        c.transmission = parse_transmission(o.T);
    } else if (set == DetectorSet::Output) {
        if (o.m1 + o.m2 == 0) throw InvalidInput("--T auto needs m1 + m2 > 0");
        c.transmission = repro::tuned_config(o.na, o.nb, o.m1, o.m2, *o.m9).transmission;
    } else if (set == DetectorSet::Split) {
        if (o.m1 + o.m2 == 0) throw InvalidInput("--T auto needs m1 + m2 > 0");
        c.transmission = Transmission(feedforward_transmission(o.m1, o.m2));
    }
    c.validate();
    return c;
}

inline int cmd_dist(const DistOptions &o) {
    const auto started = Clock::now();
    const DetectorSet set = parse_set(o.set);
    FixedCounts fixed{{Detector::D1, o.m1}, {Detector::D2, o.m2}};
    Detector free = Detector::D5;
    std::string variable = "m5";
    if (set == DetectorSet::Output || set == DetectorSet::Split) {
        if (!o.m9) throw InvalidInput("--m9 is required for set " + o.set);
        fixed.emplace_back(Detector::D9, *o.m9);
        free = set == DetectorSet::Output ? Detector::D7 : Detector::D5p;
        variable = set == DetectorSet::Output ? "m7" : "m5p";
    } else if (set != DetectorSet::Middle) {
        throw InvalidInput("dist supports sets 56, 5p69 and 789");
    }
    const auto config = dist_config(o, set);
    const Engine engine = parse_engine(o.engine);
    if (engine == Engine::Exact && !config.exactly_representable()) {
        throw InvalidInput("exact engine needs multiples of pi/2 and a rational T; use --engine float");
    }
    auto d = conditional_distribution(config, set, fixed, free, engine);
    double sum = 0;
    for (double p : d.probability) sum += p;
    std::printf("set %s engine %s T %s total_probability %.6g\n", o.set.c_str(), o.engine.c_str(),
                config.transmission.to_string().c_str(), d.total);
    if (d.remaining() > 0) {
        auto q = quality::report(d);
        std::printf("q1 %.6f q2 %.6f\n", q.q1, q.q2);
    }
    RunManifest m;
    m.subcommand = "dist";
    m.engine = o.engine;
    m.parameters = {{"na", o.na}, {"nb", o.nb}, {"m1", o.m1}, {"m2", o.m2}, {"set", o.set},
                    {"T", config.transmission.to_string()}, {"theta", config.theta}, {"xi", config.xi},
                    {"zeta", config.zeta}};
    if (o.m9) m.parameters["m9"] = *o.m9;
    auto report = distribution_json(d, variable);
    report["T"] = config.transmission.to_string();
    write_curve(o.out, distribution_csv(d.probability, variable), report, m, started, o.gnuplot, variable,
                "probability", "P(" + variable + ")");
    if (std::fabs(sum - 1) > 1e-12) {
        std::fprintf(stderr, "normalization check failed: sum = %.17g\n", sum);
        return kExitCheckFailed;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct TableQualityOptions {
    int n = 140;
    std::string rows = "45,5;40,10;35,15;30,20;25,25";
    std::string engine = "float";
    std::string out;
};

inline std::vector<std::pair<int, int>> parse_rows(const std::string &s) {
    std::vector<std::pair<int, int>> rows;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        const auto comma = item.find(',');
        if (comma == std::string::npos) throw InvalidInput("row '" + item + "' is not m1,m2");
        try {
            rows.emplace_back(std::stoi(item.substr(0, comma)), std::stoi(item.substr(comma + 1)));
        } catch (const std::exception &) {
            throw InvalidInput("row '" + item + "' is not m1,m2");
        }
    }
    if (rows.empty()) throw InvalidInput("no rows given");
    return rows;
}

inline int cmd_table_quality(const TableQualityOptions &o) {
    const auto started = Clock::now();
    const auto rows = parse_rows(o.rows);
    const Engine engine = parse_engine(o.engine);
    auto results = par::parallel_map(rows.size(), [&](std::size_t i) {
        return repro::quality_row(o.n, rows[i].first, rows[i].second, engine);
    });
    CsvTable t({"m1", "m2", "m78", "m9_mean", "T", "q1", "q2"});
    std::printf("%5s %5s %5s %7s %7s %7s %7s\n", "m1", "m2", "m78", "<m9>", "T", "q1", "q2");
    for (const auto &r : results) {
        const double T = num::to_double(r.T);
        std::printf("%5d %5d %5d %7d %7.2f %7.3f %7.3f\n", r.m1, r.m2, r.m78, r.m9, T, r.q1, r.q2);
        t.add({std::to_string(r.m1), std::to_string(r.m2), std::to_string(r.m78), std::to_string(r.m9),
               format_double(T), format_double(r.q1), format_double(r.q2)});
    }
    if (!o.out.empty()) {
        RunManifest m;
        m.subcommand = "table-quality";
        m.engine = o.engine;
        m.parameters = {{"n", o.n}, {"rows", o.rows}};
        emit(o.out, t.str(), m, started);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct TableMinNOptions {
    int n = 60;
    std::string rule = "two-decimal";
    std::string engine = "float";
    std::string out;
};

inline int cmd_table_minn(const TableMinNOptions &o) {
    const auto started = Clock::now();
    efficiency::ThresholdRule rule;
    if (o.rule == "two-decimal") {
        rule = efficiency::ThresholdRule::TwoDecimal;
    } else if (o.rule == "strict") {
        rule = efficiency::ThresholdRule::Strict;
    } else {
        throw InvalidInput("--rule must be two-decimal or strict");
    }
    efficiency::check_even(o.n);
    const auto cells = repro::minn_table(o.n, rule, parse_engine(o.engine));
    std::printf("%6s %12s %12s\n", "N_min", "% q1>=0.90", "% q1>=0.95");
    CsvTable t({"N_min", "percent_q1_0.90", "percent_q1_0.95"});
    for (std::size_t i = 0; i + 1 < cells.size(); i += 2) {
        std::printf("%6d %12.3f %12.3f\n", cells[i].cell.N_min, cells[i].computed, cells[i + 1].computed);
        t.add({std::to_string(cells[i].cell.N_min), format_double(cells[i].computed),
               format_double(cells[i + 1].computed)});
    }
    if (!o.out.empty()) {
        RunManifest m;
        m.subcommand = "table-minn";
        m.engine = o.engine;
        m.parameters = {{"n", o.n}, {"rule", o.rule}};
        emit(o.out, t.str(), m, started);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct EfficiencyOptions {
    int n = 60;
    int output_size = 20;  // m78 (corrected) or m56 (uncorrected)
    std::string mode = "corrected";
    std::string engine = "float";
    std::string out;
    std::string cells;
    bool gnuplot = false;
};

inline int cmd_efficiency(const EfficiencyOptions &o) {
    const auto started = Clock::now();
    const Engine engine = parse_engine(o.engine);
    efficiency::EfficiencyReport rep;
    std::string variable;
    if (o.mode == "corrected") {
        rep = efficiency::corrected_sweep(o.n, o.output_size, engine);
        variable = "m7";
    } else if (o.mode == "uncorrected") {
        rep = efficiency::uncorrected_sweep(o.n, o.output_size, engine);
        variable = "m5";
    } else {
        throw InvalidInput("--mode must be corrected or uncorrected");
    }
    auto avg = efficiency::average(rep);
    std::printf("mode %s N %d output %d cells %d\n", o.mode.c_str(), o.n, o.output_size, avg.cells);
    std::printf("q1 %.6f q2 %.6f total_probability %.6g\n", avg.quality.q1, avg.quality.q2, avg.total_probability);
    RunManifest m;
    m.subcommand = "efficiency";
    m.engine = o.engine;
    m.parameters = {{"n", o.n}, {"output_size", o.output_size}, {"mode", o.mode}};
    json report{{"mode", o.mode},       {"N", o.n},
                {"output_size", o.output_size}, {"cells", avg.cells},
                {"q1", avg.quality.q1}, {"q2", avg.quality.q2},
                {"total_probability", avg.total_probability}, {"probability", avg.distribution}};
    write_curve(o.out, distribution_csv(avg.distribution, variable), report, m, started, o.gnuplot, variable,
                "probability", "averaged NOON (" + o.mode + ")");
    if (!o.cells.empty()) {
        CsvTable t({"m1", "m2", "m9", "q1", "q2", "probability"});
        for (const auto &c : rep.rows) {
            t.add({std::to_string(c.m1), std::to_string(c.m2), std::to_string(c.m9), format_double(c.q1),
                   format_double(c.q2), format_double(c.absolute_probability)});
        }
        emit(o.cells, t.str(), m, started);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct FringeOptions {
    int na = 40, nb = 40, m1 = 40, m2 = 40;
    std::string engine = "exact";
    std::string out;
    bool gnuplot = false;
};

inline int cmd_fringes(const FringeOptions &o) {
    const auto started = Clock::now();
    auto fr = metrology::fringe_distribution(o.na, o.nb, o.m1, o.m2, parse_engine(o.engine));
    const int maxima = metrology::count_strict_maxima(fr.distribution.probability);
    std::printf("m78 %d strict_maxima %d max_deviation_from_single_sum %.3g\n", fr.distribution.remaining(), maxima,
                fr.max_deviation);
    RunManifest m;
    m.subcommand = "fringes";
    m.engine = o.engine;
    m.parameters = {{"na", o.na}, {"nb", o.nb}, {"m1", o.m1}, {"m2", o.m2}};
    json report = distribution_json(fr.distribution, "m7");
    report["single_sum"] = fr.single_sum;
    report["strict_maxima"] = maxima;
    report["max_deviation"] = fr.max_deviation;
    write_curve(o.out, distribution_csv(fr.distribution.probability, "m7", &fr.single_sum, "single_sum"), report, m,
                started, o.gnuplot, "m7", "probability", "fringes");
    if (fr.max_deviation > 1e-10) {
        std::fprintf(stderr, "single-sum cross-check failed: %.3g\n", fr.max_deviation);
        return kExitCheckFailed;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct EstimateOptions {
    double chi = 0.1;
    int t = 100;
    int nu = 50;
    std::uint64_t seed = 0;
    int grid = 2048;
    std::string source = "noon";
    int n = 4;  // NOON size for source = noon
    int na = 35, nb = 35, m1 = 22, m2 = 8;
    std::optional<int> m9;
    std::optional<double> halfwidth;
    std::vector<double> prior;  // explicit lo, hi
    std::string out;
};

inline int cmd_estimate(const EstimateOptions &o) {
    const auto started = Clock::now();
    metrology::Likelihood L;
    int m78 = 0;
    json source;
    if (o.source == "noon") {
        m78 = o.n;
        L = metrology::state_likelihood(metrology::noon_state(o.n));
        source = {{"kind", "noon"}, {"n", o.n}};
    } else if (o.source == "circuit") {
        const int N = o.na + o.nb;
        const int m9 = o.m9 ? *o.m9 : feedforward::plan(N, o.m1, o.m2).most_probable_m9;
        m78 = N - o.m1 - o.m2 - m9;
        if (m78 <= 0) throw InvalidInput("no particles left for the probe");
        L = metrology::circuit_likelihood(repro::tuned_config(o.na, o.nb, o.m1, o.m2, m9), o.m1, o.m2, m9);
        source = {{"kind", "circuit"}, {"na", o.na}, {"nb", o.nb}, {"m1", o.m1}, {"m2", o.m2}, {"m9", m9}};
    } else {
        throw InvalidInput("--source must be noon or circuit");
    }
    const double half = o.halfwidth ? *o.halfwidth : 0.9 * num::rm::pi<double>() / (2 * m78);
    metrology::EstimationRun run;
    run.true_chi = o.chi;
    run.prior_lo = o.chi - half;
    run.prior_hi = o.chi + half;
    if (!o.prior.empty()) {
        if (o.prior.size() != 2 || !(o.prior[0] < o.chi && o.chi < o.prior[1])) {
            throw InvalidInput("--prior needs lo,hi bracketing chi");
        }
        run.prior_lo = o.prior[0];
        run.prior_hi = o.prior[1];
    }
    run.t = o.t;
    run.nu = o.nu;
    run.seed = o.seed;
    run.grid = o.grid;
    auto fisher = metrology::classical_fisher(L, o.chi);
    auto est = metrology::bayesian_estimate(run, L, fisher.value);
    std::printf("fisher %.6g rms_error %.6g cramer_rao %.6g ratio %.4f\n", fisher.value, est.rms_error,
                est.cramer_rao_bound, est.rms_error / est.cramer_rao_bound);
    if (fisher.degenerate) std::printf("warning: likelihood is stationary at chi; Fisher information degenerate\n");
    json report{{"source", source},
                {"chi", o.chi},
                {"prior", {run.prior_lo, run.prior_hi}},
                {"t", o.t},
                {"nu", o.nu},
                {"seed", o.seed},
                {"grid", o.grid},
                {"fisher", fisher.value},
                {"fisher_degenerate", fisher.degenerate},
                {"rms_single", est.rms_single},
                {"rms_error", est.rms_error},
                {"cramer_rao_bound", est.cramer_rao_bound},
                {"posterior_rescaled", est.underflow},
                {"estimates", est.estimates}};
    if (!o.out.empty()) {
        RunManifest m;
        m.subcommand = "estimate";
        m.seed = o.seed;
        m.parameters = report;
        m.parameters.erase("estimates");
        emit(o.out, report.dump(2) + "\n", m, started);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct M9Options {
    int na = 0, nb = 0, m1 = 0, m2 = 0;
    std::string T = "auto";
    std::string engine = "exact";
    std::string out;
    bool gnuplot = false;
};

inline int cmd_m9(const M9Options &o) {
    const auto started = Clock::now();
    if (o.m1 + o.m2 == 0 && o.T == "auto") throw InvalidInput("--T auto needs m1 + m2 > 0");
    const Transmission T = o.T == "auto" ? Transmission(feedforward_transmission(o.m1, o.m2)) : parse_transmission(o.T);
    auto d = feedforward::exact_m9_distribution(o.na, o.nb, o.m1, o.m2, T, parse_engine(o.engine));
    const auto plan = feedforward::plan(o.na + o.nb, o.m1, o.m2);
    std::printf("T %s mean %.6f mode %d rounded_estimate %d\n", T.to_string().c_str(), d.mean(), d.mode(),
                plan.most_probable_m9);
    RunManifest m;
    m.subcommand = "m9";
    m.engine = o.engine;
    m.parameters = {{"na", o.na}, {"nb", o.nb}, {"m1", o.m1}, {"m2", o.m2}, {"T", T.to_string()}};
    json report{{"T", T.to_string()}, {"mean", d.mean()}, {"mode", d.mode()}, {"probability", d.probability}};
    write_curve(o.out, distribution_csv(d.probability, "m9"), report, m, started, o.gnuplot, "m9", "probability",
                "P(m9)");
    return kExitOk;
}

struct ProfileOptions {
    int m1 = 0, m2 = 0, m9 = 0;
    int points = 721;
    std::string out;
    bool gnuplot = false;
};

inline int cmd_profile(const ProfileOptions &o) {
    const auto started = Clock::now();
    auto samples = phase::sample_profile([&](double phi) { return phase::q129(phi, o.m1, o.m2, o.m9); }, o.points);
    const double peak = o.m1 + o.m2 + o.m9 > 0 ? phase::peak_phase(o.m1 + o.m9, o.m2) : 0.0;
    std::printf("peak_phase %.6f\n", peak);
    CsvTable t({"phi", "Q"});
    for (const auto &[phi, q] : samples) t.add({format_double(phi), format_double(q)});
    if (!o.out.empty()) {
        RunManifest m;
        m.subcommand = "profile";
        m.parameters = {{"m1", o.m1}, {"m2", o.m2}, {"m9", o.m9}, {"points", o.points}};
        emit(o.out, t.str(), m, started);
        if (o.gnuplot) write_atomic(o.out + ".gp", gnuplot_script(o.out, "phi", "Q", "phase profile"));
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

inline int cmd_selftest(const std::vector<int> &criteria, bool verbose) {
    std::vector<int> ids = criteria;
    if (ids.empty()) {
        for (int k = 1; k <= acceptance::kCriterionCount; ++k) ids.push_back(k);
    }
    int failed = 0;
    for (int id : ids) {
        auto r = acceptance::run_criterion(id);
        acceptance::print(r, stdout, verbose);
        std::fflush(stdout);
        if (!r.pass()) ++failed;
    }
    std::printf("%zu criteria, %d failed\n", ids.size(), failed);
    return failed == 0 ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

inline int run(int argc, char **argv) {
    CLI::App app{"noon-forge: NOON-state circuit datasets and checks"};
    app.set_version_flag("--version", std::string("noon-forge ") + NOON_FORGE_VERSION);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads for sweeps (default: NOON_FORGE_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);
    app.require_subcommand(1);

    std::function<int()> action;

    DistOptions dist;
    auto *sd = app.add_subcommand("dist", "conditional count distribution");
    sd->add_option("--na", dist.na, "particles in source alpha")->required();
    sd->add_option("--nb", dist.nb, "particles in source beta")->required();
    sd->add_option("--m1", dist.m1)->required();
    sd->add_option("--m2", dist.m2)->required();
    sd->add_option("--m9", dist.m9);
    sd->add_option("--T", dist.T, "auto | p/q | decimal");
    sd->add_option("--xi", dist.xi, "auto | angle (pi/2, -pi/2, 0.3)");
    sd->add_option("--theta", dist.theta);
    sd->add_option("--zeta", dist.zeta);
    sd->add_option("--set", dist.set, "56 | 5p69 | 789");
    sd->add_option("--engine", dist.engine, "exact | float | integral");
    sd->add_option("--out", dist.out, "output .csv or .json");
    sd->add_flag("--gnuplot", dist.gnuplot, "also write a gnuplot script");
    sd->callback([&] { action = [&] { return cmd_dist(dist); }; });

    TableQualityOptions tq;
    auto *stq = app.add_subcommand("table-quality", "quality table for equal sources");
    stq->add_option("--n", tq.n);
    stq->add_option("--rows", tq.rows, "\"m1,m2;m1,m2;...\"");
    stq->add_option("--engine", tq.engine);
    stq->add_option("--out", tq.out);
    stq->callback([&] { action = [&] { return cmd_table_quality(tq); }; });

    TableMinNOptions tm;
    auto *stm = app.add_subcommand("table-minn", "selective acceptance table of the uncorrected circuit");
    stm->add_option("--n", tm.n);
    stm->add_option("--rule", tm.rule, "two-decimal | strict");
    stm->add_option("--engine", tm.engine);
    stm->add_option("--out", tm.out);
    stm->callback([&] { action = [&] { return cmd_table_minn(tm); }; });

    EfficiencyOptions eff;
    auto *se = app.add_subcommand("efficiency", "probability-weighted average over side records");
    se->add_option("--n", eff.n);
    auto *o78 = se->add_option("--m78", eff.output_size, "output size (corrected)");
    se->add_option("--m56", eff.output_size, "output size (uncorrected)")->excludes(o78);
    se->add_option("--mode", eff.mode, "corrected | uncorrected");
    se->add_option("--engine", eff.engine);
    se->add_option("--out", eff.out);
    se->add_option("--cells", eff.cells, "per-cell CSV");
    se->add_flag("--gnuplot", eff.gnuplot);
    se->callback([&] { action = [&] { return cmd_efficiency(eff); }; });

    FringeOptions fr;
    auto *sf = app.add_subcommand("fringes", "uncorrected m7 distribution and its single-sum form");
    sf->add_option("--na", fr.na);
    sf->add_option("--nb", fr.nb);
    sf->add_option("--m1", fr.m1);
    sf->add_option("--m2", fr.m2);
    sf->add_option("--engine", fr.engine);
    sf->add_option("--out", fr.out);
    sf->add_flag("--gnuplot", fr.gnuplot);
    sf->callback([&] { action = [&] { return cmd_fringes(fr); }; });

    EstimateOptions est;
    auto *ses = app.add_subcommand("estimate", "Bayesian phase estimation with the probe stage");
    ses->add_option("--chi", est.chi, "true probe phase");
    ses->add_option("--t", est.t, "detections per estimate");
    ses->add_option("--nu", est.nu, "number of estimates");
    ses->add_option("--seed", est.seed);
    ses->add_option("--grid", est.grid);
    ses->add_option("--source", est.source, "noon | circuit");
    ses->add_option("--n", est.n, "NOON size for --source noon");
    ses->add_option("--na", est.na);
    ses->add_option("--nb", est.nb);
    ses->add_option("--m1", est.m1);
    ses->add_option("--m2", est.m2);
    ses->add_option("--m9", est.m9);
    ses->add_option("--halfwidth", est.halfwidth, "prior half-width around chi (default 0.9 pi / (2 m78))");
    ses->add_option("--prior", est.prior, "explicit prior interval lo,hi")->delimiter(',')->expected(2);
    ses->add_option("--out", est.out, "JSON report");
    ses->callback([&] { action = [&] { return cmd_estimate(est); }; });

    M9Options m9o;
    auto *sm = app.add_subcommand("m9", "distribution of m9 given the side counts");
    sm->add_option("--na", m9o.na)->required();
    sm->add_option("--nb", m9o.nb)->required();
    sm->add_option("--m1", m9o.m1)->required();
    sm->add_option("--m2", m9o.m2)->required();
    sm->add_option("--T", m9o.T);
    sm->add_option("--engine", m9o.engine);
    sm->add_option("--out", m9o.out);
    sm->add_flag("--gnuplot", m9o.gnuplot);
    sm->callback([&] { action = [&] { return cmd_m9(m9o); }; });

    ProfileOptions pr;
    auto *sp = app.add_subcommand("profile", "relative-phase profile after side detection");
    sp->add_option("--m1", pr.m1)->required();
    sp->add_option("--m2", pr.m2)->required();
    sp->add_option("--m9", pr.m9);
    sp->add_option("--points", pr.points);
    sp->add_option("--out", pr.out);
    sp->add_flag("--gnuplot", pr.gnuplot);
    sp->callback([&] { action = [&] { return cmd_profile(pr); }; });

    std::vector<int> criteria;
    bool verbose = false;
    auto *st = app.add_subcommand("selftest", "run the acceptance suite");
    st->add_option("--criterion", criteria, "run only these criteria");
    st->add_flag("-v,--verbose", verbose, "list passing sub-checks too");
    st->callback([&] { action = [&] { return cmd_selftest(criteria, verbose); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }
    if (threads > 0) par::set_thread_count(threads);
    try {
        return action();
    } catch (const InvalidInput &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadInput;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCheckFailed;
    }
}

}  // namespace noon::cli
