// levy-emm: command-line front end over the levy_emm library.

#include "spec_io.hpp"

#include "levy_emm/errors.hpp"
#include "levy_emm/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

using namespace levy_emm;
using io::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(ErrorCategory c) { return c == ErrorCategory::Validation ? kExitValidation : kExitNumerical; }

Json error_json(const std::string& name, ErrorCategory c, const std::string& message) {
    return Json{{"name", name},
                {"category", c == ErrorCategory::Validation ? "validation" : "numerical"},
                {"message", message}};
}

struct Options {
    std::string spec_path;
    std::string out;
    QuadratureSettings q;
    RootSettings r;

    std::string market;      // solve
    int n_max = 4096;        // approx
    std::string penalty = "default_quadratic";
    bool csv = false;
    std::string direction;   // convert
    long long samples = 100000; // mc-check
    std::uint64_t seed = 0;
    std::string kappa = "auto";
    int zn = 0;
    double epsilon = 0.01;
    std::string small_jumps = "gaussian";
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("spec", o.spec_path, "model spec (JSON)")->required();
    cmd->add_option("--out", o.out, "write the report to this file instead of stdout");
    cmd->add_option("--abs-tol", o.q.abs_tol, "absolute quadrature tolerance")->capture_default_str();
    cmd->add_option("--rel-tol", o.q.rel_tol, "relative quadrature tolerance")->capture_default_str();
    cmd->add_option("--max-subdivisions", o.q.max_subdivisions, "quadrature refinement levels")->capture_default_str();
    cmd->add_option("--zero-window", o.q.zero_window, "Taylor window around 0")->capture_default_str();
    cmd->add_option("--inner-cut", o.q.inner_cut, "panel split radius")->capture_default_str();
    cmd->add_option("--kappa-tol", o.r.kappa_tol, "root tolerance in kappa")->capture_default_str();
    cmd->add_option("--m-tol", o.r.m_tol, "tolerance for m(0) = 0")->capture_default_str();
    cmd->add_option("--max-abs-kappa", o.r.max_abs_kappa, "bracket search limit")->capture_default_str();
}

MarketKind market_for(const io::ModelSpec& s, const std::string& flag) {
    if (flag.empty()) return s.market;
    if (flag == "linear") return MarketKind::Linear;
    if (flag == "geometric") return MarketKind::Geometric;
    throw InvalidArgument("--market: expected 'linear' or 'geometric'");
}

// Triplet of the process whose martingale property is tested.
LevyTriplet linear_triplet(const io::ModelSpec& s, MarketKind m, const QuadratureSettings& q) {
    return m == MarketKind::Geometric ? geometric_to_linear(s.triplet, q) : s.triplet;
}

struct Outcome {
    Json result;
    int exit_code = kExitOk;
    std::optional<std::string> csv;
    std::optional<std::uint64_t> seed;
};

Outcome cmd_solve(const io::ModelSpec& s, const Options& o) {
    const MarketKind m = market_for(s, o.market);
    const MemmReport rep = memm_report(s.triplet, s.T, m, o.q, o.r);
    Outcome out;
    out.result = io::memm_report_to_json(rep);
    if (rep.error_category) out.exit_code = exit_code_for(*rep.error_category);
    return out;
}

Outcome cmd_domain(const io::ModelSpec& s, const Options& o) {
    const LevyTriplet t = linear_triplet(s, s.market, o.q);
    Outcome out;
    out.result["process"] = s.market == MarketKind::Geometric ? "stochastic_logarithm" : "L";
    const ExpMomentInterval I = exp_moment_interval(t, o.q);
    out.result["I"] = io::interval_to_json(I);
    const Monotonicity mono = is_monotone(t, o.q);
    out.result["monotonicity"] = to_string(mono);
    if (mono == Monotonicity::NotMonotone) {
        out.result["esscher_parameter"] = io::parameter_status_to_json(classify_esscher_parameter(t, s.T, o.q, o.r));
    } else {
        out.result["esscher_parameter"] = nullptr;
        out.result["note"] = "monotone paths: arbitrage market, no martingale measure";
    }
    return out;
}

Outcome cmd_approx(const io::ModelSpec& s, const Options& o) {
    if (o.n_max < 1) throw InvalidArgument("--n-max must be >= 1");
    const LevyTriplet t = linear_triplet(s, s.market, o.q);
    const PenaltyFamily p = io::parse_penalty(o.penalty);
    const ApproxTrace tr = approx_sequence(t, s.T, p, default_schedule(o.n_max), o.q, o.r);
    Outcome out;
    out.result["penalty"] = io::penalty_to_string(p);
    out.result["n_max"] = o.n_max;
    out.result["trace"] = io::trace_to_json(tr);
    const ApproxStep& last = tr.steps.back();
    out.result["final_gap"] = Json{{"kappa", io::number(std::abs(last.kappa_n - tr.kappa_limit))},
                                   {"entropy_vs_P", io::number(std::abs(last.entropy_vs_P - tr.entropy_limit))}};
    bool failed = false;
    for (const ApproxStep& st : tr.steps) failed = failed || st.error.has_value();
    out.result["step_errors"] = failed;
    if (o.csv) out.csv = io::trace_to_csv(tr);
    return out;
}

Outcome cmd_convert(const io::ModelSpec& s, const Options& o) {
    io::ModelSpec c = s;
    if (o.direction == "g2l") {
        c.triplet = geometric_to_linear(s.triplet, o.q);
        c.market = MarketKind::Linear;
    } else if (o.direction == "l2g") {
        c.triplet = linear_to_geometric(s.triplet, o.q);
        c.market = MarketKind::Geometric;
    } else {
        throw InvalidArgument("--direction: expected 'g2l' or 'l2g'");
    }
    if (c.market == MarketKind::Geometric && s.market == MarketKind::Linear) c.S0 = 1.0;
    Outcome out;
    out.result["direction"] = o.direction;
    out.result["converted_spec"] = io::spec_to_json(c);
    return out;
}

Outcome cmd_mc_check(const io::ModelSpec& s, const Options& o) {
    const LevyTriplet t = linear_triplet(s, s.market, o.q);
    SimConfig cfg;
    cfg.T = s.T;
    cfg.n_samples = o.samples;
    cfg.seed = o.seed;
    cfg.epsilon = o.epsilon;
    cfg.record_jumps = o.zn > 0;
    if (o.small_jumps == "gaussian") cfg.small_jump_mode = SmallJumpMode::GaussianApprox;
    else if (o.small_jumps == "drop") cfg.small_jump_mode = SmallJumpMode::Drop;
    else throw InvalidArgument("--small-jumps: expected 'gaussian' or 'drop'");

    Outcome out;
    out.seed = o.seed;
    double kappa;
    std::string source;
    if (o.kappa == "auto") {
        const EsscherResult res = solve_linear_emm(t, s.T, o.q, o.r);
        if (res.status == EmmStatus::ArbitrageMarket) throw ArbitrageMarket(res.diagnostic);
        if (res.kappa0) {
            kappa = *res.kappa0;
            source = "esscher_parameter";
        } else {
            kappa = res.minimum->kappa0;
            source = "mgf_minimizer";
        }
    } else {
        char* end = nullptr;
        kappa = std::strtod(o.kappa.c_str(), &end);
        if (o.kappa.empty() || end != o.kappa.c_str() + o.kappa.size() || !std::isfinite(kappa))
            throw InvalidArgument("--kappa: expected 'auto' or a finite number");
        source = "flag";
    }
    const SamplePack pack = sample_terminal(t, cfg, o.q);
    out.result["process"] = s.market == MarketKind::Geometric ? "stochastic_logarithm" : "L";
    out.result["kappa"] = kappa;
    out.result["kappa_source"] = source;
    out.result["samples"] = cfg.n_samples;
    out.result["epsilon"] = cfg.epsilon;
    out.result["small_jump_mode"] = to_string(cfg.small_jump_mode);
    out.result["jump_threshold"] = pack.jump_threshold;
    out.result["rng"] = pack.rng;

    const Estimate d = martingale_defect(pack, kappa);
    out.result["martingale_defect"] = Json{{"estimate", d.value},
                                          {"std_error", d.std_error},
                                          {"z_score", io::number(d.std_error > 0 ? d.value / d.std_error : 0.0)},
                                          {"ess", d.ess}};
    const Estimate e = entropy_estimate(pack, kappa, t, s.T, o.q);
    const double analytic = esscher_entropy(t, s.T, kappa, o.q);
    out.result["entropy"] = Json{{"estimate", e.value},
                                {"std_error", e.std_error},
                                {"analytic", analytic},
                                {"z_score", io::number(e.std_error > 0 ? (e.value - analytic) / e.std_error : 0.0)},
                                {"ess", e.ess}};
    if (o.zn > 0) {
        const PathwiseZn z = pathwise_log_zn(pack, PenaltyFamily::default_quadratic(), o.zn, t.nu, s.T, o.q);
        out.result["zn"] = Json{{"n", o.zn},
                               {"mean", z.mean_zn},
                               {"std_error", z.se_zn},
                               {"z_score", io::number(z.se_zn > 0 ? (z.mean_zn - 1.0) / z.se_zn : 0.0)},
                               {"max", z.max_zn},
                               {"bound", z.bound},
                               {"bound_holds", z.bound_holds}};
    } else {
        out.result["zn"] = nullptr;
    }
    return out;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw InvalidArgument("cannot write '" + path + "'");
    f << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Esscher and minimal-entropy martingale measures for Lévy markets"};
    app.require_subcommand(1);
    app.set_version_flag("--version", io::kToolVersion);
    Options o;

    auto* solve = app.add_subcommand("solve", "Esscher martingale measure and MEMM verdict");
    add_common(solve, o);
    solve->add_option("--market", o.market, "override the market kind: linear | geometric");

    auto* domain = app.add_subcommand("domain", "exponential-moment interval and Esscher classification");
    add_common(domain, o);

    auto* approx = app.add_subcommand("approx", "approximation sequence of tempered markets");
    add_common(approx, o);
    approx->add_option("--n-max", o.n_max, "largest n in the schedule 1, 2, 4, ...")->capture_default_str();
    approx->add_option("--penalty", o.penalty, "default_quadratic | power:<exponent>")->capture_default_str();
    approx->add_flag("--csv", o.csv, "print the trace as CSV instead of the JSON report");

    auto* convert = app.add_subcommand("convert", "log-price <-> stochastic logarithm triplets");
    add_common(convert, o);
    convert->add_option("--direction", o.direction, "g2l | l2g")->required();

    auto* mc = app.add_subcommand("mc-check", "Monte Carlo cross-check");
    add_common(mc, o);
    mc->add_option("--samples", o.samples, "number of paths")->capture_default_str();
    mc->add_option("--seed", o.seed, "generator seed")->capture_default_str();
    mc->add_option("--kappa", o.kappa, "auto | <value>")->capture_default_str();
    mc->add_option("--zn", o.zn, "also evaluate Z^n_T pathwise for this n (default quadratic penalty)");
    mc->add_option("--epsilon", o.epsilon, "small-jump cutoff")->capture_default_str();
    mc->add_option("--small-jumps", o.small_jumps, "gaussian | drop")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    const auto start = std::chrono::steady_clock::now();

    Json report;
    report["tool"] = "levy-emm";
    report["version"] = io::kToolVersion;
    report["command"] = name;
    report["units"] = "nats";
    report["spec_path"] = o.spec_path;
    report["spec"] = nullptr;
    report["seed"] = nullptr;
    report["threads"] = configured_threads();
    report["settings"] = io::settings_to_json(o.q, o.r);

    int code = kExitOk;
    std::optional<std::string> csv;
    try {
        o.q.validate();
        const io::ModelSpec spec = io::load_spec(o.spec_path);
        report["spec"] = io::spec_to_json(spec);
        Outcome out;
        if (name == "solve") out = cmd_solve(spec, o);
        else if (name == "domain") out = cmd_domain(spec, o);
        else if (name == "approx") out = cmd_approx(spec, o);
        else if (name == "convert") out = cmd_convert(spec, o);
        else out = cmd_mc_check(spec, o);
        if (out.seed) report["seed"] = *out.seed;
        report["status"] = out.exit_code == kExitOk ? "ok" : "error";
        report["result"] = out.result;
        report["error"] = nullptr;
        code = out.exit_code;
        if (code != kExitOk && out.result.contains("solver_error")) {
            const bool validation = code == kExitValidation;
            report["error"] = error_json(out.result["solver_error"]["name"].get<std::string>(),
                                         validation ? ErrorCategory::Validation : ErrorCategory::Numerical,
                                         out.result["solver_error"]["message"].get<std::string>());
        }
        csv = out.csv;
    } catch (const LevyError& e) {
        report["status"] = "error";
        report["result"] = nullptr;
        report["error"] = error_json(e.name(), e.category(), e.what());
        code = exit_code_for(e.category());
    } catch (const std::exception& e) {
        report["status"] = "error";
        report["result"] = nullptr;
        report["error"] = error_json("InternalError", ErrorCategory::Numerical, e.what());
        code = kExitNumerical;
    }
    report["exit_code"] = code;
    report["timings"] = Json{
        {"total_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};

    try {
        if (csv) emit(*csv, o.out);
        else emit(report.dump(2) + "\n", o.out);
    } catch (const LevyError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    }
    if (code != kExitOk && report["error"].is_object())
        std::cerr << "levy-emm: " << report["error"]["name"].get<std::string>() << ": "
                  << report["error"]["message"].get<std::string>() << "\n";
    return code;
}
