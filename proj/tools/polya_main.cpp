#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polya/polya.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

int usage_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return kExitUsage;
}

std::filesystem::path replica_path(const std::filesystem::path& base, std::int64_t r,
                                   std::int64_t replicas) {
    if (replicas == 1) return base;
    char buf[24];
    std::snprintf(buf, sizeof(buf), "_r%03lld", static_cast<long long>(r));
    std::filesystem::path p = base;
    const std::filesystem::path ext = p.extension();
    p.replace_extension();
    p += buf;
    p += ext;
    return p;
}

struct SimulateArgs {
    std::string mode = "growth";
    double alpha = 0.0;
    int stocks = 0;
    std::int64_t steps = 0;
    std::int64_t threshold = 0;
    std::uint64_t seed = 0;
    std::int64_t replicas = 1;
    std::int64_t record_every = 1;
    bool single_move = false;
    std::int64_t top_k = 0;
    std::string trajectory_out;
    std::string trajectory_svg;
    std::string curve_out;
    std::string curve_svg;
    std::string threshold_curve_out;
};

int run_simulate(const SimulateArgs& a) {
    polya::ScenarioConfig cfg{polya::ModelParams(a.alpha, a.stocks),
                              a.mode == "growth" ? polya::ScenarioMode::GrowthOnly
                                                 : polya::ScenarioMode::TwoPhase,
                              a.steps,
                              a.threshold,
                              a.seed,
                              a.record_every,
                              a.single_move};
    polya::validate(cfg);
    const bool want_threshold_curve = !a.threshold_curve_out.empty();
    if (want_threshold_curve && cfg.mode != polya::ScenarioMode::TwoPhase)
        throw std::domain_error("--threshold-curve-out requires --mode two-phase");
    if (want_threshold_curve && a.threshold % a.record_every != 0)
        throw std::domain_error("--threshold-curve-out needs --record-every to divide --threshold");
    if ((!a.trajectory_out.empty() || !a.trajectory_svg.empty()) && a.replicas > 16 &&
        a.steps / a.record_every > 100000)
        throw std::domain_error("trajectory output for this many replicas and steps is too large; "
                                "raise --record-every or drop --trajectory-out");

    const std::vector<polya::Trajectory> runs = polya::run_ensemble(cfg, a.replicas, a.seed);
    for (std::int64_t r = 0; r < a.replicas; ++r) {
        const polya::Trajectory& traj = runs[static_cast<std::size_t>(r)];
        if (!a.trajectory_out.empty())
            polya::write_trajectory(replica_path(a.trajectory_out, r, a.replicas), traj);
        if (!a.trajectory_svg.empty())
            polya::svg::write_svg(replica_path(a.trajectory_svg, r, a.replicas),
                                  polya::svg::render_trajectory(traj));
        if (!a.curve_out.empty())
            polya::write_curve(replica_path(a.curve_out, r, a.replicas),
                               polya::capital_curve(traj.terminal, a.top_k));
        if (!a.curve_svg.empty())
            polya::svg::write_svg(replica_path(a.curve_svg, r, a.replicas),
                                  polya::svg::render_curve(polya::capital_curve(traj.terminal, a.top_k)));
        if (want_threshold_curve)
            polya::write_curve(replica_path(a.threshold_curve_out, r, a.replicas),
                               polya::capital_curve(traj.at_step(a.threshold), a.top_k));
        const polya::Composition& t = traj.terminal;
        const std::int64_t lvl = polya::level(t);
        const std::int64_t top = *std::max_element(t.begin(), t.end());
        std::cout << "replica " << r << " seed " << traj.scenario.seed << " terminal_level " << lvl
                  << " top_weight "
                  << polya::detail::format_double(
                         lvl > 0 ? static_cast<double>(top) / static_cast<double>(lvl) : 0.0)
                  << "\n";
    }
    return kExitOk;
}

struct VerifyArgs {
    std::vector<double> alphas{1.0};
    std::vector<int> stocks{2};
    std::vector<std::int64_t> levels{10};
    double tolerance = 1e-12;
    bool updown = false;
    std::string out;
};

int run_verify(const VerifyArgs& a) {
    std::vector<polya::CheckReport> reports;
    for (double alpha : a.alphas) {
        for (int m : a.stocks) {
            const polya::ModelParams params(alpha, m);
            for (std::int64_t n : a.levels) {
                reports.push_back(polya::check_stationarity(params, n));
                if (a.updown)
                    reports.push_back(
                        polya::check_stationarity(params, n, polya::CompositeOrder::UpDown));
                reports.push_back(polya::check_detailed_balance(params, n));
                reports.push_back(polya::check_pushforward(params, n - 1, polya::StepKind::Up));
                reports.push_back(polya::check_pushforward(params, n, polya::StepKind::Down));
                reports.push_back(polya::check_cross_level_balance(params, n));
            }
        }
    }
    double worst = 0.0;
    for (const auto& rep : reports) {
        worst = std::max(worst, rep.residual);
        std::cout << rep.check << " alpha " << polya::detail::format_double(rep.alpha)
                  << " stocks " << rep.stocks << " level " << rep.level << " residual "
                  << polya::detail::format_double(rep.residual) << " "
                  << (rep.residual < a.tolerance ? "pass" : "FAIL") << "\n";
    }
    if (!a.out.empty()) polya::write_report(a.out, reports);
    std::cout << "max_residual " << polya::detail::format_double(worst) << " tolerance "
              << polya::detail::format_double(a.tolerance) << " checks " << reports.size() << "\n";
    if (worst >= a.tolerance) {
        std::cerr << "error: max residual " << polya::detail::format_double(worst)
                  << " exceeds tolerance\n";
        return kExitDomain;
    }
    return kExitOk;
}

struct CurveArgs {
    std::string in;
    std::string out;
    std::string svg_out;
    std::int64_t top_k = 0;
};

int run_curve(const CurveArgs& a) {
    const polya::MarketSnapshot snap = polya::read_snapshot(a.in);
    const polya::CapitalCurve curve = polya::capital_curve(snap, a.top_k);
    if (!a.out.empty()) polya::write_curve(a.out, curve);
    if (!a.svg_out.empty())
        polya::svg::write_svg(a.svg_out, polya::svg::render_curve(curve, snap.date_label));
    if (a.out.empty() && a.svg_out.empty()) {
        std::cout << "rank,weight,log10_rank,log10_weight\n";
        std::size_t log_i = 0;
        for (std::size_t i = 0; i < curve.ranks.size(); ++i) {
            std::cout << curve.ranks[i] << "," << polya::detail::format_double(curve.weights[i]);
            if (curve.weights[i] > 0.0 && log_i < curve.log10_points.size()) {
                std::cout << "," << polya::detail::format_double(curve.log10_points[log_i].first)
                          << "," << polya::detail::format_double(curve.log10_points[log_i].second);
                ++log_i;
            } else {
                std::cout << ",,";
            }
            std::cout << "\n";
        }
    } else {
        std::cout << "entries " << snap.entries.size() << " ranks_emitted " << curve.ranks.size()
                  << "\n";
    }
    return kExitOk;
}

bool parse_composition(const std::string& text, polya::Composition& out) {
    out.clear();
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(token, &pos);
            if (pos != token.size() || v < 0) return false;
            out.push_back(v);
        } catch (const std::exception&) {
            return false;
        }
    }
    return !out.empty() && text.back() != ',';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polya urn market model: simulation, exact equilibrium checks, curve analytics"};
    app.set_config("--config", "", "Read options from a key=value file");
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "Run growth or two-phase market scenarios");
    c_sim->add_option("--mode", sim.mode, "Scenario mode")
        ->check(CLI::IsMember({"growth", "two-phase"}))
        ->capture_default_str();
    c_sim->add_option("--alpha", sim.alpha, "Per-stock prior weight (> 0)")->required();
    c_sim->add_option("--stocks", sim.stocks, "Number of stocks m")->required();
    c_sim->add_option("--steps", sim.steps, "Total steps")->required();
    c_sim->add_option("--threshold", sim.threshold, "Growth stops at this level (two-phase)");
    c_sim->add_option("--seed", sim.seed, "Base seed; replica r uses stream r")
        ->capture_default_str();
    c_sim->add_option("--replicas", sim.replicas, "Independent replicas")->capture_default_str();
    c_sim->add_option("--record-every", sim.record_every, "Recording cadence in steps")
        ->capture_default_str();
    c_sim->add_flag("--single-move", sim.single_move,
                    "Fluctuate with independent single moves (level drifts) instead of "
                    "level-conserving pairs");
    c_sim->add_option("--top-k", sim.top_k, "Keep only the top k curve ranks (0 = all)")
        ->capture_default_str();
    c_sim->add_option("--trajectory-out", sim.trajectory_out, "Trajectory CSV path");
    c_sim->add_option("--trajectory-svg", sim.trajectory_svg, "Trajectory SVG path");
    c_sim->add_option("--curve-out", sim.curve_out, "Terminal-state curve CSV path");
    c_sim->add_option("--curve-svg", sim.curve_svg, "Terminal-state curve SVG path");
    c_sim->add_option("--threshold-curve-out", sim.threshold_curve_out,
                      "Curve CSV at the moment growth stops (two-phase)");

    VerifyArgs ver;
    CLI::App* c_ver = app.add_subcommand(
        "verify", "Check stationarity, detailed balance, pushforwards, cross-level balance");
    c_ver->add_option("--alpha", ver.alphas, "Prior weights to test")->capture_default_str();
    c_ver->add_option("--stocks", ver.stocks, "Stock counts to test")->capture_default_str();
    c_ver->add_option("--level", ver.levels, "Levels n to test (>= 1)")->capture_default_str();
    c_ver->add_option("--tolerance", ver.tolerance, "Residual tolerance")->capture_default_str();
    c_ver->add_flag("--updown", ver.updown, "Also check the add-then-remove composite kernel");
    c_ver->add_option("--out", ver.out, "JSON-lines report path");

    CurveArgs cur;
    CLI::App* c_cur = app.add_subcommand("curve", "Capital distribution curve from a snapshot CSV");
    c_cur->add_option("--in", cur.in, "Snapshot CSV (header ticker,market_cap)")->required();
    c_cur->add_option("--out", cur.out, "Curve CSV path (stdout if no outputs given)");
    c_cur->add_option("--svg-out", cur.svg_out, "Curve SVG path");
    c_cur->add_option("--top-k", cur.top_k, "Keep only the top k ranks (0 = all)")
        ->capture_default_str();

    double pmf_alpha = 0.0;
    int pmf_stocks = 0;
    std::string pmf_comp_text;
    CLI::App* c_pmf = app.add_subcommand("pmf", "Exact state probability for one composition");
    c_pmf->add_option("--alpha", pmf_alpha, "Per-stock prior weight (> 0)")->required();
    c_pmf->add_option("--stocks", pmf_stocks, "Number of stocks m")->required();
    c_pmf->add_option("--composition", pmf_comp_text, "Counts, e.g. 3,2,1")->required();

    int enum_stocks = 0;
    std::int64_t enum_level = 0;
    bool enum_count_only = false;
    CLI::App* c_enum = app.add_subcommand("enumerate", "List all compositions of n into m parts");
    c_enum->add_option("--stocks", enum_stocks, "Number of parts m")->required();
    c_enum->add_option("--level", enum_level, "Total n")->required();
    c_enum->add_flag("--count", enum_count_only, "Print only the number of compositions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(c_sim)) {
            if (sim.mode == "two-phase" && c_sim->count("--threshold") == 0)
                return usage_error("--mode two-phase requires --threshold");
            if (sim.mode == "growth" && c_sim->count("--threshold") > 0)
                return usage_error("--threshold only applies to --mode two-phase");
            return run_simulate(sim);
        }
        if (app.got_subcommand(c_ver)) return run_verify(ver);
        if (app.got_subcommand(c_cur)) return run_curve(cur);
        if (app.got_subcommand(c_pmf)) {
            polya::Composition x;
            if (!parse_composition(pmf_comp_text, x))
                return usage_error("--composition must be comma-separated non-negative integers");
            if (static_cast<int>(x.size()) != pmf_stocks)
                return usage_error("--composition has " + std::to_string(x.size()) +
                                   " entries but --stocks is " + std::to_string(pmf_stocks));
            const polya::ModelParams params(pmf_alpha, pmf_stocks);
            const double lp = polya::log_polya_pmf(params, x);
            std::cout << "probability " << polya::detail::format_double(std::exp(lp)) << "\n";
            std::cout << "log_probability " << polya::detail::format_double(lp) << "\n";
            return kExitOk;
        }
        if (app.got_subcommand(c_enum)) {
            polya::SimplexIndex idx(enum_stocks, enum_level);
            if (enum_count_only) {
                std::cout << idx.size() << "\n";
                return kExitOk;
            }
            polya::require_enumerable(idx);
            polya::Composition x(static_cast<std::size_t>(enum_stocks), 0);
            x[0] = enum_level;
            do {
                for (std::size_t i = 0; i < x.size(); ++i) {
                    if (i) std::cout << ',';
                    std::cout << x[i];
                }
                std::cout << "\n";
            } while (polya::SimplexIndex::next_composition(x));
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return usage_error("no subcommand selected");
}
