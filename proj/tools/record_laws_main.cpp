// Command line front end: evaluate the joint record-value densities, run the
// verification suites, simulate record sequences, and inspect the
// interleaving term generator.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric or
// domain error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "record_laws/distribution.hpp"
#include "record_laws/interleaving.hpp"
#include "record_laws/joint_density.hpp"
#include "record_laws/joint_point.hpp"
#include "record_laws/oracle.hpp"
#include "record_laws/quadrature.hpp"
#include "record_laws/simulation.hpp"
#include "record_laws/verify.hpp"

namespace rl = record_laws;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_numeric = 3;

std::string command_echo(int argc, char** argv) {
    std::string echo;
    for (int i = 0; i < argc; ++i) {
        if (i) echo += ' ';
        echo += argv[i];
    }
    return echo;
}

// Shortest decimal form that round-trips; integral doubles keep a ".0" so
// the output reads as a real number.
std::string number_text(double v) { return json(v).dump(); }

json base_report(const std::string& echo) {
    json j;
    j["schema"] = 1;
    j["tool_version"] = rl::tool_version;
    j["command"] = echo;
    return j;
}

void attach_timing(json& j, std::chrono::steady_clock::time_point start) {
    const auto elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start);
    j["timing"] = json{{"elapsed_seconds", elapsed.count()}};
}

void write_report(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write report to " + path);
    out << j.dump(2) << '\n';
}

json checks_to_json(const std::vector<rl::CheckRecord>& checks) {
    json arr = json::array();
    for (const auto& c : checks) {
        arr.push_back(json{{"check_id", c.check_id},
                           {"inputs", c.inputs},
                           {"expected", c.expected},
                           {"actual", c.actual},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass}});
    }
    return arr;
}

json report_to_json(const rl::VerificationReport& rep, const std::string& echo) {
    json j = base_report(echo);
    j["suite"] = rep.suite;
    j["model"] = rep.model;
    j["seed"] = rep.seed;
    j["checks"] = checks_to_json(rep.checks);
    j["pass"] = rep.passed();
    return j;
}

struct DensityArgs {
    std::string dist;
    int n = 2;
    std::vector<double> point;
    std::string method = "auto";
    std::string out;
};

int run_density(const DensityArgs& a, const std::string& echo) {
    const auto start = std::chrono::steady_clock::now();
    const rl::DistributionModel d = rl::parse_model(a.dist);
    if (a.point.size() != size_t(2 * a.n - 1))
        throw std::invalid_argument("--point needs 2n-1 coordinates (x, then y2.., then z2..)");
    const rl::JointPoint p = rl::JointPoint::from_flat(a.point);

    std::string method = a.method;
    if (method == "auto") method = a.n <= 3 ? "closed" : "generated";
    double value = 0.0;
    if (method == "closed") {
        value = rl::density_closed_form(d, p);
    } else if (method == "generated") {
        value = rl::evaluate_general_density(d, p, a.n);
    } else {
        throw std::invalid_argument("--method must be closed or generated");
    }
    const bool experimental = a.n >= 4;
    if (experimental)
        std::cerr << "note: n >= 4 evaluation is experimental (no closed form to cross-check)\n";

    std::cout << number_text(value) << '\n';
    if (!a.out.empty()) {
        json j = base_report(echo);
        j["model"] = d.descriptor();
        j["n"] = a.n;
        j["point"] = a.point;
        j["method"] = method;
        j["experimental"] = experimental;
        j["value"] = value;
        attach_timing(j, start);
        write_report(a.out, j);
    }
    return exit_ok;
}

struct VerifyArgs {
    std::string suite;
    std::string dist;
    double tol = 0.0;
    std::uint64_t seed = 42;
    std::string out;
    int n = 0;
    int horizon = 0;
    std::vector<int> pairs;
    std::uint64_t runs = 1000000;
    std::uint64_t max_draws = 100000;
};

int run_verify(const VerifyArgs& a, const std::string& echo) {
    const auto start = std::chrono::steady_clock::now();
    const rl::DistributionModel d = rl::parse_model(a.dist);

    rl::VerificationReport rep;
    try {
        if (a.suite == "normalization") {
            rep = rl::verify_normalization(d);
        } else if (a.suite == "marginals") {
            std::optional<std::pair<int, int>> only;
            if (!a.pairs.empty()) {
                if (a.pairs.size() != 2)
                    throw std::invalid_argument("--pairs expects p,q");
                only = std::make_pair(a.pairs[0], a.pairs[1]);
            }
            rep = rl::verify_marginals(d, a.seed, 20, only, a.tol);
        } else if (a.suite == "generator") {
            rep = rl::verify_generator(d, a.seed, 1000, 100, a.n);
        } else if (a.suite == "oracle") {
            if (a.n != 0) {
                const int horizon = a.horizon ? a.horizon : 200 * (a.n - 1);
                rep = rl::verify_oracle(d, a.n, horizon);
            } else {
                rep = rl::verify_oracle(d, 2, a.horizon ? a.horizon : 200);
                rl::VerificationReport z3 =
                    rl::verify_oracle(d, 3, a.horizon ? a.horizon : 400);
                rep.checks.insert(rep.checks.end(), z3.checks.begin(), z3.checks.end());
            }
            rep.seed = a.seed;
        } else if (a.suite == "mc") {
            rep = rl::verify_mc(d, a.runs, a.seed, a.max_draws);
        } else {
            throw std::invalid_argument(
                "suite must be one of normalization|marginals|generator|oracle|mc");
        }
    } catch (const std::exception& e) {
        // Still leave a report behind so a failed run can be inspected.
        rep.suite = a.suite;
        rep.model = d.descriptor();
        rep.seed = a.seed;
        rl::CheckRecord crash;
        crash.check_id = "suite_aborted";
        crash.inputs = e.what();
        crash.pass = false;
        rep.checks.push_back(crash);
        if (!a.out.empty()) {
            json j = report_to_json(rep, echo);
            attach_timing(j, start);
            write_report(a.out, j);
        }
        throw;
    }

    if (!a.out.empty()) {
        json j = report_to_json(rep, echo);
        attach_timing(j, start);
        write_report(a.out, j);
    }

    std::size_t failed = rep.failures();
    std::cout << "suite " << rep.suite << " (" << rep.model << "): "
              << (rep.checks.size() - failed) << "/" << rep.checks.size()
              << " checks passed\n";
    for (const auto& c : rep.checks)
        if (!c.pass)
            std::cout << "  FAIL " << c.check_id << " [" << c.inputs
                      << "] expected " << number_text(c.expected) << " actual "
                      << number_text(c.actual) << " tolerance "
                      << number_text(c.tolerance) << '\n';
    return rep.passed() ? exit_ok : exit_check_failed;
}

struct SimulateArgs {
    std::string dist;
    int records = 3;
    std::uint64_t runs = 0;
    std::uint64_t seed = 42;
    std::uint64_t max_draws = 100000;
    int bins = 20;
    std::string export_path;
    std::vector<int> fit;
    std::string out;
};

int run_simulate(const SimulateArgs& a, const std::string& echo) {
    const auto start = std::chrono::steady_clock::now();
    const rl::DistributionModel d = rl::parse_model(a.dist);
    if (!a.fit.empty() && a.fit.size() != 2)
        throw std::invalid_argument("--fit expects p,q");

    const rl::EmpiricalSummary summary =
        rl::run_batch(d, a.records, a.runs, a.seed, a.max_draws, a.bins);

    std::cout << "runs " << summary.runs << ", completed " << summary.completed
              << ", censored " << summary.censored << " (fraction "
              << number_text(summary.censored_fraction()) << ")\n";
    std::cout << "draws to completion p50 "
              << number_text(summary.draws_to_completion.quantile(0.5))
              << ", p99 "
              << number_text(summary.draws_to_completion.quantile(0.99)) << '\n';
    for (const auto& [pattern, count] : summary.ordering_counts)
        std::cout << "ordering " << pattern << ": " << count << '\n';

    json j = base_report(echo);
    j["model"] = d.descriptor();
    j["records"] = a.records;
    j["seed"] = a.seed;
    j["max_draws"] = a.max_draws;
    j["bins"] = a.bins;
    j["runs"] = summary.runs;
    j["completed"] = summary.completed;
    j["censored"] = summary.censored;
    j["censored_fraction"] = summary.censored_fraction();
    j["ordering_counts"] = json(summary.ordering_counts);
    json hists = json::object();
    for (const auto& [key, hist] : summary.pair_histograms)
        hists[std::to_string(key.first) + "_" + std::to_string(key.second)] = hist;
    j["pair_histograms"] = std::move(hists);

    if (!a.fit.empty()) {
        const rl::FitReport fit =
            rl::compare_to_closed_form(summary, d, a.fit[0], a.fit[1]);
        std::cout << "fit (" << fit.p << "," << fit.q << "): chi-square "
                  << number_text(fit.chi_square) << " on " << fit.dof
                  << " dof, p-value " << number_text(fit.p_value)
                  << ", sup-norm " << number_text(fit.sup_norm) << '\n';
        j["fit"] = json{{"p", fit.p},
                        {"q", fit.q},
                        {"cells_used", fit.cells_used},
                        {"dof", fit.dof},
                        {"chi_square", fit.chi_square},
                        {"p_value", fit.p_value},
                        {"sup_norm", fit.sup_norm},
                        {"expected_mass_used", fit.expected_mass_used}};
    }

    if (!a.export_path.empty()) {
        std::ofstream traces(a.export_path);
        if (!traces)
            throw std::invalid_argument("cannot write traces to " + a.export_path);
        rl::write_traces(traces, d, a.records, a.runs, a.seed, a.max_draws);
    }

    if (!a.out.empty()) {
        attach_timing(j, start);
        write_report(a.out, j);
    }
    return exit_ok;
}

struct OrderingsArgs {
    int n = 0;
    bool emit_terms = false;
    std::string kind = "continuous";
};

int run_orderings(const OrderingsArgs& a) {
    rl::DistributionModel::Kind kind;
    if (a.kind == "continuous")
        kind = rl::DistributionModel::Kind::continuous;
    else if (a.kind == "discrete")
        kind = rl::DistributionModel::Kind::discrete;
    else
        throw std::invalid_argument("--kind must be continuous or discrete");

    const auto interleavings = rl::enumerate_interleavings(a.n);
    std::cout << "count " << interleavings.size() << '\n';
    for (const auto& il : interleavings) {
        std::cout << il.label();
        if (il.label() != il.pattern) std::cout << ' ' << il.pattern;
        std::cout << '\n';
    }

    if (a.emit_terms) {
        json arr = json::array();
        for (const auto& term : rl::generate_density_terms(a.n, kind)) {
            json dens = json::array();
            for (const auto& g : term.denominators) {
                json entry;
                entry["lower"] =
                    g.lower_rank < 0 ? json() : json(g.lower_symbol());
                entry["upper"] =
                    g.upper_rank < 0 ? json() : json(g.upper_symbol());
                entry["lower_open"] = !g.closed;
                entry["upper_open"] = !g.closed;
                dens.push_back(std::move(entry));
            }
            arr.push_back(json{{"interleaving", term.interleaving.pattern},
                               {"denominators", std::move(dens)}});
        }
        std::cout << arr.dump(2) << '\n';
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint lower and upper record value laws: evaluation, "
                 "verification, simulation"};
    app.require_subcommand(1);
    const std::string echo = command_echo(argc, argv);

    DensityArgs da;
    CLI::App* density = app.add_subcommand(
        "density", "evaluate the joint density or mass at one point");
    density->add_option("--dist", da.dist, "model descriptor, e.g. uniform:0,1 or table:pmf.csv")
        ->required();
    density->add_option("--n", da.n, "number of records per side")->required();
    density->add_option("--point", da.point,
                        "comma list: x, lower records y2.., upper records z2..")
        ->required()
        ->delimiter(',');
    density->add_option("--method", da.method, "closed | generated (default: auto)");
    density->add_option("--out", da.out, "write a JSON report here");

    VerifyArgs va;
    CLI::App* verify = app.add_subcommand(
        "verify", "run one verification suite and report per-check results");
    verify->add_option("suite", va.suite,
                       "normalization | marginals | generator | oracle | mc")
        ->required();
    verify->add_option("--dist", va.dist, "model descriptor")->required();
    verify->add_option("--tol", va.tol, "override the comparison tolerance");
    verify->add_option("--seed", va.seed, "base seed for sampled check points");
    verify->add_option("--out", va.out, "write the JSON report here");
    verify->add_option("--n", va.n, "restrict the suite to one record count");
    verify->add_option("--horizon", va.horizon, "oracle recursion depth in draws");
    verify->add_option("--pairs", va.pairs, "restrict marginals to one pair p,q")
        ->delimiter(',');
    verify->add_option("--runs", va.runs, "mc suite: simulated sequences");
    verify->add_option("--max-draws", va.max_draws, "mc suite: draw cap per sequence");

    SimulateArgs sa;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "sample record sequences and summarize the empirical law");
    simulate->add_option("--dist", sa.dist, "model descriptor")->required();
    simulate->add_option("--records", sa.records, "records per side")->required();
    simulate->add_option("--runs", sa.runs, "number of sequences")->required();
    simulate->add_option("--seed", sa.seed, "stream seed");
    simulate->add_option("--max-draws", sa.max_draws, "draw cap per sequence");
    simulate->add_option("--bins", sa.bins, "histogram bins per axis");
    simulate->add_option("--export", sa.export_path, "write per-run trace CSV here");
    simulate->add_option("--fit", sa.fit, "chi-square fit for record pair p,q")
        ->delimiter(',');
    simulate->add_option("--out", sa.out, "write the JSON report here");

    OrderingsArgs oa;
    CLI::App* orderings = app.add_subcommand(
        "orderings", "list record arrival interleavings and their density terms");
    orderings->add_option("--n", oa.n, "records per side")->required();
    orderings->add_flag("--emit-terms", oa.emit_terms, "dump the generated terms as JSON");
    orderings->add_option("--kind", oa.kind, "continuous | discrete");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (density->parsed()) return run_density(da, echo);
        if (verify->parsed()) return run_verify(va, echo);
        if (simulate->parsed()) return run_simulate(sa, echo);
        if (orderings->parsed()) return run_orderings(oa);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numeric;
    }
    return exit_usage;
}
