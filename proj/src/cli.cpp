#include "agedelay/cli.hpp"

#include "agedelay/attractivity.hpp"
#include "agedelay/errors.hpp"
#include "agedelay/kernel.hpp"
#include "agedelay/simulator.hpp"
#include "agedelay/spectral.hpp"
#include "agedelay/steady_state.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

namespace agedelay
{

namespace
{

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fmt17(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json number_or_null(std::optional<double> x)
{
    if (x && std::isfinite(*x))
        return *x;
    return nullptr;
}

fs::path artifact_dir(const RunConfig& c)
{
    fs::path dir = c.output.dir.empty() ? fs::path(".") : fs::path(c.output.dir);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_artifact(const fs::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    return os;
}

void emit_json(const json& doc, const RunConfig& c, const std::string& name, std::ostream& out)
{
    const std::string text = doc.dump(2) + "\n";
    out << text;
    if (!c.output.dir.empty())
        open_artifact(artifact_dir(c) / (name + ".json")) << text;
}

json verdict_json(const Verdict& v)
{
    return {{"ok", v.ok}, {"failures", v.failures}, {"evidence", v.evidence}};
}

std::optional<double> try_principal_eigenvalue(const AgeRates& rates, double p)
{
    try
    {
        return CharacteristicFunction(rates).principal_eigenvalue(p);
    }
    catch (const RangeError&)
    {
        return std::nullopt;
    }
    catch (const ConvergenceError&)
    {
        return std::nullopt;
    }
}

int run_kernel(const RunConfig& c, std::ostream& out)
{
    const AgeRates rates = c.rates();
    const KernelEvaluator kernel(rates, c.kernel);
    std::vector<double> ages(c.output.kernel_ages), xs(c.output.kernel_points);
    for (std::size_t i = 0; i < ages.size(); ++i)
        ages[i] = ages.size() == 1 ? rates.r()
                                   : rates.r() + (rates.life_span() - rates.r()) * static_cast<double>(i)
                                                     / static_cast<double>(ages.size() - 1);
    for (std::size_t i = 0; i < xs.size(); ++i)
        xs[i] = xs.size() == 1 ? 0.0 : std::numbers::pi * static_cast<double>(i) / static_cast<double>(xs.size() - 1);
    const KernelTable table = kernel.tabulate(ages, xs, xs);

    std::ostringstream csv;
    csv << "a,x,y,K\n";
    for (std::size_t ia = 0; ia < ages.size(); ++ia)
        for (std::size_t ix = 0; ix < xs.size(); ++ix)
            for (std::size_t iy = 0; iy < xs.size(); ++iy)
                csv << fmt17(ages[ia]) << ',' << fmt17(xs[ix]) << ',' << fmt17(xs[iy]) << ','
                    << fmt17(table(ia, ix, iy)) << '\n';
    if (c.output.dir.empty())
        out << csv.str();
    else
        open_artifact(artifact_dir(c) / "kernel.csv") << csv.str();
    return exit_ok;
}

int run_eigen(const RunConfig& c, std::ostream& out)
{
    const AgeRates rates = c.rates();
    const CharacteristicFunction cf(rates);
    const double p = c.model.birth.p();
    const double lambda0 = cf.principal_eigenvalue(p);
    json doc;
    doc["lambda0"] = lambda0;
    doc["p"] = p;
    doc["kstar"] = rates.kstar();
    doc["pk"] = p * rates.kstar();
    doc["classification"] = std::string(to_string(cf.classify(p)));
    doc["residual"] = std::abs(p * cf.gamma0(lambda0) - 1.0);
    doc["kstar_self_check"] = rates.kstar_relative_self_check();
    emit_json(doc, c, "eigen", out);
    return exit_ok;
}

int run_steady_state(const RunConfig& c, std::ostream& out)
{
    const AgeRates rates = c.rates();
    const BirthFunction& f = c.model.birth;
    const F2Result f2 = check_F2(f, rates.kstar());
    if (!f2.verdict.ok)
        throw InconsistencyError("steady-state: no ceiling M found ((F2) fails), cannot bound the root scan");
    const SteadyStateReport report = find_steady_states(f, rates.kstar(), f2.M);

    std::optional<double> closed;
    if (f.is_preset() && f.kind() != BirthKind::linear && f.p() * rates.kstar() > 1.0)
        closed = closed_form_wstar(f, rates.kstar());

    json doc;
    doc["pk"] = f.p() * rates.kstar();
    doc["kstar"] = rates.kstar();
    doc["M"] = report.M_used;
    doc["M_method"] = f2.method;
    doc["roots"] = report.roots;
    doc["residuals"] = report.residuals;
    doc["unique"] = report.unique;
    doc["closed_form"] = number_or_null(closed);
    doc["note"] = report.note;
    emit_json(doc, c, "steady-state", out);
    return exit_ok;
}

int run_check_conditions(const RunConfig& c, std::ostream& out)
{
    const AgeRates rates = c.rates();
    const HypothesisReport r = check_hypotheses(c.model.birth, rates.kstar());
    json violations = json::array();
    for (const auto& [u, v] : r.p_conditions.violations)
        violations.push_back(json::array({u, v}));

    json doc;
    doc["birth"] = c.model.birth.describe();
    doc["kstar"] = rates.kstar();
    doc["pk"] = c.model.birth.p() * rates.kstar();
    doc["F1"] = verdict_json(r.f1);
    doc["F2"] = verdict_json(r.f2);
    doc["F3"] = verdict_json(r.f3);
    doc["M"] = r.M;
    doc["wstar"] = number_or_null(r.wstar);
    doc["p_conditions"] = {{"which", std::string(to_string(r.p_conditions.which))},
                           {"P0", r.p_conditions.p0},
                           {"P1", r.p_conditions.p1},
                           {"P2", r.p_conditions.p2},
                           {"violations", violations}};
    doc["theorem_verdict"] = r.theorem.covered ? "covered" : "not-covered";
    doc["branch"] = r.theorem.branch;
    doc["condition"] = r.theorem.condition;
    doc["notes"] = r.notes;
    emit_json(doc, c, "check-conditions", out);
    return r.theorem.covered ? exit_ok : exit_verdict;
}

struct SimulationRun
{
    SimulationReport report;
    std::optional<double> lambda0;
    double kstar = 0.0;
    std::optional<double> M;
    double state_cap = 0.0;
    double dt = 0.0;
};

SimulationRun simulate(const RunConfig& c, const SliceObserver& observer)
{
    const AgeRates rates = c.rates();
    const BirthFunction& f = c.model.birth;
    SimulationRun run_info;
    run_info.kstar = rates.kstar();
    run_info.lambda0 = try_principal_eigenvalue(rates, f.p());

    SimulationOptions options;
    options.tol_conv = c.tolerances.tol_conv;
    options.n_windows = c.tolerances.n_windows;
    options.delta_report = c.tolerances.delta_report;

    const F2Result f2 = check_F2(f, rates.kstar());
    if (f2.verdict.ok)
    {
        run_info.M = f2.M;
        if (f.p() * rates.kstar() > 1.0)
            options.wstar_candidates = find_steady_states(f, rates.kstar(), f2.M).roots;
    }

    if (c.tolerances.state_cap)
        run_info.state_cap = *c.tolerances.state_cap;
    else if (run_info.M)
        run_info.state_cap = 10.0 * std::max(*run_info.M, c.initial.max_value());
    else
        run_info.state_cap = std::numeric_limits<double>::infinity();

    Simulator sim(rates, f, c.grid, c.kernel, run_info.state_cap);
    run_info.dt = sim.dt();
    run_info.report = run(sim, c.initial, c.horizon, options, observer);
    return run_info;
}

json simulation_json(const RunConfig& c, const SimulationRun& s)
{
    const auto& r = s.report;
    json doc;
    doc["verdict"] = std::string(to_string(r.verdict));
    doc["wstar"] = number_or_null(r.wstar);
    doc["lambda0"] = number_or_null(s.lambda0);
    doc["pk"] = c.model.birth.p() * s.kstar;
    doc["kstar"] = s.kstar;
    doc["M"] = number_or_null(s.M);
    doc["fluctuations"] = {{"wsup", r.empirical_wsup},
                           {"winf", r.empirical_winf},
                           {"tail_start", r.tail_start},
                           {"tail_deviation", r.tail_deviation},
                           {"delta_floor", r.delta_floor}};
    doc["grid"] = {{"nx", c.grid.nx},
                   {"steps_per_delay", c.grid.steps_per_delay},
                   {"na", c.grid.na},
                   {"dt", s.dt}};
    doc["horizon"] = c.horizon;
    doc["tol_conv"] = c.tolerances.tol_conv;
    doc["n_windows"] = c.tolerances.n_windows;
    doc["state_cap"] = number_or_null(s.state_cap);
    doc["initial_nonzero"] = r.initial_nonzero;
    doc["birth"] = c.model.birth.describe();
    return doc;
}

void write_summary(const fs::path& path, const SimulationReport& r)
{
    auto os = open_artifact(path);
    os << "t,sup_x,inf_x\n";
    for (std::size_t i = 0; i < r.times.size(); ++i)
        os << fmt17(r.times[i]) << ',' << fmt17(r.sup_x[i]) << ',' << fmt17(r.inf_x[i]) << '\n';
}

int run_simulate(const RunConfig& c, std::ostream& out)
{
    const fs::path dir = artifact_dir(c);
    auto trace = open_artifact(dir / "trace.csv");
    trace << "t,x,w\n";
    std::vector<double> xs;
    {
        const auto trap = trapezoid(0.0, std::numbers::pi, c.grid.nx);
        xs = trap.nodes;
    }
    std::size_t stamp = 0;
    auto observer = [&](double t, std::span<const double> w) {
        if (stamp++ % c.output.trace_stride != 0)
            return;
        for (std::size_t j = 0; j < w.size(); ++j)
            trace << fmt17(t) << ',' << fmt17(xs[j]) << ',' << fmt17(w[j]) << '\n';
    };
    const SimulationRun s = simulate(c, observer);
    write_summary(dir / "summary.csv", s.report);

    const std::string text = simulation_json(c, s).dump(2) + "\n";
    open_artifact(dir / "report.json") << text;
    out << text;
    return s.report.verdict == SimVerdict::undecided ? exit_verdict : exit_ok;
}

int run_audit(const RunConfig& c, std::ostream& out)
{
    const SimulationRun s = simulate(c, {});
    const FluctuationAudit a =
        fluctuation_inequality_audit(s.report, c.model.birth, s.kstar, c.tolerances.tol_conv);
    json doc;
    doc["verdict"] = std::string(to_string(s.report.verdict));
    doc["wstar"] = number_or_null(s.report.wstar);
    doc["kstar"] = s.kstar;
    doc["wsup"] = a.wsup;
    doc["winf"] = a.winf;
    doc["upper_rhs"] = a.upper_rhs;
    doc["lower_rhs"] = a.lower_rhs;
    doc["eps"] = a.eps;
    doc["upper_ok"] = a.upper_ok;
    doc["lower_ok"] = a.lower_ok;
    doc["note"] = a.note;
    emit_json(doc, c, "audit", out);
    return exit_ok;
}

std::string read_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

int dispatch(std::string_view subcommand, const RunConfig& config, std::ostream& out)
{
    if (subcommand == "kernel")
        return run_kernel(config, out);
    if (subcommand == "eigen")
        return run_eigen(config, out);
    if (subcommand == "steady-state")
        return run_steady_state(config, out);
    if (subcommand == "check-conditions")
        return run_check_conditions(config, out);
    if (subcommand == "simulate")
        return run_simulate(config, out);
    if (subcommand == "audit")
        return run_audit(config, out);
    throw ConfigError("unknown subcommand '" + std::string(subcommand)
                      + "' (expected kernel, eigen, steady-state, check-conditions, simulate or audit)");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Age-structured nonlocal delay model: kernels, eigenvalues, steady states, "
                 "hypothesis checks and simulation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol_conv;
    std::optional<double> horizon;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--seed", seed, "seed for random-bounded initial histories");
    app.add_option("--tol-conv", tol_conv, "convergence tolerance (overrides tolerances.tol_conv)");
    app.add_option("--horizon", horizon, "absolute end time (overrides horizon)");

    for (const char* name : {"kernel", "eigen", "steady-state", "check-conditions", "simulate", "audit"})
        app.add_subcommand(name)->fallthrough();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }

    try
    {
        RunConfig config = parse_config(read_file(config_path));
        if (!out_dir.empty())
            config.output.dir = out_dir;
        if (seed)
            config.initial.seed = *seed;
        if (tol_conv)
        {
            if (!(*tol_conv > 0.0))
                throw ConfigError("--tol-conv must be positive");
            config.tolerances.tol_conv = *tol_conv;
        }
        if (horizon)
        {
            if (!(*horizon > config.model.params.t0))
                throw ConfigError("--horizon must exceed model.t0");
            config.horizon = *horizon;
        }
        return dispatch(app.get_subcommands().front()->get_name(), config, out);
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
}

} // namespace agedelay
