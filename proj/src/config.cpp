#include "agedelay/config.hpp"

#include "agedelay/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <set>
#include <utility>

namespace agedelay
{

namespace
{

using json = nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& key, const std::string& what)
{
    throw ConfigError("config key '" + key + "': " + what);
}

/// One JSON object plus the set of keys consumed from it; finish() rejects the rest.
class Section
{
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path))
    {
        if (!node_.is_object())
            config_error(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string key(std::string_view name) const
    {
        return path_.empty() ? std::string(name) : path_ + "." + std::string(name);
    }

    bool has(std::string_view name) const { return node_.contains(std::string(name)); }

    const json& raw(std::string_view name)
    {
        seen_.insert(std::string(name));
        auto it = node_.find(std::string(name));
        if (it == node_.end())
            config_error(key(name), "missing required key");
        return *it;
    }

    Section section(std::string_view name) { return Section(raw(name), key(name)); }

    double number(std::string_view name)
    {
        const json& v = raw(name);
        if (!v.is_number())
            config_error(key(name), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x))
            config_error(key(name), "expected a finite number");
        return x;
    }

    double number(std::string_view name, double fallback) { return has(name) ? number(name) : fallback; }

    double positive(std::string_view name, double fallback)
    {
        const double x = number(name, fallback);
        if (!(x > 0.0))
            config_error(key(name), "expected a positive number");
        return x;
    }

    std::uint64_t unsigned_integer(std::string_view name)
    {
        const json& v = raw(name);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            config_error(key(name), "expected a nonnegative integer");
        return v.get<std::uint64_t>();
    }

    std::size_t count(std::string_view name, std::size_t fallback, std::size_t minimum = 1)
    {
        if (!has(name))
            return fallback;
        const auto n = unsigned_integer(name);
        if (n < minimum)
            config_error(key(name), "expected an integer >= " + std::to_string(minimum));
        return static_cast<std::size_t>(n);
    }

    std::string string(std::string_view name)
    {
        const json& v = raw(name);
        if (!v.is_string())
            config_error(key(name), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(std::string_view name)
    {
        const json& v = raw(name);
        if (!v.is_array())
            config_error(key(name), "expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v)
        {
            if (!e.is_number())
                config_error(key(name), "expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::vector<std::pair<double, double>> pairs(std::string_view name)
    {
        const json& v = raw(name);
        if (!v.is_array())
            config_error(key(name), "expected an array of [x, y] pairs");
        std::vector<std::pair<double, double>> out;
        for (const auto& e : v)
        {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                config_error(key(name), "expected an array of [x, y] pairs");
            out.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
        return out;
    }

    void finish() const
    {
        for (const auto& item : node_.items())
            if (!seen_.contains(item.key()))
                config_error(key(item.key()), "unknown key");
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

/// Runs a constructor, re-raising domain failures as ConfigError on `key`.
template <class F>
auto guarded(const std::string& key, F&& make)
{
    try
    {
        return make();
    }
    catch (const ConfigError&)
    {
        throw;
    }
    catch (const std::exception& e)
    {
        config_error(key, e.what());
    }
}

RateProfile parse_profile(Section s)
{
    const std::string kind_name = s.string("kind");
    const auto kind = guarded(s.key("kind"), [&] { return profile_kind_from_string(kind_name); });
    const auto params = s.numbers("params");
    std::vector<double> breakpoints;
    if (kind == ProfileKind::piecewise_constant || kind == ProfileKind::tabulated || s.has("breakpoints"))
        breakpoints = s.numbers("breakpoints");
    s.finish();
    return guarded(s.key("params"), [&] {
        switch (kind)
        {
        case ProfileKind::constant:
            if (params.size() != 1 || !breakpoints.empty())
                throw DomainError("constant profile takes params = [c] and no breakpoints");
            return RateProfile::constant(params[0]);
        case ProfileKind::piecewise_constant:
            return RateProfile::piecewise_constant(params, breakpoints);
        case ProfileKind::polynomial:
            if (!breakpoints.empty())
                throw DomainError("polynomial profile takes no breakpoints");
            return RateProfile::polynomial(params);
        case ProfileKind::tabulated:
            return RateProfile::tabulated(breakpoints, params);
        }
        throw DomainError("unhandled profile kind");
    });
}

BirthFunction parse_birth(Section s)
{
    const std::string kind_name = s.string("kind");
    const auto kind = guarded(s.key("kind"), [&] { return birth_kind_from_string(kind_name); });
    auto build = [&]() -> BirthFunction {
        switch (kind)
        {
        case BirthKind::ricker:
        {
            const double p = s.number("p"), a = s.number("a"), q = s.number("q");
            return guarded(s.key("kind"), [&] { return BirthFunction::ricker(p, a, q); });
        }
        case BirthKind::beverton_holt:
        {
            const double p = s.number("p"), a = s.number("a"), q = s.number("q");
            return guarded(s.key("kind"), [&] { return BirthFunction::beverton_holt(p, a, q); });
        }
        case BirthKind::logistic:
        {
            const double p = s.number("p"), K = s.number("K");
            return guarded(s.key("kind"), [&] { return BirthFunction::logistic(p, K); });
        }
        case BirthKind::linear:
        {
            const double p = s.number("p");
            return guarded(s.key("kind"), [&] { return BirthFunction::linear(p); });
        }
        case BirthKind::table:
        {
            auto nodes = s.pairs("table");
            return guarded(s.key("table"), [&] { return BirthFunction::table(std::move(nodes)); });
        }
        }
        throw DomainError("unhandled birth kind");
    };
    BirthFunction f = build();
    s.finish();
    return f;
}

ModelSection parse_model(Section s)
{
    ModelSection m;
    m.params.r = s.number("r");
    m.params.life_span = s.number("life_span");
    m.params.t0 = s.number("t0", m.params.life_span);
    m.diffusion = parse_profile(s.section("diffusion"));
    m.death = parse_profile(s.section("death"));
    m.birth = parse_birth(s.section("birth"));
    s.finish();
    guarded(s.key("r"), [&] {
        m.params.validate();
        return 0;
    });
    return m;
}

SimGrid parse_grid(Section s)
{
    SimGrid g;
    g.nx = s.count("nx", g.nx);
    g.steps_per_delay = s.count("steps_per_delay", g.steps_per_delay);
    g.na = s.count("na", g.na);
    s.finish();
    guarded(s.key("nx"), [&] {
        g.validate();
        return 0;
    });
    return g;
}

InitialHistory parse_initial(Section s)
{
    InitialHistory h;
    const std::string kind_name = s.string("kind");
    h.kind = guarded(s.key("kind"), [&] { return history_kind_from_string(kind_name); });
    switch (h.kind)
    {
    case HistoryKind::constant:
        h.value = s.number("value");
        break;
    case HistoryKind::cosine_perturbed:
        h.value = s.number("value");
        h.amplitude = s.number("amplitude");
        h.mode = s.number("mode", h.mode);
        h.omega = s.number("omega", h.omega);
        break;
    case HistoryKind::random_bounded:
        h.lo = s.number("lo", h.lo);
        h.hi = s.number("hi", h.hi);
        if (s.has("seed"))
            h.seed = s.unsigned_integer("seed");
        break;
    case HistoryKind::custom_table:
        h.table = s.pairs("table");
        break;
    }
    s.finish();
    guarded(s.key("kind"), [&] {
        h.validate();
        return 0;
    });
    return h;
}

KernelOptions parse_kernel(Section s)
{
    KernelOptions k;
    k.spectral_tol = s.positive("spectral_tol", k.spectral_tol);
    k.alpha_switch = s.positive("alpha_switch", k.alpha_switch);
    k.max_terms = s.count("max_terms", k.max_terms);
    k.memory_cap_bytes = s.count("memory_cap_bytes", k.memory_cap_bytes);
    s.finish();
    return k;
}

OutputSection parse_output(Section s)
{
    OutputSection o;
    if (s.has("dir"))
        o.dir = s.string("dir");
    o.trace_stride = s.count("trace_stride", o.trace_stride);
    o.kernel_ages = s.count("kernel_ages", o.kernel_ages);
    o.kernel_points = s.count("kernel_points", o.kernel_points);
    s.finish();
    return o;
}

TolerancesSection parse_tolerances(Section s)
{
    TolerancesSection t;
    t.tol_conv = s.positive("tol_conv", t.tol_conv);
    t.n_windows = s.count("n_windows", t.n_windows);
    t.delta_report = s.positive("delta_report", t.delta_report);
    if (s.has("state_cap"))
        t.state_cap = s.positive("state_cap", 1.0);
    s.finish();
    return t;
}

json profile_json(const RateProfile& p)
{
    json j;
    j["kind"] = std::string(to_string(p.kind()));
    j["params"] = p.params();
    if (p.kind() == ProfileKind::piecewise_constant || p.kind() == ProfileKind::tabulated)
        j["breakpoints"] = p.breakpoints();
    return j;
}

json pairs_json(const std::vector<std::pair<double, double>>& nodes)
{
    json arr = json::array();
    for (const auto& [x, y] : nodes)
        arr.push_back(json::array({x, y}));
    return arr;
}

json birth_json(const BirthFunction& f)
{
    json j;
    j["kind"] = std::string(to_string(f.kind()));
    switch (f.kind())
    {
    case BirthKind::ricker:
    case BirthKind::beverton_holt:
        j["p"] = f.p();
        j["a"] = f.a();
        j["q"] = f.q();
        break;
    case BirthKind::logistic:
        j["p"] = f.p();
        j["K"] = f.K();
        break;
    case BirthKind::linear:
        j["p"] = f.p();
        break;
    case BirthKind::table:
        j["table"] = pairs_json(f.nodes());
        break;
    }
    return j;
}

json initial_json(const InitialHistory& h)
{
    json j;
    j["kind"] = std::string(to_string(h.kind));
    switch (h.kind)
    {
    case HistoryKind::constant:
        j["value"] = h.value;
        break;
    case HistoryKind::cosine_perturbed:
        j["value"] = h.value;
        j["amplitude"] = h.amplitude;
        j["mode"] = h.mode;
        j["omega"] = h.omega;
        break;
    case HistoryKind::random_bounded:
        j["lo"] = h.lo;
        j["hi"] = h.hi;
        j["seed"] = h.seed;
        break;
    case HistoryKind::custom_table:
        j["table"] = pairs_json(h.table);
        break;
    }
    return j;
}

} // namespace

AgeRates RunConfig::rates() const
{
    return guarded("model", [&] { return AgeRates(model.diffusion, model.death, model.params); });
}

RunConfig parse_config(std::string_view text)
{
    json doc;
    try
    {
        doc = json::parse(text.begin(), text.end());
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    Section root(doc, "");
    RunConfig c;
    c.model = parse_model(root.section("model"));
    if (root.has("grid"))
        c.grid = parse_grid(root.section("grid"));
    c.initial = parse_initial(root.section("initial"));
    if (root.has("kernel"))
        c.kernel = parse_kernel(root.section("kernel"));
    if (root.has("output"))
        c.output = parse_output(root.section("output"));
    if (root.has("tolerances"))
        c.tolerances = parse_tolerances(root.section("tolerances"));
    c.horizon = root.number("horizon", c.horizon);
    root.finish();

    if (!(c.horizon > c.model.params.t0))
        config_error("horizon", "expected an absolute end time greater than model.t0");
    (void)c.rates();
    return c;
}

std::string serialize_config(const RunConfig& c)
{
    json j;
    json& model = j["model"];
    model["r"] = c.model.params.r;
    model["life_span"] = c.model.params.life_span;
    model["t0"] = c.model.params.t0;
    model["diffusion"] = profile_json(c.model.diffusion);
    model["death"] = profile_json(c.model.death);
    model["birth"] = birth_json(c.model.birth);

    j["grid"] = {{"nx", c.grid.nx}, {"steps_per_delay", c.grid.steps_per_delay}, {"na", c.grid.na}};
    j["initial"] = initial_json(c.initial);
    j["kernel"] = {{"spectral_tol", c.kernel.spectral_tol},
                   {"alpha_switch", c.kernel.alpha_switch},
                   {"max_terms", c.kernel.max_terms},
                   {"memory_cap_bytes", c.kernel.memory_cap_bytes}};
    json& out = j["output"];
    if (!c.output.dir.empty())
        out["dir"] = c.output.dir;
    out["trace_stride"] = c.output.trace_stride;
    out["kernel_ages"] = c.output.kernel_ages;
    out["kernel_points"] = c.output.kernel_points;
    json& tol = j["tolerances"];
    tol["tol_conv"] = c.tolerances.tol_conv;
    tol["n_windows"] = c.tolerances.n_windows;
    tol["delta_report"] = c.tolerances.delta_report;
    if (c.tolerances.state_cap)
        tol["state_cap"] = *c.tolerances.state_cap;
    j["horizon"] = c.horizon;
    return j.dump(2) + "\n";
}

} // namespace agedelay
