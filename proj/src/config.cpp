#include "nlchns/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace nlchns {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) {
        parts.push_back(trim(item));
    }
    return parts;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Key-value table with typed accessors that record problems instead of throwing.
class Entries {
public:
    Entries(std::map<std::string, std::pair<std::string, int>> values, std::vector<std::string>& problems)
        : values_(std::move(values)), problems_(problems) {}

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::optional<std::string> text(const std::string& key, bool required = false) {
        used_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end()) {
            if (required) {
                problems_.push_back("missing required key '" + key + "'");
            }
            return std::nullopt;
        }
        return it->second.first;
    }

    std::optional<double> real(const std::string& key, bool required = false) {
        const auto raw = text(key, required);
        if (!raw) {
            return std::nullopt;
        }
        const auto v = parse_real(*raw);
        if (!v) {
            bad(key, *raw, "a real number");
        }
        return v;
    }

    std::optional<long long> integer(const std::string& key, bool required = false) {
        const auto raw = text(key, required);
        if (!raw) {
            return std::nullopt;
        }
        long long v = 0;
        const auto res = std::from_chars(raw->data(), raw->data() + raw->size(), v);
        if (res.ec != std::errc() || res.ptr != raw->data() + raw->size()) {
            bad(key, *raw, "an integer");
            return std::nullopt;
        }
        return v;
    }

    std::optional<std::uint64_t> unsigned64(const std::string& key) {
        const auto raw = text(key);
        if (!raw) {
            return std::nullopt;
        }
        std::uint64_t v = 0;
        const auto res = std::from_chars(raw->data(), raw->data() + raw->size(), v);
        if (res.ec != std::errc() || res.ptr != raw->data() + raw->size()) {
            bad(key, *raw, "an unsigned 64-bit integer");
            return std::nullopt;
        }
        return v;
    }

    std::optional<bool> boolean(const std::string& key) {
        const auto raw = text(key);
        if (!raw) {
            return std::nullopt;
        }
        if (*raw == "true" || *raw == "1" || *raw == "yes") {
            return true;
        }
        if (*raw == "false" || *raw == "0" || *raw == "no") {
            return false;
        }
        bad(key, *raw, "true or false");
        return std::nullopt;
    }

    std::optional<std::vector<double>> reals(const std::string& key) {
        const auto raw = text(key);
        if (!raw) {
            return std::nullopt;
        }
        std::vector<double> out;
        for (const auto& part : split(*raw, ',')) {
            const auto v = parse_real(part);
            if (!v) {
                bad(key, *raw, "a comma-separated list of reals");
                return std::nullopt;
            }
            out.push_back(*v);
        }
        return out;
    }

    void report_unknown() {
        for (const auto& [key, entry] : values_) {
            if (!used_.count(key)) {
                problems_.push_back("line " + std::to_string(entry.second) + ": unknown key '" + key + "'");
            }
        }
    }

    static std::optional<double> parse_real(const std::string& raw) {
        double v = 0.0;
        const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
        if (res.ec != std::errc() || res.ptr != raw.data() + raw.size() || !std::isfinite(v)) {
            return std::nullopt;
        }
        return v;
    }

private:
    void bad(const std::string& key, const std::string& raw, const std::string& expected) {
        problems_.push_back("'" + key + "' = '" + raw + "' is not " + expected);
    }

    std::map<std::string, std::pair<std::string, int>> values_;
    std::set<std::string> used_;
    std::vector<std::string>& problems_;
};

template <typename Enum>
std::optional<Enum> choose(Entries& e, const std::string& key, const std::map<std::string, Enum>& options,
                           std::vector<std::string>& problems, bool required, Enum fallback) {
    const auto raw = e.text(key, required);
    if (!raw) {
        return required ? std::nullopt : std::optional<Enum>(fallback);
    }
    const auto it = options.find(*raw);
    if (it == options.end()) {
        std::string names;
        for (const auto& [name, value] : options) {
            names += (names.empty() ? "" : "|") + name;
        }
        problems.push_back("'" + key + "' = '" + *raw + "' is not one of " + names);
        return std::nullopt;
    }
    return it->second;
}

void parse_kernel(Entries& e, SimConfig& c, std::vector<std::string>& problems) {
    const auto family = choose<KernelFamily>(
        e, "kernel",
        {{"gaussian", KernelFamily::gaussian}, {"mollifier", KernelFamily::mollifier},
         {"spectral", KernelFamily::spectral}},
        problems, true, KernelFamily::gaussian);
    const double strength = e.real("kernel.strength").value_or(1.0);
    if (!family) {
        e.real("kernel.sigma");
        e.real("kernel.radius");
        e.text("kernel.symbol");
        return;
    }
    c.kernel.family = *family;
    c.kernel.strength = strength;
    if (!(strength > 0.0)) {
        problems.push_back("kernel.strength must be positive");
    }
    const auto sigma = e.real("kernel.sigma", *family == KernelFamily::gaussian);
    const auto radius = e.real("kernel.radius", *family == KernelFamily::mollifier);
    const auto symbol = e.text("kernel.symbol", *family == KernelFamily::spectral);
    if (*family == KernelFamily::gaussian && sigma) {
        c.kernel.sigma = *sigma;
        if (!(*sigma > 0.0)) {
            problems.push_back("kernel.sigma must be positive");
        }
    }
    if (*family == KernelFamily::mollifier && radius) {
        c.kernel.radius = *radius;
        if (!(*radius > 0.0)) {
            problems.push_back("kernel.radius must be positive");
        }
    }
    if (*family == KernelFamily::spectral && symbol) {
        for (const auto& item : split(*symbol, ',')) {
            const auto kv = split(item, ':');
            int m2 = -1;
            std::optional<double> value;
            if (kv.size() == 2) {
                const auto res = std::from_chars(kv[0].data(), kv[0].data() + kv[0].size(), m2);
                if (res.ec != std::errc() || res.ptr != kv[0].data() + kv[0].size()) {
                    m2 = -1;
                }
                value = Entries::parse_real(kv[1]);
            }
            if (m2 < 0 || !value) {
                problems.push_back("kernel.symbol entry '" + item + "' is not of the form m2:value");
                continue;
            }
            c.kernel.symbol[m2] = *value;
        }
    }
}

void parse_potential(Entries& e, SimConfig& c, std::vector<std::string>& problems) {
    const auto family = choose<PotentialFamily>(
        e, "potential",
        {{"double_well", PotentialFamily::double_well}, {"quartic", PotentialFamily::quartic},
         {"polynomial", PotentialFamily::polynomial}},
        problems, true, PotentialFamily::double_well);
    const bool quartic = family == PotentialFamily::quartic;
    const auto a4 = e.real("potential.a4", quartic);
    const auto a2 = e.real("potential.a2");
    const auto a0 = e.real("potential.a0");
    const auto coefficients = e.reals("potential.coefficients");
    if (family == PotentialFamily::polynomial && !coefficients && !e.has("potential.coefficients")) {
        problems.push_back("missing required key 'potential.coefficients'");
    }
    if (const auto range = e.reals("potential.range")) {
        if (range->size() != 2 || !((*range)[0] < (*range)[1])) {
            problems.push_back("potential.range must be two increasing reals 'lo, hi'");
        } else {
            c.range = {(*range)[0], (*range)[1]};
        }
    }
    if (!family) {
        return;
    }
    try {
        switch (*family) {
            case PotentialFamily::double_well:
                c.potential = PotentialSpec::double_well();
                break;
            case PotentialFamily::quartic:
                if (a4) {
                    c.potential = PotentialSpec::quartic(*a4, a2.value_or(0.0), a0.value_or(0.0));
                }
                break;
            case PotentialFamily::polynomial:
                if (coefficients) {
                    Eigen::VectorXd v(static_cast<Eigen::Index>(coefficients->size()));
                    for (std::size_t k = 0; k < coefficients->size(); ++k) {
                        v(static_cast<Eigen::Index>(k)) = (*coefficients)[k];
                    }
                    c.potential = PotentialSpec::polynomial(Polynomial(v));
                }
                break;
        }
    } catch (const std::invalid_argument& err) {
        problems.push_back(err.what());
    }
}

void parse_forcing(Entries& e, SimConfig& c, std::vector<std::string>& problems) {
    const auto family = choose<ForcingFamily>(
        e, "forcing",
        {{"zero", ForcingFamily::zero}, {"body", ForcingFamily::body}, {"single_mode", ForcingFamily::single_mode}},
        problems, false, ForcingFamily::zero);
    const auto amplitude = e.reals("forcing.amplitude");
    const auto decay = e.real("forcing.decay");
    const auto mode = e.reals("forcing.mode");
    if (!family) {
        return;
    }
    c.forcing.family = *family;
    if (amplitude) {
        if (*family == ForcingFamily::body && amplitude->size() != 2) {
            problems.push_back("forcing.amplitude for body forcing must be two reals 'ax, ay'");
        } else if (*family == ForcingFamily::single_mode && amplitude->size() != 1) {
            problems.push_back("forcing.amplitude for single_mode forcing must be one real");
        } else {
            for (std::size_t k = 0; k < amplitude->size() && k < 2; ++k) {
                c.forcing.amplitude[k] = (*amplitude)[k];
            }
        }
    }
    if (decay) {
        c.forcing.decay = *decay;
        if (*decay < 0.0) {
            problems.push_back("forcing.decay must be nonnegative");
        }
    }
    if (mode) {
        if (mode->size() != 2 || std::floor((*mode)[0]) != (*mode)[0] || std::floor((*mode)[1]) != (*mode)[1] ||
            ((*mode)[0] == 0.0 && (*mode)[1] == 0.0)) {
            problems.push_back("forcing.mode must be two integers 'mx, my', not both zero");
        } else {
            c.forcing.mode = {static_cast<int>((*mode)[0]), static_cast<int>((*mode)[1])};
        }
    }
}

void parse_initial(Entries& e, SimConfig& c, std::vector<std::string>& problems) {
    InitialSpec& init = c.initial;
    const auto family = choose<InitialFamily>(e, "initial",
                                              {{"uniform", InitialFamily::uniform},
                                               {"random", InitialFamily::random},
                                               {"tanh_strip", InitialFamily::tanh_strip},
                                               {"file", InitialFamily::file}},
                                              problems, false, InitialFamily::uniform);
    if (family) {
        init.family = *family;
    }
    init.value = e.real("initial.value").value_or(init.value);
    init.amplitude = e.real("initial.amplitude").value_or(init.amplitude);
    init.mean = e.real("initial.mean").value_or(init.mean);
    init.seed = e.unsigned64("initial.seed").value_or(init.seed);
    if (const auto mm = e.integer("initial.max_mode")) {
        if (*mm < 0) {
            problems.push_back("initial.max_mode must be nonnegative");
        } else {
            init.max_mode = static_cast<int>(*mm);
        }
    }
    if (const auto w = e.real("initial.width")) {
        init.width = *w;
        if (!(*w > 0.0)) {
            problems.push_back("initial.width must be positive");
        }
    }
    if (const auto p = e.text("initial.path", family == InitialFamily::file)) {
        init.path = *p;
    }

    const auto velocity = choose<VelocityFamily>(
        e, "u0",
        {{"zero", VelocityFamily::zero}, {"taylor_green", VelocityFamily::taylor_green}, {"file", VelocityFamily::file}},
        problems, false, VelocityFamily::zero);
    if (velocity) {
        init.velocity = *velocity;
    }
    init.velocity_amplitude = e.real("u0.amplitude").value_or(init.velocity_amplitude);
    const bool from_file = velocity == VelocityFamily::file;
    if (const auto p = e.text("u0.path_x", from_file)) {
        init.velocity_path_x = *p;
    }
    if (const auto p = e.text("u0.path_y", from_file)) {
        init.velocity_path_y = *p;
    }
}

}  // namespace

long SimConfig::steps() const { return std::lround(params.t_end / params.dt); }

SimConfig parse_config(const std::string& text) {
    std::vector<std::string> problems;
    std::map<std::string, std::pair<std::string, int>> values;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(number) + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            problems.push_back("line " + std::to_string(number) + ": empty key");
            continue;
        }
        if (!values.emplace(key, std::make_pair(value, number)).second) {
            problems.push_back("line " + std::to_string(number) + ": duplicate key '" + key + "'");
        }
    }

    Entries e(std::move(values), problems);
    SimConfig c;

    if (const auto n = e.integer("grid.n", true)) {
        if (*n < 8 || (*n & (*n - 1)) != 0 || *n > (1 << 14)) {
            problems.push_back("grid.n must be a power of two >= 8");
        } else {
            c.n = static_cast<int>(*n);
        }
    }
    if (const auto l = e.real("grid.l", true)) {
        c.l = *l;
        if (!(*l > 0.0)) {
            problems.push_back("grid.l must be positive");
        }
    }

    parse_kernel(e, c, problems);
    parse_potential(e, c, problems);

    if (const auto nu = e.real("nu", true)) {
        c.params.nu = *nu;
        if (!(*nu > 0.0)) {
            problems.push_back("nu must be positive");
        }
    }
    const auto dt = e.real("dt", true);
    if (dt) {
        c.params.dt = *dt;
        if (!(*dt > 0.0)) {
            problems.push_back("dt must be positive");
        }
    }
    if (const auto t_end = e.real("t_end", true)) {
        c.params.t_end = *t_end;
        if (dt && *dt > 0.0 && *t_end < *dt) {
            problems.push_back("t_end must be at least dt");
        }
    }
    if (const auto s = e.text("stabilizer")) {
        if (*s == "auto") {
            c.stabilizer_auto = true;
        } else if (const auto v = Entries::parse_real(*s)) {
            c.stabilizer_auto = false;
            c.params.stabilizer = *v;
            if (*v < 0.0) {
                problems.push_back("stabilizer must be nonnegative");
            }
        } else {
            problems.push_back("'stabilizer' = '" + *s + "' is not 'auto' or a real number");
        }
    }
    if (const auto d = e.boolean("scheme.dealias")) {
        c.params.dealias = *d;
    }
    if (const auto f = choose<ForceForm>(e, "scheme.force_form",
                                         {{"phi_grad_mu", ForceForm::phi_grad_mu},
                                          {"mu_grad_phi", ForceForm::mu_grad_phi}},
                                         problems, false, ForceForm::phi_grad_mu)) {
        c.params.force_form = *f;
    }

    parse_forcing(e, c, problems);
    parse_initial(e, c, problems);

    if (const auto r = e.integer("output.record_every")) {
        if (*r < 1) {
            problems.push_back("output.record_every must be at least 1");
        } else {
            c.output.record_every = static_cast<int>(*r);
        }
    }
    if (const auto s = e.integer("output.snapshot_every")) {
        if (*s < 0) {
            problems.push_back("output.snapshot_every must be nonnegative");
        } else {
            c.output.snapshot_every = static_cast<int>(*s);
        }
    }
    if (const auto d = e.text("output.dir")) {
        c.output.dir = *d;
    }
    if (const auto b = e.boolean("checks.enforce_hypotheses")) {
        c.checks.enforce_hypotheses = *b;
    }
    if (const auto b = e.boolean("checks.grad_control")) {
        c.checks.grad_control = *b;
    }
    if (const auto b = e.boolean("checks.dissipative")) {
        c.checks.dissipative = *b;
    }

    e.report_unknown();
    if (!problems.empty()) {
        throw ConfigError(problems);
    }
    return c;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string to_text(const SimConfig& c) {
    std::ostringstream os;
    const auto put = [&](const std::string& key, const std::string& value) { os << key << " = " << value << "\n"; };
    const auto real = [&](const std::string& key, double v) { put(key, format_double(v)); };
    const auto flag = [&](const std::string& key, bool v) { put(key, v ? "true" : "false"); };

    put("grid.n", std::to_string(c.n));
    real("grid.l", c.l);

    put("kernel", to_string(c.kernel.family));
    real("kernel.strength", c.kernel.strength);
    switch (c.kernel.family) {
        case KernelFamily::gaussian: real("kernel.sigma", c.kernel.sigma); break;
        case KernelFamily::mollifier: real("kernel.radius", c.kernel.radius); break;
        case KernelFamily::spectral: {
            std::string items;
            for (const auto& [m2, v] : c.kernel.symbol) {
                items += (items.empty() ? "" : ", ") + std::to_string(m2) + ":" + format_double(v);
            }
            put("kernel.symbol", items);
            break;
        }
    }

    // Potentials are written back in polynomial form so the round trip is exact.
    if (c.potential.family == PotentialFamily::double_well) {
        put("potential", "double_well");
    } else {
        put("potential", "polynomial");
        std::string items;
        const auto& coeffs = c.potential.F.coefficients();
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
            items += (k ? ", " : "") + format_double(coeffs(k));
        }
        put("potential.coefficients", items);
    }
    put("potential.range", format_double(c.range.lo) + ", " + format_double(c.range.hi));

    real("nu", c.params.nu);
    real("dt", c.params.dt);
    real("t_end", c.params.t_end);
    put("stabilizer", c.stabilizer_auto ? "auto" : format_double(c.params.stabilizer));
    flag("scheme.dealias", c.params.dealias);
    put("scheme.force_form", to_string(c.params.force_form));

    put("forcing", to_string(c.forcing.family));
    if (c.forcing.family == ForcingFamily::body) {
        put("forcing.amplitude", format_double(c.forcing.amplitude[0]) + ", " + format_double(c.forcing.amplitude[1]));
    } else if (c.forcing.family == ForcingFamily::single_mode) {
        real("forcing.amplitude", c.forcing.amplitude[0]);
        put("forcing.mode", std::to_string(c.forcing.mode[0]) + ", " + std::to_string(c.forcing.mode[1]));
    }
    if (c.forcing.family != ForcingFamily::zero) {
        real("forcing.decay", c.forcing.decay);
    }

    const InitialSpec& init = c.initial;
    put("initial", to_string(init.family));
    real("initial.value", init.value);
    real("initial.amplitude", init.amplitude);
    real("initial.mean", init.mean);
    put("initial.seed", std::to_string(init.seed));
    if (init.max_mode >= 0) {
        put("initial.max_mode", std::to_string(init.max_mode));
    }
    real("initial.width", init.width);
    if (!init.path.empty()) {
        put("initial.path", init.path);
    }
    put("u0", to_string(init.velocity));
    real("u0.amplitude", init.velocity_amplitude);
    if (!init.velocity_path_x.empty()) {
        put("u0.path_x", init.velocity_path_x);
    }
    if (!init.velocity_path_y.empty()) {
        put("u0.path_y", init.velocity_path_y);
    }

    put("output.record_every", std::to_string(c.output.record_every));
    put("output.snapshot_every", std::to_string(c.output.snapshot_every));
    if (!c.output.dir.empty()) {
        put("output.dir", c.output.dir);
    }
    flag("checks.enforce_hypotheses", c.checks.enforce_hypotheses);
    flag("checks.grad_control", c.checks.grad_control);
    flag("checks.dissipative", c.checks.dissipative);
    return os.str();
}

std::string to_string(ForcingFamily family) {
    switch (family) {
        case ForcingFamily::zero: return "zero";
        case ForcingFamily::body: return "body";
        case ForcingFamily::single_mode: return "single_mode";
    }
    return "?";
}

std::string to_string(InitialFamily family) {
    switch (family) {
        case InitialFamily::uniform: return "uniform";
        case InitialFamily::random: return "random";
        case InitialFamily::tanh_strip: return "tanh_strip";
        case InitialFamily::file: return "file";
    }
    return "?";
}

std::string to_string(VelocityFamily family) {
    switch (family) {
        case VelocityFamily::zero: return "zero";
        case VelocityFamily::taylor_green: return "taylor_green";
        case VelocityFamily::file: return "file";
    }
    return "?";
}

std::string to_string(ForceForm form) {
    switch (form) {
        case ForceForm::phi_grad_mu: return "phi_grad_mu";
        case ForceForm::mu_grad_phi: return "mu_grad_phi";
    }
    return "?";
}

}  // namespace nlchns
