#include "qtaylor/config.hpp"

#include <fstream>
#include <sstream>

#include "qtaylor/csv.hpp"
#include "qtaylor/errors.hpp"

namespace qtaylor {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != static_cast<int>(d)) throw ConfigError(key + ": expected an integer");
    return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() || base.empty() ? p : base / p;
}

std::pair<Quarter, Quarter> parse_window(const std::string& v) {
    const auto parts = split(v, ':');
    if (parts.size() != 2) throw ConfigError("window: expected START:END, got '" + v + "'");
    return {Quarter::parse(parts[0]), Quarter::parse(parts[1])};
}

}  // namespace

void RunConfig::validate() const {
    calib.validate();
    if (!(calib.beta > 0.0)) throw ConfigError("calibration: beta must lie in (0,1)");
    if (window.second < window.first) throw ConfigError("window ends before it starts");
    for (const auto* p : {&gdp_path, &potential_path, &price_path, &rate_path, &output_dir}) {
        if (p->empty()) throw ConfigError("configuration paths must be nonempty");
    }
    for (double t : representative_taus) {
        if (!(t > 0 && t < 1)) throw ConfigError("representative taus must lie in (0,1)");
    }
    if (!(skedastic_floor > 0)) throw ConfigError("skedastic floor must be positive");
    if (qdp_grid.state_points < 5 || qdp_grid.i_points < 5) {
        throw ConfigError("qdp grids need at least 5 points");
    }
    if (!(qdp_tau > 0 && qdp_tau < 1)) throw ConfigError("qdp_tau must lie in (0,1)");
    if (rule_case == RuleCase::general && restrict_gamma_i) {
        throw ConfigError("rule_case = general requires restrict_gamma_i = false");
    }
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value,
                   const std::filesystem::path& base_dir) {
    const std::string v = trim(value);
    if (key == "gdp_path") c.gdp_path = resolve(base_dir, v);
    else if (key == "potential_path") c.potential_path = resolve(base_dir, v);
    else if (key == "price_path") c.price_path = resolve(base_dir, v);
    else if (key == "rate_path") c.rate_path = resolve(base_dir, v);
    else if (key == "output_dir") c.output_dir = resolve(base_dir, v);
    else if (key == "window") c.window = parse_window(v);
    else if (key == "dummies") {
        c.dummies.clear();
        for (const auto& item : split(v, ',')) {
            const auto parts = split(item, ':');
            if (parts.size() != 3) {
                throw ConfigError("dummies: expected NAME:START:END, got '" + item + "'");
            }
            c.dummies.push_back({parts[0], Quarter::parse(parts[1]), Quarter::parse(parts[2])});
        }
    } else if (key == "include_dummies") c.include_dummies = to_bool(key, v);
    else if (key == "dummy_timing") {
        if (v == "dependent") c.dummy_timing = DummyTiming::dependent;
        else if (v == "regressor") c.dummy_timing = DummyTiming::regressor;
        else throw ConfigError("dummy_timing: expected dependent|regressor");
    } else if (key == "beta") c.calib.beta = to_double(key, v);
    else if (key == "lambda") c.calib.lambda = to_double(key, v);
    else if (key == "delta") c.calib.delta = to_double(key, v);
    else if (key == "pi_star") c.calib.pi_star = to_double(key, v);
    else if (key == "skedastic_form") {
        if (v == "linear_sqrt") c.skedastic_form = SkedasticForm::linear_sqrt;
        else if (v == "exp_sqrt") c.skedastic_form = SkedasticForm::exp_sqrt;
        else throw ConfigError("skedastic_form: expected linear_sqrt|exp_sqrt");
    } else if (key == "restrict_gamma_i") c.restrict_gamma_i = to_bool(key, v);
    else if (key == "skedastic_floor") c.skedastic_floor = to_double(key, v);
    else if (key == "rule_case") c.rule_case = parse_rule_case(v);
    else if (key == "grouping") {
        if (v == "rederived") c.grouping = Grouping::rederived;
        else if (v == "printed") c.grouping = Grouping::printed;
        else throw ConfigError("grouping: expected rederived|printed");
    } else if (key == "tau_grid") c.tau_grid = TauGrid::parse(v);
    else if (key == "representative_taus") {
        c.representative_taus.clear();
        for (const auto& t : split(v, ',')) c.representative_taus.push_back(to_double(key, t));
    } else if (key == "qdp_state_points") c.qdp_grid.state_points = to_int(key, v);
    else if (key == "qdp_state_pad") c.qdp_grid.state_pad = to_double(key, v);
    else if (key == "qdp_i_min") c.qdp_grid.i_min = to_double(key, v);
    else if (key == "qdp_i_max") c.qdp_grid.i_max = to_double(key, v);
    else if (key == "qdp_i_points") c.qdp_grid.i_points = to_int(key, v);
    else if (key == "qdp_tau") c.qdp_tau = to_double(key, v);
    else if (key == "qdp_tol") c.qdp_tol = to_double(key, v);
    else if (key == "qdp_max_iter") c.qdp_max_iter = to_int(key, v);
    else if (key == "qdp_margin") c.qdp_margin = to_int(key, v);
    else if (key == "qdp_stopping") {
        if (v == "sup_norm") c.qdp_stopping = StoppingRule::sup_norm;
        else if (v == "span") c.qdp_stopping = StoppingRule::span;
        else throw ConfigError("qdp_stopping: expected sup_norm|span");
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    RunConfig c;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        apply_setting(c, trim(line.substr(0, eq)), line.substr(eq + 1), base_dir);
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    return parse_config(in, path.parent_path());
}

const std::vector<std::string>& robustness_presets() {
    static const std::vector<std::string> presets{"lambda_0.5", "lambda_2", "post_1979",
                                                  "post_1979_dummies"};
    return presets;
}

void apply_preset(RunConfig& c, const std::string& preset) {
    if (preset == "baseline") return;
    if (preset == "lambda_0.5") c.calib.lambda = 0.5;
    else if (preset == "lambda_2") c.calib.lambda = 2.0;
    else if (preset == "post_1979") c.window.first = {1979, 4};
    else if (preset == "post_1979_dummies") {
        c.window.first = {1979, 4};
        c.include_dummies = true;
    } else {
        throw ConfigError("unknown preset '" + preset + "'");
    }
}

std::string canonical_text(const RunConfig& c) {
    std::ostringstream os;
    os << "gdp_path=" << c.gdp_path.generic_string() << '\n'
       << "potential_path=" << c.potential_path.generic_string() << '\n'
       << "price_path=" << c.price_path.generic_string() << '\n'
       << "rate_path=" << c.rate_path.generic_string() << '\n'
       << "window=" << c.window.first.to_string() << ':' << c.window.second.to_string() << '\n'
       << "dummies=";
    for (const auto& d : c.dummies) {
        os << d.name << ':' << d.start.to_string() << ':' << d.end.to_string() << ';';
    }
    os << "\ninclude_dummies=" << c.include_dummies
       << "\ndummy_timing=" << (c.dummy_timing == DummyTiming::dependent ? "dependent" : "regressor")
       << "\nbeta=" << format_number(c.calib.beta) << "\nlambda=" << format_number(c.calib.lambda)
       << "\ndelta=" << format_number(c.calib.delta)
       << "\npi_star=" << format_number(c.calib.pi_star)
       << "\nskedastic_form=" << (c.skedastic_form == SkedasticForm::linear_sqrt ? "linear_sqrt" : "exp_sqrt")
       << "\nrestrict_gamma_i=" << c.restrict_gamma_i
       << "\nskedastic_floor=" << format_number(c.skedastic_floor)
       << "\nrule_case=" << to_string(c.rule_case)
       << "\ngrouping=" << (c.grouping == Grouping::rederived ? "rederived" : "printed")
       << "\ntau_grid=";
    for (double t : c.tau_grid.values()) os << format_number(t) << ';';
    os << "\nrepresentative_taus=";
    for (double t : c.representative_taus) os << format_number(t) << ';';
    os << "\nqdp=" << c.qdp_grid.state_points << ';' << format_number(c.qdp_grid.state_pad) << ';'
       << format_number(c.qdp_grid.i_min) << ';' << format_number(c.qdp_grid.i_max) << ';'
       << c.qdp_grid.i_points << ';' << format_number(c.qdp_tau) << ';'
       << format_number(c.qdp_tol) << ';' << c.qdp_max_iter << ';'
       << (c.qdp_stopping == StoppingRule::span ? "span" : "sup_norm") << ';' << c.qdp_margin
       << '\n';
    return os.str();
}

}  // namespace qtaylor
