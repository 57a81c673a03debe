#include "thermalab/config.hpp"

#include "thermalab/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace thermalab::cli {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::size_t> parse_size_list(const std::string& v) {
    std::vector<std::size_t> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    return out;
}

} // namespace

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
    const bool center_equal = (std::isnan(center_e) && std::isnan(o.center_e)) ||
                              center_e == o.center_e;
    return center_equal && master_seed == o.master_seed && model == o.model &&
           mode == o.mode && lambda == o.lambda && density == o.density &&
           n_levels == o.n_levels && spacing == o.spacing && rho0 == o.rho0 &&
           t0 == o.t0 && e_min == o.e_min && delta == o.delta &&
           n_realizations == o.n_realizations && jobs == o.jobs &&
           scaling_n_levels == o.scaling_n_levels && observable == o.observable &&
           bandwidth == o.bandwidth && strength == o.strength && width == o.width &&
           t_max_over_invdelta == o.t_max_over_invdelta && n_points == o.n_points &&
           output_dir == o.output_dir;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    std::string section = "";
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "model.type") cfg.model = val;
            else if (key == "model.mode") cfg.mode = val;
            else if (key == "model.lambda") cfg.lambda = std::stod(val);
            else if (key == "hf.density") cfg.density = val;
            else if (key == "hf.n_levels") cfg.n_levels = std::stoull(val);
            else if (key == "hf.spacing") cfg.spacing = std::stod(val);
            else if (key == "hf.rho0") cfg.rho0 = std::stod(val);
            else if (key == "hf.t0") cfg.t0 = std::stod(val);
            else if (key == "hf.e_min") cfg.e_min = std::stod(val);
            else if (key == "run.master_seed") cfg.master_seed = std::stoull(val);
            else if (key == "run.delta") cfg.delta = std::stod(val);
            else if (key == "run.n_realizations") cfg.n_realizations = std::stoull(val);
            else if (key == "run.jobs") cfg.jobs = std::stoi(val);
            else if (key == "run.scaling_n_levels") cfg.scaling_n_levels = parse_size_list(val);
            else if (key == "observable.kind") cfg.observable = val;
            else if (key == "observable.bandwidth") cfg.bandwidth = std::stod(val);
            else if (key == "observable.strength") cfg.strength = std::stod(val);
            else if (key == "state.center_e") cfg.center_e = std::stod(val);
            else if (key == "state.width") cfg.width = std::stod(val);
            else if (key == "time.t_max_over_invdelta") cfg.t_max_over_invdelta = std::stod(val);
            else if (key == "time.n_points") cfg.n_points = std::stoull(val);
            else if (key == "output.dir") cfg.output_dir = val;
            else fail(origin, lineno, "unknown key '" + key + "'");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            fail(origin, lineno, "cannot parse value '" + val + "' for " + key);
        }
    }
    return cfg;
}

ExperimentConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("JSON config parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    auto get = [&](const char* sec, const char* key, auto& out) {
        if (j.contains(sec) && j[sec].contains(key)) j[sec][key].get_to(out);
    };
    get("model", "type", cfg.model);
    get("model", "mode", cfg.mode);
    get("model", "lambda", cfg.lambda);
    get("hf", "density", cfg.density);
    get("hf", "n_levels", cfg.n_levels);
    get("hf", "spacing", cfg.spacing);
    get("hf", "rho0", cfg.rho0);
    get("hf", "t0", cfg.t0);
    get("hf", "e_min", cfg.e_min);
    get("run", "master_seed", cfg.master_seed);
    get("run", "delta", cfg.delta);
    get("run", "n_realizations", cfg.n_realizations);
    get("run", "jobs", cfg.jobs);
    get("run", "scaling_n_levels", cfg.scaling_n_levels);
    get("observable", "kind", cfg.observable);
    get("observable", "bandwidth", cfg.bandwidth);
    get("observable", "strength", cfg.strength);
    if (j.contains("state") && j["state"].contains("center_e") && !j["state"]["center_e"].is_null())
        j["state"]["center_e"].get_to(cfg.center_e);
    get("state", "width", cfg.width);
    get("time", "t_max_over_invdelta", cfg.t_max_over_invdelta);
    get("time", "n_points", cfg.n_points);
    get("output", "dir", cfg.output_dir);
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["model"] = {{"type", cfg.model}, {"mode", cfg.mode}, {"lambda", cfg.lambda}};
    j["hf"] = {{"density", cfg.density}, {"n_levels", cfg.n_levels}, {"spacing", cfg.spacing},
               {"rho0", cfg.rho0},       {"t0", cfg.t0},             {"e_min", cfg.e_min}};
    j["run"] = {{"master_seed", cfg.master_seed},
                {"delta", cfg.delta},
                {"n_realizations", cfg.n_realizations},
                {"jobs", cfg.jobs},
                {"scaling_n_levels", cfg.scaling_n_levels}};
    j["observable"] = {{"kind", cfg.observable},
                       {"bandwidth", cfg.bandwidth},
                       {"strength", cfg.strength}};
    if (std::isnan(cfg.center_e))
        j["state"] = {{"center_e", nullptr}, {"width", cfg.width}};
    else
        j["state"] = {{"center_e", cfg.center_e}, {"width", cfg.width}};
    j["time"] = {{"t_max_over_invdelta", cfg.t_max_over_invdelta}, {"n_points", cfg.n_points}};
    j["output"] = {{"dir", cfg.output_dir}};
    return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
        if (c == '{') return parse_config_json(text);
        break;
    }
    return parse_config_text(text, path);
}

void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& o) {
    if (o.has_seed) cfg.master_seed = o.seed;
    if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
    if (o.jobs >= 0) cfg.jobs = o.jobs;
    if (o.n_levels > 0) cfg.n_levels = static_cast<std::size_t>(o.n_levels);
    if (o.delta > 0.0) cfg.delta = o.delta;
    if (o.lambda >= 0.0) cfg.lambda = o.lambda;
}

void validate(const ExperimentConfig& cfg) {
    auto bad = [](const std::string& m) { throw ConfigError("config: " + m); };
    if (cfg.model != "phenomenological" && cfg.model != "microscopic")
        bad("model.type must be phenomenological or microscopic");
    if (cfg.mode != "gaussian" && cfg.mode != "orthogonalized")
        bad("model.mode must be gaussian or orthogonalized");
    if (cfg.density != "picket-fence" && cfg.density != "exp-growth")
        bad("hf.density must be picket-fence or exp-growth");
    if (cfg.n_levels < 2) bad("hf.n_levels must be >= 2");
    if (cfg.spacing <= 0.0) bad("hf.spacing must be > 0");
    if (cfg.rho0 <= 0.0 || cfg.t0 <= 0.0) bad("hf.rho0 and hf.t0 must be > 0");
    if (cfg.delta <= 0.0) bad("run.delta must be > 0");
    if (cfg.n_realizations < 1) bad("run.n_realizations must be >= 1");
    if (cfg.lambda < 0.0) bad("model.lambda must be >= 0");
    if (cfg.observable != "banded-random" && cfg.observable != "diagonal-linear" &&
        cfg.observable != "diagonal-quadratic" && cfg.observable != "identity" &&
        cfg.observable != "projector-lower-half")
        bad("observable.kind unknown: " + cfg.observable);
    if (cfg.bandwidth <= 0.0) bad("observable.bandwidth must be > 0");
    if (cfg.strength <= 0.0) bad("observable.strength must be > 0");
    if (cfg.width <= 0.0) bad("state.width must be > 0");
    if (cfg.t_max_over_invdelta <= 0.0) bad("time.t_max_over_invdelta must be > 0");
    if (cfg.n_points < 2) bad("time.n_points must be >= 2");
    if (cfg.output_dir.empty()) bad("output.dir must be set");
}

} // namespace thermalab::cli
