#include "landau/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "landau/errors.hpp"

namespace landau {

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        if (a == std::string::npos) return std::string{};
        return s.substr(a, b - a + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw validation_error("config line " + std::to_string(lineno) +
                                   ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw validation_error("config line " + std::to_string(lineno) +
                                   ": empty key or value");
        out[key] = value;
    }
    return out;
}

RunConfig run_config_from_text(const std::string& text) {
    auto kv = parse_key_values(text);
    RunConfig config;
    auto take = [&kv](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) return std::string{};
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto to_double = [](const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw validation_error("config key '" + key + "': bad numeric value '" + v + "'");
        }
    };

    if (auto v = take("grid.n"); !v.empty()) config.grid_n = static_cast<int>(to_double("grid.n", v));
    if (auto v = take("grid.L"); !v.empty()) config.grid_L = to_double("grid.L", v);
    if (auto v = take("gamma"); !v.empty()) config.gamma = to_double("gamma", v);
    if (auto v = take("n_reg"); !v.empty()) config.n_reg = to_double("n_reg", v);
    if (auto v = take("delta"); !v.empty()) config.delta = to_double("delta", v);
    if (auto v = take("viscosity"); !v.empty()) config.viscosity = to_double("viscosity", v);
    if (auto v = take("dt"); !v.empty()) config.dt = to_double("dt", v);
    if (auto v = take("t_end"); !v.empty()) config.t_end = to_double("t_end", v);
    if (auto v = take("save_stride"); !v.empty())
        config.save_stride = static_cast<int>(to_double("save_stride", v));
    if (auto v = take("seed"); !v.empty())
        config.seed = static_cast<unsigned>(to_double("seed", v));
    if (auto v = take("init.kind"); !v.empty()) config.init.kind = v;
    if (auto v = take("init.scheme_n"); !v.empty())
        config.init.scheme_n = to_double("init.scheme_n", v);

    // remaining init.* keys become initial-data parameters
    for (auto it = kv.begin(); it != kv.end();) {
        if (it->first.rfind("init.", 0) == 0) {
            config.init.params[it->first.substr(5)] = to_double(it->first, it->second);
            it = kv.erase(it);
        } else {
            ++it;
        }
    }
    if (!kv.empty())
        throw validation_error("config: unknown key '" + kv.begin()->first + "'");

    // eager validation so config errors surface before any compute
    config.grid();
    config.kernel_model();
    if (!(config.dt >= 0.0)) throw validation_error("config key 'dt': must be >= 0");
    if (config.save_stride < 1)
        throw validation_error("config key 'save_stride': must be >= 1");
    return config;
}

RunConfig run_config_from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw validation_error("config: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return run_config_from_text(ss.str());
}

std::string config_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace landau
