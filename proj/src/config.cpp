#include "pipeflow/config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace pipeflow {

namespace {

using nlohmann::json;

SectionKind parse_kind(const std::string& s) {
    if (s == "disk" || s == "Disk") return SectionKind::Disk;
    if (s == "strip1d" || s == "Strip1D" || s == "strip") return SectionKind::Strip1D;
    if (s == "star_shaped" || s == "StarShaped" || s == "star") {
        return SectionKind::StarShaped;
    }
    throw ConfigError("config: \"kind\": unknown section kind \"" + s + "\"");
}

CrossSection parse_section(const json& j) {
    if (!j.is_object()) throw ConfigError("config: \"section\": expected an object");
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw ConfigError("config: \"kind\": expected a string");
    }
    const SectionKind kind = parse_kind(j["kind"].get<std::string>());
    double a0 = 1.0;
    if (j.contains("a0")) {
        if (!j["a0"].is_number()) throw ConfigError("config: \"a0\": expected a number");
        a0 = j["a0"].get<double>();
    }
    std::vector<Harmonic> harmonics;
    if (j.contains("harmonics")) {
        if (!j["harmonics"].is_array()) {
            throw ConfigError("config: \"harmonics\": expected an array of [k, ak, bk]");
        }
        for (const auto& h : j["harmonics"]) {
            if (!h.is_array() || h.size() != 3 || !h[0].is_number_integer() ||
                !h[1].is_number() || !h[2].is_number()) {
                throw ConfigError("config: \"harmonics\": each entry must be [k, ak, bk]");
            }
            harmonics.push_back({h[0].get<int>(), h[1].get<double>(), h[2].get<double>()});
        }
    }
    return make_section(kind, a0, std::move(harmonics));
}

int get_int(const json& j, const char* key, int fallback, int lo, int hi) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) {
        throw ConfigError(std::string("config: \"") + key + "\": expected an integer");
    }
    const int v = j[key].get<int>();
    if (v < lo || v > hi) {
        throw ConfigError(std::string("config: \"") + key + "\": out of range [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return v;
}

} // namespace

std::vector<double> parse_alpha_spec(const std::string& spec) {
    std::vector<double> out;
    auto parse_num = [&](const std::string& tok) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw ConfigError("config: \"alpha\": bad number \"" + tok + "\"");
        }
        if (pos != tok.size() || !std::isfinite(v) || v < 0.0) {
            throw ConfigError("config: \"alpha\": bad value \"" + tok + "\"");
        }
        return v;
    };

    const auto split = [](const std::string& s, char sep) {
        std::vector<std::string> toks;
        std::size_t start = 0;
        while (start <= s.size()) {
            const std::size_t end = s.find(sep, start);
            if (end == std::string::npos) {
                toks.push_back(s.substr(start));
                break;
            }
            toks.push_back(s.substr(start, end - start));
            start = end + 1;
        }
        return toks;
    };

    if (spec.find(':') != std::string::npos) {
        const auto toks = split(spec, ':');
        if (toks.size() != 4 || (toks[3] != "log" && toks[3] != "lin")) {
            throw ConfigError("config: \"alpha\": range must be min:max:count:log|lin");
        }
        const double lo = parse_num(toks[0]);
        const double hi = parse_num(toks[1]);
        int count = 0;
        try {
            count = std::stoi(toks[2]);
        } catch (const std::exception&) {
            throw ConfigError("config: \"alpha\": bad count \"" + toks[2] + "\"");
        }
        if (count < 2 || hi <= lo) {
            throw ConfigError("config: \"alpha\": need count >= 2 and max > min");
        }
        if (toks[3] == "log") {
            if (lo <= 0.0) throw ConfigError("config: \"alpha\": log range needs min > 0");
            for (int i = 0; i < count; ++i) {
                out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
            }
        } else {
            for (int i = 0; i < count; ++i) {
                out.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
            }
        }
        return out;
    }

    for (const auto& tok : split(spec, ',')) {
        if (tok.empty()) throw ConfigError("config: \"alpha\": empty entry in list");
        out.push_back(parse_num(tok));
    }
    return out;
}

std::vector<double> default_sweep_grid() {
    std::vector<double> grid = parse_alpha_spec("1e-2:1e3:25:log");
    grid.insert(grid.begin(), 0.0);
    return grid;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    RunConfig cfg;
    // The section lives under "section", or inline at top level via "kind".
    if (j.contains("section")) {
        cfg.section = parse_section(j["section"]);
    } else if (j.contains("kind")) {
        cfg.section = parse_section(j);
    } else {
        throw ConfigError("config: \"section\": missing (or top-level \"kind\")");
    }

    const json mesh = j.contains("mesh") ? j["mesh"] : json::object();
    if (!mesh.is_object()) throw ConfigError("config: \"mesh\": expected an object");
    cfg.rings = get_int(mesh, "rings", cfg.rings, 2, 4096);
    cfg.sectors = get_int(mesh, "sectors", cfg.sectors, 8, 16384);
    cfg.level = get_int(mesh, "level", cfg.level, 0, 8);

    if (j.contains("alpha")) {
        cfg.alphas_specified = true;
        const json& a = j["alpha"];
        if (a.is_array()) {
            for (const auto& v : a) {
                if (!v.is_number() || v.get<double>() < 0.0) {
                    throw ConfigError("config: \"alpha\": entries must be numbers >= 0");
                }
                cfg.alphas.push_back(v.get<double>());
            }
        } else if (a.is_string()) {
            cfg.alphas = parse_alpha_spec(a.get<std::string>());
        } else if (a.is_number()) {
            const double v = a.get<double>();
            if (v < 0.0) throw ConfigError("config: \"alpha\": must be >= 0");
            cfg.alphas.push_back(v);
        } else {
            throw ConfigError("config: \"alpha\": expected number, array, or range string");
        }
    }

    cfg.order = get_int(j, "order", cfg.order, 1, 64);

    if (j.contains("tol")) {
        if (!j["tol"].is_number()) throw ConfigError("config: \"tol\": expected a number");
        cfg.tol = j["tol"].get<double>();
        if (!(cfg.tol >= 1e-14 && cfg.tol <= 1e-6)) {
            throw ConfigError("config: \"tol\": must lie in [1e-14, 1e-6]");
        }
    }
    if (j.contains("out")) {
        if (!j["out"].is_string()) throw ConfigError("config: \"out\": expected a string");
        cfg.out_dir = j["out"].get<std::string>();
    }
    return cfg;
}

} // namespace pipeflow
