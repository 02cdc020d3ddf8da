#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "acfd/presets.hpp"
#include "acfd/run_config.hpp"

namespace acfd {

namespace detail {

inline InitialCondition parse_initial_name(const std::string& s, std::uint64_t seed) {
    if (s == "circle") return CircleIc{};
    if (s == "sphere") return SphereIc{};
    if (s == "dumbbell") return DumbbellIc{};
    if (s == "star") return StarIc{};
    if (s == "torus") return TorusIc{};
    if (s == "maze") return MazeIc{};
    if (s == "random") return RandomIc{0.1, seed};
    throw config_error("unknown init '" + s +
                       "' (circle|sphere|dumbbell|star|torus|maze|random)");
}

} // namespace detail

/// Plain-text run configuration: one `key = value` per line, `#` comments.
/// Keys (README documents the schema): preset, dim, nx, ny, nz, ax, bx, ay,
/// by, az, bz, m, dt, init, r0, r1, r2, amplitude, seed, steps, diag_stride,
/// err_stride, snapshot_stride, backend, threads, precision. With `preset`,
/// the remaining keys override that preset's values.
inline RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file '" + path.string() + "'");

    std::map<std::string, std::string> kv;
    std::string line;
    long lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        const std::string key = eq == std::string::npos ? "" : trim(line.substr(0, eq));
        const std::string val = eq == std::string::npos ? "" : trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw config_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
        kv[key] = val;
    }

    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto to_long = [](const std::string& v, const char* key) {
        try {
            std::size_t used = 0;
            const long out = std::stol(v, &used);
            if (used != v.size()) throw 0;
            return out;
        } catch (...) {
            throw config_error(std::string("config key '") + key + "': bad integer '" + v + "'");
        }
    };
    auto to_double = [](const std::string& v, const char* key) {
        try {
            std::size_t used = 0;
            const double out = std::stod(v, &used);
            if (used != v.size()) throw 0;
            return out;
        } catch (...) {
            throw config_error(std::string("config key '") + key + "': bad number '" + v + "'");
        }
    };

    std::optional<RunConfig> cfg;
    if (auto p = take("preset")) cfg = preset(*p);

    const bool grid_keys =
        kv.count("dim") || kv.count("nx") || kv.count("ny") || kv.count("nz") ||
        kv.count("ax") || kv.count("bx") || kv.count("ay") || kv.count("by") ||
        kv.count("az") || kv.count("bz");
    if (!cfg && !grid_keys)
        throw config_error("config file needs a preset or a grid (dim/nx/...)");

    if (grid_keys || kv.count("m")) {
        const int dim = static_cast<int>(
            to_long(take("dim").value_or(cfg ? std::to_string(cfg->grid.dim()) : "2"), "dim"));
        if (dim != 2 && dim != 3) throw config_error("dim must be 2 or 3");
        auto num = [&](const char* key, double dflt) {
            if (auto v = take(key)) return to_double(*v, key);
            return dflt;
        };
        auto cnt = [&](const char* key, index_t dflt) -> index_t {
            if (auto v = take(key)) return to_long(*v, key);
            return dflt;
        };
        const index_t nx = cnt("nx", cfg ? cfg->grid.n(0) : 0);
        if (nx <= 0) throw config_error("config needs nx (or a preset)");
        const index_t ny = cnt("ny", cfg && cfg->grid.dim() == dim ? cfg->grid.n(1) : nx);
        const double ax = num("ax", cfg ? cfg->grid.lo(0) : 0.0);
        const double bx = num("bx", cfg ? cfg->grid.hi(0) : 1.0);
        const double ay = num("ay", cfg && cfg->grid.dim() == dim ? cfg->grid.lo(1) : ax);
        const double by = num("by", cfg && cfg->grid.dim() == dim ? cfg->grid.hi(1) : bx);
        const GridSpec grid =
            dim == 2 ? GridSpec::make_2d(ax, bx, ay, by, nx, ny)
                     : GridSpec::make_3d(ax, bx, ay, by, num("az", ax), num("bz", bx), nx,
                                         ny, cnt("nz", nx));
        const int m = static_cast<int>(to_long(
            take("m").value_or(cfg ? std::to_string(cfg->params.m) : (dim == 2 ? "10" : "12")),
            "m"));
        if (!cfg) cfg = RunConfig(grid, m, CircleIc{}, 1);
        else cfg->reshape(grid, m);
    }

    if (auto v = take("seed")) cfg->set_seed(static_cast<std::uint64_t>(to_long(*v, "seed")));
    if (auto v = take("init")) cfg->init = detail::parse_initial_name(*v, cfg->seed);
    if (auto v = take("r0")) {
        const double r0 = to_double(*v, "r0");
        if (auto* c = std::get_if<CircleIc>(&cfg->init)) c->r0 = r0;
        else if (auto* sp = std::get_if<SphereIc>(&cfg->init)) sp->r0 = r0;
        else if (auto* d = std::get_if<DumbbellIc>(&cfg->init)) d->r0 = r0;
        else throw config_error("r0 applies to circle/sphere/dumbbell");
    }
    if (auto v = take("r1")) {
        if (auto* t = std::get_if<TorusIc>(&cfg->init)) t->r1 = to_double(*v, "r1");
        else throw config_error("r1 applies to torus");
    }
    if (auto v = take("r2")) {
        if (auto* t = std::get_if<TorusIc>(&cfg->init)) t->r2 = to_double(*v, "r2");
        else throw config_error("r2 applies to torus");
    }
    if (auto v = take("amplitude")) {
        if (auto* r = std::get_if<RandomIc>(&cfg->init)) r->amplitude = to_double(*v, "amplitude");
        else throw config_error("amplitude applies to random");
    }
    if (auto v = take("steps")) cfg->n_steps = to_long(*v, "steps");
    if (auto v = take("diag_stride")) cfg->diag_stride = to_long(*v, "diag_stride");
    if (auto v = take("err_stride")) cfg->err_stride = to_long(*v, "err_stride");
    if (auto v = take("snapshot_stride")) cfg->snapshot_stride = to_long(*v, "snapshot_stride");
    if (auto v = take("backend")) cfg->backend = parse_backend(*v);
    if (auto v = take("threads")) cfg->threads = static_cast<int>(to_long(*v, "threads"));
    if (auto v = take("precision")) cfg->precision = parse_precision(*v);
    if (auto v = take("dt")) cfg->set_dt(to_double(*v, "dt"));

    if (!kv.empty()) throw config_error("unknown config key '" + kv.begin()->first + "'");
    cfg->validate();
    return *cfg;
}

} // namespace acfd
