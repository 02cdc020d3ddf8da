#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acfd/bench.hpp"
#include "acfd/config_file.hpp"
#include "acfd/field_io.hpp"
#include "acfd/presets.hpp"
#include "acfd/stepper.hpp"

namespace acfd {

namespace cli_detail {

struct RunOpts {
    std::optional<std::string> preset_name;
    std::optional<std::string> config_path;
    std::vector<std::string> backends;
    std::optional<std::string> precision;
    std::optional<std::string> init_name;
    std::optional<int> threads;
    std::optional<long> steps;
    std::optional<long> diag_stride;
    std::optional<long> err_stride;
    std::optional<long> snapshots;
    std::optional<std::uint64_t> seed;
    std::optional<int> m;
    std::optional<double> dt;
    std::optional<double> r0, r1, r2, amplitude;
    std::optional<int> dim;
    std::optional<long> nx, ny, nz;
    std::optional<double> ax, bx, ay, by, az, bz;
    int scale = 1;
    std::string out_dir = "acfd-out";
    std::string dump_format = "binary";
};

inline RunConfig build_config(const RunOpts& o) {
    std::optional<RunConfig> cfg;
    if (o.config_path) cfg = load_config_file(*o.config_path);
    if (o.preset_name) {
        if (cfg) throw config_error("--preset and --config are mutually exclusive");
        cfg = preset(*o.preset_name);
    }

    const bool grid_flags = o.dim || o.nx || o.ny || o.nz || o.ax || o.bx || o.ay ||
                            o.by || o.az || o.bz;
    if (grid_flags || (!cfg && o.init_name)) {
        const int dim = o.dim.value_or(cfg ? cfg->grid.dim() : 2);
        if (dim != 2 && dim != 3) throw config_error("--dim must be 2 or 3");
        const index_t nx = o.nx.value_or(cfg ? cfg->grid.n(0) : 0);
        if (nx <= 0) throw config_error("custom runs need --nx");
        const index_t ny = o.ny.value_or(nx);
        const double ax = o.ax.value_or(0.0), bx = o.bx.value_or(1.0);
        const double ay = o.ay.value_or(ax), by = o.by.value_or(bx);
        const GridSpec grid =
            dim == 2 ? GridSpec::make_2d(ax, bx, ay, by, nx, ny)
                     : GridSpec::make_3d(ax, bx, ay, by, o.az.value_or(ax),
                                         o.bz.value_or(bx), nx, ny, o.nz.value_or(nx));
        const int m = o.m.value_or(cfg ? cfg->params.m : (dim == 2 ? 10 : 12));
        if (!cfg) cfg = RunConfig(grid, m, CircleIc{}, 1);
        else cfg->reshape(grid, m);
    } else if (o.m && cfg) {
        cfg->reshape(cfg->grid, *o.m);
    }
    if (!cfg) throw config_error("run needs --preset, --config, or an explicit grid");

    if (o.seed) cfg->set_seed(*o.seed);
    if (o.init_name) cfg->init = detail::parse_initial_name(*o.init_name, cfg->seed);
    if (o.r0) {
        if (auto* c = std::get_if<CircleIc>(&cfg->init)) c->r0 = *o.r0;
        else if (auto* s = std::get_if<SphereIc>(&cfg->init)) s->r0 = *o.r0;
        else if (auto* d = std::get_if<DumbbellIc>(&cfg->init)) d->r0 = *o.r0;
        else throw config_error("--r0 applies to circle/sphere/dumbbell");
    }
    if (o.r1) {
        if (auto* t = std::get_if<TorusIc>(&cfg->init)) t->r1 = *o.r1;
        else throw config_error("--r1 applies to torus");
    }
    if (o.r2) {
        if (auto* t = std::get_if<TorusIc>(&cfg->init)) t->r2 = *o.r2;
        else throw config_error("--r2 applies to torus");
    }
    if (o.amplitude) {
        if (auto* r = std::get_if<RandomIc>(&cfg->init)) r->amplitude = *o.amplitude;
        else throw config_error("--amplitude applies to random");
    }
    if (o.steps) cfg->n_steps = *o.steps;
    if (o.dt) cfg->set_dt(*o.dt);
    if (o.threads) cfg->threads = *o.threads;
    if (o.diag_stride) cfg->diag_stride = *o.diag_stride;
    if (o.err_stride) cfg->err_stride = *o.err_stride;
    if (o.precision) cfg->precision = parse_precision(*o.precision);
    if (!o.backends.empty()) cfg->backend = parse_backend(o.backends.front());

    *cfg = scaled_config(*cfg, o.scale);
    if (o.snapshots && *o.snapshots > 0)
        cfg->snapshot_stride = std::max<long>(1, cfg->n_steps / *o.snapshots);
    cfg->validate();
    return *cfg;
}

template <typename Real>
int do_single_run(const RunConfig& cfg, const RunOpts& o) {
    namespace fs = std::filesystem;
    const fs::path out(o.out_dir);
    fs::create_directories(out);
    const DumpFormat dump_fmt =
        o.dump_format == "text" ? DumpFormat::text : DumpFormat::binary;

    DiagnosticsCsv csv(out / "diagnostics.csv");
    RunHooks<Real> hooks;
    hooks.on_diagnostics = [&](const Diagnostics& d, const ScalarField<Real>&) {
        csv.append(d);
    };
    hooks.on_snapshot = [&](long step, double, const ScalarField<Real>& f) {
        std::ostringstream name;
        name << "snapshot-" << std::setw(8) << std::setfill('0') << step;
        write_snapshot(f, out / (name.str() + ".pgm"));
        write_field_dump(f, out / (name.str() + ".bin"), dump_fmt);
    };

    SimResult<Real> res = acfd::run<Real>(cfg, hooks);
    write_field_dump(res.field, out / "final.bin", dump_fmt);

    const Diagnostics& last = res.report.diagnostics.back();
    std::cout << cfg.name << " backend=" << backend_name(cfg.backend)
              << " precision=" << (sizeof(Real) == 8 ? "f64" : "f32")
              << " steps=" << res.report.n_steps << " time=" << std::fixed
              << std::setprecision(3) << res.report.step_seconds << "s"
              << " steps/s=" << std::setprecision(0) << res.report.steps_per_second
              << std::setprecision(6) << std::defaultfloat << " min=" << last.min
              << " max=" << last.max << " energy=" << last.energy << "\n";
    return 0;
}

template <typename Real>
int do_dual_run(const RunConfig& cfg, const RunOpts& o, Backend ba, Backend bb) {
    namespace fs = std::filesystem;
    const fs::path out(o.out_dir);
    fs::create_directories(out);
    const DumpFormat dump_fmt =
        o.dump_format == "text" ? DumpFormat::text : DumpFormat::binary;

    DualResult<Real, Real> res = run_dual<Real, Real>(cfg, ba, bb);
    for (const SimResult<Real>* r : {&res.a, &res.b}) {
        const std::string tag = backend_name(r->report.backend);
        DiagnosticsCsv csv(out / ("diagnostics-" + tag + ".csv"));
        for (const auto& d : r->report.diagnostics) csv.append(d);
        write_field_dump(r->field, out / ("final-" + tag + ".bin"), dump_fmt);
    }
    std::cout << cfg.name << " dual " << backend_name(ba) << " vs " << backend_name(bb)
              << " steps=" << cfg.n_steps << " Err=" << std::scientific
              << std::setprecision(6) << res.err << std::defaultfloat << " time="
              << std::fixed << std::setprecision(3) << res.a.report.step_seconds << "s/"
              << res.b.report.step_seconds << "s\n";
    return 0;
}

inline int cmd_run(const RunOpts& o) {
    const RunConfig cfg = build_config(o);
    if (o.backends.size() > 2)
        throw config_error("at most two --backend values (two run the dual comparison)");
    if (o.backends.size() == 2) {
        const Backend ba = parse_backend(o.backends[0]);
        const Backend bb = parse_backend(o.backends[1]);
        return cfg.precision == Precision::f64 ? do_dual_run<double>(cfg, o, ba, bb)
                                               : do_dual_run<float>(cfg, o, ba, bb);
    }
    return cfg.precision == Precision::f64 ? do_single_run<double>(cfg, o)
                                           : do_single_run<float>(cfg, o);
}

inline int cmd_presets() {
    std::cout << std::left << std::setw(14) << "name" << std::setw(18) << "grid"
              << std::setw(26) << "domain" << std::setw(4) << "m" << std::setw(12)
              << "iterations" << "T\n";
    for (const auto& p : experiment_presets()) {
        std::ostringstream grid, domain;
        for (int a = 0; a < p.config.grid.dim(); ++a) {
            if (a) grid << "x";
            grid << p.config.grid.n(a);
        }
        for (int a = 0; a < p.config.grid.dim(); ++a) {
            if (a) domain << " x ";
            domain << "(" << p.config.grid.lo(a) << "," << p.config.grid.hi(a) << ")";
        }
        const double derived_t = static_cast<double>(p.config.n_steps) * p.config.params.dt;
        std::cout << std::left << std::setw(14) << p.name << std::setw(18) << grid.str()
                  << std::setw(26) << domain.str() << std::setw(4) << p.config.params.m
                  << std::setw(12) << p.config.n_steps << std::setprecision(6)
                  << (p.nominal_final_time ? *p.nominal_final_time : derived_t);
        // the +-1 iteration convention makes derived T overshoot nominal T by
        // one dt; only a real disagreement is worth flagging
        if (p.nominal_final_time &&
            std::abs(*p.nominal_final_time - derived_t) > 2.0 * p.config.params.dt)
            std::cout << " (nominal; iterations give " << derived_t << ")";
        std::cout << "\n";
    }
    return 0;
}

struct BenchCliOpts {
    std::vector<std::string> presets;
    int reps = 1;
    int scale = 1;
    int threads = 0;
    std::string precision = "f64";
    std::optional<std::string> out_dir;
};

inline int cmd_bench(const BenchCliOpts& o) {
    BenchOptions opt;
    opt.presets = o.presets;
    opt.repetitions = o.reps;
    opt.scale = o.scale;
    opt.threads = o.threads;
    opt.precision = parse_precision(o.precision);
    const std::vector<BenchRecord> records = run_benchmarks(opt);
    std::cout << format_bench_table(records);
    if (o.out_dir) {
        namespace fs = std::filesystem;
        fs::create_directories(*o.out_dir);
        std::ofstream csv(fs::path(*o.out_dir) / "bench.csv");
        if (!csv) throw io_error("cannot write bench.csv under " + *o.out_dir);
        write_bench_csv(records, csv);
    }
    return 0;
}

struct Table3Opts {
    int dim = 2;
    std::string pair = "f64/f64";
    int scale = 1;
    long err_stride = 1;
    std::optional<std::string> out_dir;
};

inline int cmd_table3(const Table3Opts& o) {
    if (o.dim != 2 && o.dim != 3) throw config_error("--dim must be 2 or 3");
    // Table-3 column order
    const std::vector<std::string> cols2 = {"separation2d", "dumbbell2d", "circle2d",
                                            "maze2d",       "star2d",     "torus2d"};
    const std::vector<std::string> cols3 = {"separation3d", "dumbbell3d", "sphere3d",
                                            "maze3d",       "star3d",     "torus3d"};
    const auto& cols = o.dim == 2 ? cols2 : cols3;

    std::vector<double> errs;
    for (const auto& name : cols) {
        RunConfig cfg = scaled_config(preset(name), o.scale);
        cfg.err_stride = o.err_stride;
        cfg.diag_stride = cfg.n_steps;
        double err = 0.0;
        if (o.pair == "f64/f64")
            err = run_dual<double, double>(cfg).err;
        else if (o.pair == "f64/f32")
            err = run_dual<double, float>(cfg).err;
        else if (o.pair == "f32/f32")
            err = run_dual<float, float>(cfg).err;
        else
            throw config_error("--precision-pair must be f64/f64, f64/f32 or f32/f32");
        errs.push_back(err);
    }

    std::cout << o.dim << "D Err (" << o.pair << ", scale " << o.scale << "):";
    for (std::size_t i = 0; i < cols.size(); ++i) {
        std::string label = cols[i].substr(0, cols[i].size() - 2);
        std::cout << " " << label << "=" << std::scientific << std::setprecision(2)
                  << errs[i] << std::defaultfloat;
    }
    std::cout << "\n";

    if (o.out_dir) {
        namespace fs = std::filesystem;
        fs::create_directories(*o.out_dir);
        std::ofstream csv(fs::path(*o.out_dir) / "table3.csv");
        if (!csv) throw io_error("cannot write table3.csv under " + *o.out_dir);
        csv << "dim,pair,preset,err\n";
        for (std::size_t i = 0; i < cols.size(); ++i)
            csv << o.dim << "," << o.pair << "," << cols[i] << "," << std::scientific
                << std::setprecision(9) << errs[i] << "\n";
    }
    return 0;
}

} // namespace cli_detail

/// Parse and execute one CLI invocation (arguments without the program name).
/// Exit codes: 0 ok, 2 configuration/usage, 3 divergence, 4 I/O.
inline int run_cli(std::vector<std::string> args) {
    CLI::App app{"Allen-Cahn explicit finite-difference solver and benchmark harness"};
    app.require_subcommand(1);

    cli_detail::RunOpts ro;
    CLI::App* runc = app.add_subcommand("run", "Run one simulation and write diagnostics");
    runc->add_option("--preset", ro.preset_name, "Experiment preset name");
    runc->add_option("--config", ro.config_path, "Key=value configuration file");
    runc->add_option("--backend", ro.backends,
                     "reference|stencil|stencil-padcopy (twice = dual run with Err)");
    runc->add_option("--precision", ro.precision, "f32|f64 (default f64)");
    runc->add_option("--threads", ro.threads, "Stencil worker threads (0 = default)");
    runc->add_option("--scale", ro.scale, "Desk-scale divisor: N/s cells, steps/s^2");
    runc->add_option("--steps", ro.steps, "Override step count");
    runc->add_option("--seed", ro.seed, "RNG seed");
    runc->add_option("--m", ro.m, "Interface cells (eps_m)");
    runc->add_option("--dt", ro.dt, "Override time step (default 0.1 h^2)");
    runc->add_option("--init", ro.init_name, "circle|sphere|dumbbell|star|torus|maze|random");
    runc->add_option("--r0", ro.r0, "Circle/sphere/dumbbell radius");
    runc->add_option("--r1", ro.r1, "Torus major radius");
    runc->add_option("--r2", ro.r2, "Torus minor radius");
    runc->add_option("--amplitude", ro.amplitude, "Random initial amplitude");
    runc->add_option("--dim", ro.dim, "2 or 3 (custom grid)");
    runc->add_option("--nx", ro.nx, "Cells along x");
    runc->add_option("--ny", ro.ny, "Cells along y (default nx)");
    runc->add_option("--nz", ro.nz, "Cells along z (default nx)");
    runc->add_option("--ax", ro.ax, "Domain lower bound, x");
    runc->add_option("--bx", ro.bx, "Domain upper bound, x");
    runc->add_option("--ay", ro.ay, "Domain lower bound, y");
    runc->add_option("--by", ro.by, "Domain upper bound, y");
    runc->add_option("--az", ro.az, "Domain lower bound, z");
    runc->add_option("--bz", ro.bz, "Domain upper bound, z");
    runc->add_option("--snapshots", ro.snapshots, "Write about this many PGM snapshots");
    runc->add_option("--diag-stride", ro.diag_stride, "Diagnostics every this many steps");
    runc->add_option("--err-stride", ro.err_stride, "Dual-run Err sampling stride");
    runc->add_option("--out", ro.out_dir, "Output directory (default acfd-out)");
    runc->add_option("--dump-format", ro.dump_format, "binary|text field dumps");

    cli_detail::BenchCliOpts bo;
    CLI::App* benchc = app.add_subcommand("bench", "Time all backends per preset");
    benchc->add_option("--presets", bo.presets, "Preset names (default: all twelve)");
    benchc->add_option("--reps", bo.reps, "Repetitions; the minimum time is reported");
    benchc->add_option("--scale", bo.scale, "Desk-scale divisor");
    benchc->add_option("--threads", bo.threads, "Stencil worker threads");
    benchc->add_option("--precision", bo.precision, "f32|f64");
    benchc->add_option("--out", bo.out_dir, "Directory for bench.csv");

    cli_detail::Table3Opts to;
    CLI::App* tablec = app.add_subcommand("table3", "Cross-backend Err per preset suite");
    tablec->add_option("--dim", to.dim, "2 or 3");
    tablec->add_option("--precision-pair", to.pair, "f64/f64 | f64/f32 | f32/f32");
    tablec->add_option("--scale", to.scale, "Desk-scale divisor");
    tablec->add_option("--err-stride", to.err_stride, "Err sampling stride");
    tablec->add_option("--out", to.out_dir, "Directory for table3.csv");

    CLI::App* presetsc = app.add_subcommand("presets", "List the experiment presets");

    int rc = 0;
    runc->callback([&] { rc = cli_detail::cmd_run(ro); });
    benchc->callback([&] { rc = cli_detail::cmd_bench(bo); });
    tablec->callback([&] { rc = cli_detail::cmd_table3(to); });
    presetsc->callback([&] { rc = cli_detail::cmd_presets(); });

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const divergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) { // config/param/dimension errors
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}

} // namespace acfd
