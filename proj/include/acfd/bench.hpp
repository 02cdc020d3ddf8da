#pragma once

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "acfd/presets.hpp"
#include "acfd/stepper.hpp"

namespace acfd {

struct BenchRecord {
    std::string preset;
    Backend backend = Backend::reference;
    long steps = 0;
    double seconds = 0.0; // best of the requested repetitions
    double steps_per_second = 0.0;
    double speedup_vs_reference = 0.0;
};

struct BenchOptions {
    std::vector<std::string> presets; // empty = all
    int repetitions = 1;
    int scale = 1;
    int threads = 0;
    Precision precision = Precision::f64;
};

namespace detail {

template <typename Real>
double timed_run_seconds(RunConfig cfg, Backend backend, int threads) {
    cfg.backend = backend;
    cfg.threads = threads;
    cfg.diag_stride = cfg.n_steps; // diagnostics at the ends only
    cfg.snapshot_stride = 0;
    return acfd::run<Real>(cfg).report.step_seconds;
}

} // namespace detail

/// Times every backend on every requested preset; reports the minimum wall
/// time over `repetitions` runs. The timed region is the stepping loop only.
inline std::vector<BenchRecord> run_benchmarks(const BenchOptions& opt) {
    if (opt.repetitions < 1) throw config_error("bench repetitions must be >= 1");
    std::vector<std::string> names = opt.presets.empty() ? preset_names() : opt.presets;
    constexpr Backend kBackends[] = {Backend::reference, Backend::stencil_padcopy,
                                     Backend::stencil};
    std::vector<BenchRecord> records;
    for (const auto& name : names) {
        const RunConfig cfg = scaled_config(preset(name), opt.scale);
        double ref_seconds = 0.0;
        for (Backend b : kBackends) {
            double best = std::numeric_limits<double>::infinity();
            for (int r = 0; r < opt.repetitions; ++r) {
                const double s = opt.precision == Precision::f64
                                     ? detail::timed_run_seconds<double>(cfg, b, opt.threads)
                                     : detail::timed_run_seconds<float>(cfg, b, opt.threads);
                best = std::min(best, s);
            }
            if (b == Backend::reference) ref_seconds = best;
            BenchRecord rec;
            rec.preset = name;
            rec.backend = b;
            rec.steps = cfg.n_steps;
            rec.seconds = best;
            rec.steps_per_second = best > 0.0 ? static_cast<double>(cfg.n_steps) / best : 0.0;
            rec.speedup_vs_reference = best > 0.0 ? ref_seconds / best : 0.0;
            records.push_back(rec);
        }
    }
    return records;
}

/// Text table, one row per preset: seconds per backend with the ratio to the
/// fastest backend in parentheses (the fastest column carries no ratio).
inline std::string format_bench_table(const std::vector<BenchRecord>& records) {
    std::ostringstream os;
    os << std::left << std::setw(14) << "preset" << std::right << std::setw(11)
       << "iterations" << std::setw(22) << "reference(s)" << std::setw(22)
       << "stencil-padcopy(s)" << std::setw(22) << "stencil(s)" << "\n";

    for (std::size_t i = 0; i + 2 < records.size(); i += 3) {
        const BenchRecord* rows[3] = {&records[i], &records[i + 1], &records[i + 2]};
        double fastest = std::numeric_limits<double>::infinity();
        for (const auto* r : rows) fastest = std::min(fastest, r->seconds);
        os << std::left << std::setw(14) << rows[0]->preset << std::right << std::setw(11)
           << rows[0]->steps;
        for (const auto* r : rows) {
            std::ostringstream cell;
            cell << std::fixed << std::setprecision(3) << r->seconds;
            if (r->seconds > fastest) {
                cell << " (" << std::setprecision(2) << r->seconds / fastest << ")";
            }
            os << std::setw(22) << cell.str();
        }
        os << "\n";
    }
    return os.str();
}

inline void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& os) {
    os << "preset,backend,iterations,seconds,steps_per_second,speedup_vs_reference\n";
    for (const auto& r : records)
        os << r.preset << "," << backend_name(r.backend) << "," << r.steps << ","
           << std::setprecision(9) << r.seconds << "," << r.steps_per_second << ","
           << r.speedup_vs_reference << "\n";
}

} // namespace acfd
