#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "acfd/analysis.hpp"
#include "acfd/errors.hpp"
#include "acfd/grid.hpp"
#include "acfd/run_config.hpp"

namespace acfd {

enum class DumpFormat { binary, text };

namespace detail {

inline std::string fmt_full(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace detail

/// Raw field dump: a short plain-text header (dim, interior counts, bounds,
/// h, precision, payload format) followed by the interior values in row-major
/// order. Binary payload is little-endian IEEE and round-trips bit-exactly.
template <typename Real>
void write_field_dump(const ScalarField<Real>& f, const std::filesystem::path& path,
                      DumpFormat format = DumpFormat::binary) {
    const GridSpec& s = f.spec();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open '" + path.string() + "' for writing");
    os << "acfd-field 1\n";
    os << "dim " << s.dim() << "\n";
    os << "n";
    for (int a = 0; a < s.dim(); ++a) os << " " << s.n(a);
    os << "\nbounds";
    for (int a = 0; a < s.dim(); ++a)
        os << " " << detail::fmt_full(s.lo(a)) << " " << detail::fmt_full(s.hi(a));
    os << "\nh " << detail::fmt_full(s.h()) << "\n";
    os << "precision " << (sizeof(Real) == 8 ? "f64" : "f32") << "\n";
    os << "format " << (format == DumpFormat::binary ? "binary" : "text") << "\n";
    os << "data\n";
    const std::vector<Real> interior = f.interior();
    if (format == DumpFormat::binary) {
        os.write(reinterpret_cast<const char*>(interior.data()),
                 static_cast<std::streamsize>(interior.size() * sizeof(Real)));
    } else {
        os << std::setprecision(std::numeric_limits<Real>::max_digits10);
        for (const Real v : interior) os << v << "\n";
    }
    if (!os) throw io_error("write failed for '" + path.string() + "'");
}

inline Precision dump_precision(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open '" + path.string() + "'");
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("precision ", 0) == 0) return parse_precision(line.substr(10));
        if (line == "data") break;
    }
    throw io_error("no precision line in '" + path.string() + "'");
}

template <typename Real>
ScalarField<Real> read_field_dump(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(is, line) || line != "acfd-field 1")
        throw io_error("'" + path.string() + "' is not an acfd field dump");

    int dim = 0;
    std::vector<index_t> n;
    std::vector<double> bounds;
    std::string precision, format;
    while (std::getline(is, line) && line != "data") {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "dim") ls >> dim;
        else if (key == "n") {
            index_t v;
            while (ls >> v) n.push_back(v);
        } else if (key == "bounds") {
            double v;
            while (ls >> v) bounds.push_back(v);
        } else if (key == "precision") ls >> precision;
        else if (key == "format") ls >> format;
        // h is re-derived from bounds and counts
    }
    if (dim != 2 && dim != 3) throw io_error("bad dim in dump header");
    if (n.size() != static_cast<std::size_t>(dim) || bounds.size() != 2 * n.size())
        throw io_error("bad n/bounds in dump header");
    const std::string want = sizeof(Real) == 8 ? "f64" : "f32";
    if (precision != want)
        throw io_error("dump precision is " + precision + ", expected " + want);

    const GridSpec spec =
        dim == 2 ? GridSpec::make_2d(bounds[0], bounds[1], bounds[2], bounds[3], n[0], n[1])
                 : GridSpec::make_3d(bounds[0], bounds[1], bounds[2], bounds[3], bounds[4],
                                     bounds[5], n[0], n[1], n[2]);
    std::vector<Real> interior(static_cast<std::size_t>(spec.interior_cells()));
    if (format == "binary") {
        is.read(reinterpret_cast<char*>(interior.data()),
                static_cast<std::streamsize>(interior.size() * sizeof(Real)));
        if (is.gcount() != static_cast<std::streamsize>(interior.size() * sizeof(Real)))
            throw io_error("truncated binary payload in '" + path.string() + "'");
    } else if (format == "text") {
        for (auto& v : interior)
            if (!(is >> v)) throw io_error("truncated text payload in '" + path.string() + "'");
    } else {
        throw io_error("bad format in dump header");
    }
    return make_field<Real>(spec, interior);
}

/// Grayscale snapshot: phi=-1 maps to black, phi=+1 to white, one pixel per
/// cell. 2D writes the whole field; 3D writes the z-midplane slice. Binary
/// PGM (P5), rows run from the top of the domain down.
template <typename Real>
void write_snapshot(const ScalarField<Real>& f, const std::filesystem::path& path) {
    const GridSpec& s = f.spec();
    const index_t nx = s.n(0), ny = s.n(1);
    const index_t iz = s.dim() == 3 ? s.n(2) / 2 + 1 : 0; // extended slice index
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open '" + path.string() + "' for writing");
    os << "P5\n" << nx << " " << ny << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(nx));
    for (index_t iy = ny; iy >= 1; --iy) {
        for (index_t ix = 1; ix <= nx; ++ix) {
            const double v = static_cast<double>(f(ix, iy, iz));
            const double g = std::clamp((v + 1.0) * 0.5, 0.0, 1.0) * 255.0;
            row[static_cast<std::size_t>(ix - 1)] =
                static_cast<unsigned char>(std::lround(g));
        }
        os.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(row.size()));
    }
    if (!os) throw io_error("write failed for '" + path.string() + "'");
}

/// Appends diagnostics rows to a CSV; NaN radius columns are left blank.
class DiagnosticsCsv {
public:
    explicit DiagnosticsCsv(const std::filesystem::path& path) : os_(path) {
        if (!os_) throw io_error("cannot open '" + path.string() + "' for writing");
        os_ << "step,t,radius,exact_radius,energy,min,max,separated_fraction\n";
    }

    void append(const Diagnostics& d) {
        os_ << d.step << "," << std::setprecision(12) << d.t << ",";
        if (std::isfinite(d.radius)) os_ << std::setprecision(12) << d.radius;
        os_ << ",";
        if (std::isfinite(d.exact_radius)) os_ << std::setprecision(12) << d.exact_radius;
        os_ << "," << std::setprecision(12) << d.energy << "," << d.min << "," << d.max
            << "," << d.separated_fraction << "\n";
    }

private:
    std::ofstream os_;
};

} // namespace acfd
