#include "fbr/surface_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "fbr/errors.hpp"
#include "fbr/format.hpp"

namespace fbr {

namespace {

std::string trim(std::string s) {
    if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    return s;
}

double header_value(const std::string& line, int line_no) {
    const std::string v = trim(line.substr(line.find('=') + 1));
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument("bad");
        return d;
    } catch (const std::exception&) {
        throw InputError("line " + std::to_string(line_no) + ": malformed number '" + v + "'");
    }
}

struct Block {
    int first_line = 0;
    std::vector<std::string> lines;
    bool present = false;
};

}  // namespace

SurfaceSpec parse_surface_spec(const std::string& text) {
    SurfaceSpec spec;
    bool have_period = false, have_height = false;
    std::array<std::array<Block, 2>, 3> blocks{};
    std::array<bool, 3> seen{};
    int comp = -1, part = -1;

    std::istringstream is(text);
    int line_no = 0;
    for (std::string raw; std::getline(is, raw);) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.rfind("component=", 0) == 0) {
            const std::string v = trim(line.substr(10));
            if (v != "1" && v != "2" && v != "3")
                throw InputError("line " + std::to_string(line_no) + ": component must be 1, 2 or 3, got '" + v + "'");
            comp = v[0] - '1';
            if (seen[static_cast<std::size_t>(comp)])
                throw InputError("line " + std::to_string(line_no) + ": duplicate component " + v);
            seen[static_cast<std::size_t>(comp)] = true;
            part = -1;
            continue;
        }
        if (line == "g:" || line == "f:") {
            if (comp < 0) throw InputError("line " + std::to_string(line_no) + ": '" + line + "' outside a component block");
            part = line == "g:" ? 0 : 1;
            Block& b = blocks[static_cast<std::size_t>(comp)][static_cast<std::size_t>(part)];
            if (b.present) throw InputError("line " + std::to_string(line_no) + ": duplicate '" + line + "' block");
            b.present = true;
            b.first_line = line_no + 1;
            continue;
        }
        if (comp < 0) {
            if (line.rfind("period=", 0) == 0) {
                spec.period = header_value(line, line_no);
                have_period = true;
            } else if (line.rfind("height=", 0) == 0) {
                spec.height = header_value(line, line_no);
                have_height = true;
            } else {
                throw InputError("line " + std::to_string(line_no) + ": unknown header field '" + line + "'");
            }
            continue;
        }
        if (part < 0) throw InputError("line " + std::to_string(line_no) + ": expected 'g:' or 'f:'");
        Block& b = blocks[static_cast<std::size_t>(comp)][static_cast<std::size_t>(part)];
        // Keep line numbers aligned by padding skipped lines.
        while (b.first_line + static_cast<int>(b.lines.size()) < line_no) b.lines.emplace_back();
        b.lines.push_back(raw);
    }
    if (!have_period || !(spec.period > 0.0)) throw InputError("line 1: missing or nonpositive period= header");
    if (!have_height || !(spec.height > 0.0)) throw InputError("line 1: missing or nonpositive height= header");
    for (std::size_t k = 0; k < 3; ++k) {
        if (!seen[k]) throw InputError("line " + std::to_string(line_no) + ": component " + std::to_string(k + 1) + " missing");
        for (std::size_t p = 0; p < 2; ++p) {
            const Block& b = blocks[k][p];
            if (!b.present)
                throw InputError("line " + std::to_string(line_no) + ": component " + std::to_string(k + 1) + " lacks '" +
                                 (p == 0 ? "g:" : "f:") + "'");
            TrigPolynomial t = parse_trig_polynomial(b.lines, b.first_line);
            if (std::abs(t.period - spec.period) > 1e-12 * spec.period)
                throw InputError("line " + std::to_string(b.first_line) + ": block period differs from the header period");
            (p == 0 ? spec.components[k].g : spec.components[k].f) = std::move(t);
        }
        spec.components[k].y0 = 0.0;
    }
    return spec;
}

void write_surface_spec(std::ostream& out, const SurfaceSpec& spec) {
    out << "period=" << format_double(spec.period) << "\n";
    out << "height=" << format_double(spec.height) << "\n";
    for (std::size_t k = 0; k < 3; ++k) {
        out << "component=" << k + 1 << "\ng:\n";
        write_trig_polynomial(out, spec.components[k].g);
        out << "f:\n";
        write_trig_polynomial(out, spec.components[k].f);
    }
}

SurfaceSpec surface_spec_from_traces(const AnalyticSurface& surface, int samples) {
    const StripDomain d = surface.domain();
    if (!d.periodic()) throw InputError("surface traces need a periodic chart");
    if (d.y_lo != 0.0) throw InputError("surface traces are taken on y = 0, which must be the lower strip edge");
    SurfaceSpec spec;
    spec.period = d.period;
    spec.height = d.height();
    std::array<std::vector<double>, 3> g, f;
    for (int j = 0; j < samples; ++j) {
        const SurfacePoint p = surface.evaluate(d.period * j / samples, 0.0);
        for (std::size_t k = 0; k < 3; ++k) {
            g[k].push_back(p.value[static_cast<int>(k)]);
            f[k].push_back(p.dy[static_cast<int>(k)]);
        }
    }
    for (std::size_t k = 0; k < 3; ++k) {
        spec.components[k].g = fourier_analyze(g[k], d.period);
        spec.components[k].f = fourier_analyze(f[k], d.period);
        spec.components[k].g.prune(samples, 1e-14);
        spec.components[k].f.prune(samples, 1e-14);
    }
    return spec;
}

std::shared_ptr<const SeriesSurface> build_surface(const SurfaceSpec& spec, const std::string& name,
                                                   double conformal_tol) {
    std::array<HarmonicStripFunction, 3> comps;
    for (std::size_t k = 0; k < 3; ++k) comps[k] = solve_cauchy(spec.components[k]);
    auto surface = std::make_shared<const SeriesSurface>(std::move(comps), spec.height, name);
    // Conformality on an interior grid, relative to the metric.
    double worst = 0.0;
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j <= 8; ++j) {
            const SurfacePoint p = surface->evaluate(spec.period * i / 32.0, spec.height * j / 8.0);
            const double e = p.dx.squaredNorm();
            const double r = std::max(std::abs(e - p.dy.squaredNorm()), std::abs(p.dx.dot(p.dy))) / std::max(1e-300, e);
            worst = std::max(worst, r);
        }
    if (!(worst <= conformal_tol))
        throw InputError("surface '" + name + "' is not conformal: residual " + format_double(worst) + " exceeds " +
                         format_double(conformal_tol));
    return surface;
}

SurfacePtr load_surface(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open surface file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return build_surface(parse_surface_spec(ss.str()), path);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

}  // namespace fbr
