#include "fbr/run.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "fbr/catalog.hpp"
#include "fbr/errors.hpp"
#include "fbr/extension.hpp"
#include "fbr/format.hpp"
#include "fbr/geometry.hpp"
#include "fbr/mesh_export.hpp"
#include "fbr/parallel.hpp"
#include "fbr/reflection.hpp"

namespace fbr {

namespace {

constexpr double kConformalTol = 1e-8;
constexpr double kPeriodicTol = 1e-10;
constexpr double kMeanCurvatureTol = 1e-6;
constexpr double kHopfTol = 1e-6;
constexpr double kFluxTol = 1e-8;
constexpr double kLaplacianTol = 1e-6;
constexpr double kLogTol = 1e-9;
constexpr double kBoundaryTol = 1e-8;
constexpr int kSuperharmonicSamples = 1000;

using Clock = std::chrono::steady_clock;

class Stopwatch {
public:
    explicit Stopwatch(Json& sink) : sink_(sink) {}
    template <class F>
    auto time(const std::string& stage, F&& f) {
        const auto t0 = Clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            record(stage, t0);
        } else {
            auto r = f();
            record(stage, t0);
            return r;
        }
    }

private:
    void record(const std::string& stage, Clock::time_point t0) {
        sink_[stage] = std::chrono::duration<double>(Clock::now() - t0).count();
    }
    Json& sink_;
};

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

CheckResult at(CheckResult c, double x, double y) {
    c.location = std::make_pair(x, y);
    return c;
}

bool two_free_lines(const AnalyticSurface& s) {
    return s.domain().periodic() && s.free_edges().size() == 2;
}

ExtendOptions extend_options(const RunConfig& config) {
    ExtendOptions o;
    o.reflection.steklov_tol = config.steklov_tol;
    o.reflection.match_tol = config.match_tol;
    return o;
}

void steklov_checks(VerificationReport& report, const AnalyticSurface& s, const RunConfig& config) {
    const auto free = s.free_edges();
    if (free.empty()) {
        report.add(reported_check("steklov", 0.0, "no free boundary"));
        return;
    }
    for (const auto& e : free) {
        const SteklovReport st = verify_steklov(s, e);
        report.add(at(make_check("steklov." + e.label, st.max_residual, "<=", config.steklov_tol), st.worst_x, e.y));
    }
}

void surface_checks(VerificationReport& report, const AnalyticSurface& s, const RunConfig& config) {
    const auto inv = check_surface_invariants(s, 400, config.seed);
    report.add(make_check("surface.conformality", inv.conformality, "<=", kConformalTol));
    if (s.harmonic())
        report.add(make_check("surface.harmonicity", inv.harmonicity, "<=", kConformalTol));
    else
        report.add(reported_check("surface.harmonicity", inv.harmonicity, "not a minimal chart"));
}

// Periodicity (relative to max(1, |Psi|)), conformality, seam matching and |H| over the extended strip.
void extension_checks(VerificationReport& report, const ExtendedSurface& ext, const RunConfig& config) {
    const StripDomain d = ext.domain();
    const auto inv = check_surface_invariants(ext, 400, config.seed);
    report.add(make_check("extension.conformality", inv.conformality, "<=", kConformalTol));

    const int nx = config.nx, ny = config.ny;
    std::vector<double> per(ny + 1), hmax(ny + 1), per_x(ny + 1), h_x(ny + 1);
    parallel_for(static_cast<std::size_t>(ny + 1), config.threads, [&](std::size_t j) {
        const double y = d.y_lo + d.height() * static_cast<double>(j) / ny;
        for (int i = 0; i < nx; ++i) {
            const double x = d.period * (i + 0.5) / nx;
            const Vec3 a = ext.position(x, y);
            const double p = (ext.position(x + d.period, y) - a).norm() / std::max(1.0, a.norm());
            if (p > per[j]) per[j] = p, per_x[j] = x;
            double h = 0.0;
            try {
                h = std::abs(fundamental_forms(ext, x, y).H_mean);
            } catch (const EvaluationRangeError&) {
            }
            if (h > hmax[j]) hmax[j] = h, h_x[j] = x;
        }
    });
    std::size_t jp = 0, jh = 0;
    for (std::size_t j = 0; j < per.size(); ++j) {
        if (per[j] > per[jp]) jp = j;
        if (hmax[j] > hmax[jh]) jh = j;
    }
    auto y_of = [&](std::size_t j) { return d.y_lo + d.height() * static_cast<double>(j) / ny; };
    double hm = hmax[jh], hx = h_x[jh], hy = y_of(jh);
    // Bands straddling every seam, by finite differences of positions so the stencil crosses the seam.
    for (const auto& p : ext.pieces())
        for (double seam : {p.y_lo, p.y_hi}) {
            if (seam <= d.y_lo || seam >= d.y_hi) continue;
            for (int k = -5; k <= 5; ++k)
                for (double x : {0.1 * d.period, 0.55 * d.period}) {
                    const double y = seam + 2e-3 * k;
                    const double h = std::abs(fundamental_forms_fd(ext, x, y).H_mean);
                    if (h > hm) hm = h, hx = x, hy = y;
                }
        }
    report.add(at(make_check("extension.periodicity", per[jp], "<=", kPeriodicTol), per_x[jp], y_of(jp)));
    report.add(at(make_check("extension.mean_curvature", hm, "<=", kMeanCurvatureTol), hx, hy));

    double seam = 0.0;
    for (const auto& s : ext.steps()) seam = std::max(seam, s.seam_residual);
    report.add(make_check("extension.seam_c1", seam, "<=", config.match_tol));
    report.add(reported_check("extension.punctures", ext.punctures().points.size(),
                              "zeros of H' found across all steps"));
}

// Hopf, curvature, flux, convexity and Gauss map on an annulus bounded by two free circles.
void curvature_checks(VerificationReport& report, const SurfacePtr& base, const ExtensionPtr& ext,
                      const RunConfig& config, Stopwatch& clock) {
    const PlaneModel model = to_punctured_plane(ext);
    const std::vector<BoundaryEdge> lines{ext->lower_line(), ext->upper_line()};
    const CurvatureReport cr =
        clock.time("curvature_report", [&] { return curvature_report(model, lines, config.nx, config.ny); });
    report.curvature = cr;

    report.add(make_check("hopf.beta_sup", cr.hopf.beta_sup, "<=", kHopfTol));
    report.add(make_check("hopf.alpha_spread", cr.hopf.alpha_spread, "<=", kHopfTol));
    report.add(make_check("hopf.K_max", cr.hopf.K_max, "<", 0.0));
    const double kid = clock.time("gauss_identity",
                                  [&] { return gaussian_curvature_identity(model, cr.hopf.c, config.nx, config.ny); });
    report.add(make_check("hopf.K_identity", kid, "<=", kHopfTol));
    const HopfReport cr_scan = hopf_scan(model, 16, 8, 1e-4);
    report.add(reported_check("hopf.holomorphy", cr_scan.holomorphy, "reported only: difference quotients lose digits far from the unit circle"));

    const double err = std::abs(cr.total.total + 4.0 * std::numbers::pi);
    if (ext->n() >= 8)
        report.add(make_check("total_curvature.error", err, "<=", config.quad_tol * 4.0 * std::numbers::pi));
    else
        report.add(reported_check("total_curvature.error", err, "reported only below 8 steps"));

    report.add(make_check("flux.balance", cr.flux_sum.norm(), "<=", kFluxTol));
    for (const auto& l : cr.lines) {
        report.add(make_check("convexity." + l.label, l.convexity, ">", 0.0));
        report.add(reported_check("schwarz." + l.label, l.schwarz));
    }

    const InjectivityReport inj = clock.time("gauss_map", [&] {
        return injectivity_scan(gauss_map_samples(*base, std::min(config.nx, 48), std::min(config.ny, 24)));
    });
    report.add(make_check("gauss_map.min_angle", inj.min_angle, ">", 0.0));

    const CurvatureLineReport lines_check = curvature_line_forms_check(*ext, 16, 8);
    report.add(reported_check("curvature_lines.first_form", lines_check.first_form, "status " + lines_check.status));
    report.add(reported_check("curvature_lines.second_form", lines_check.second_form, "status " + lines_check.status));
}

void superharmonic_report(VerificationReport& report, const AnalyticSurface& s, const RunConfig& config) {
    if (!s.harmonic()) {
        report.add(reported_check("superharmonic.laplacian_r2", std::nan(""), "not a minimal chart"));
        return;
    }
    const SuperharmonicReport sh = superharmonic_checks(s, kSuperharmonicSamples, config.seed);
    report.add(make_check("superharmonic.laplacian_r2", sh.laplacian_r2, "<=", kLaplacianTol));
    // Delta(-log r) <= 0 up to rounding.
    report.add(make_check("superharmonic.log_max", sh.log_max, "<=", kLogTol));
    if (s.free_edges().empty()) return;
    report.add(make_check("superharmonic.boundary_value", sh.boundary_value, "<=", kBoundaryTol));
    report.add(make_check("superharmonic.boundary_normal", sh.boundary_normal, "<=", kBoundaryTol));
}

Json extension_details(const ExtendedSurface& ext, const RunConfig& config) {
    Json steps = Json::array();
    for (const auto& s : ext.steps()) {
        Json p = Json::array();
        for (const auto& q : s.punctures.points)
            p.push_back({{"z", Json::array({q.z.real(), q.z.imag()})}, {"multiplicity", q.multiplicity}});
        steps.push_back({{"index", s.index},
                         {"line", s.line},
                         {"band", Json::array({s.band_lo, s.band_hi})},
                         {"strip", Json::array({s.strip_lo, s.strip_hi})},
                         {"seam_residual", s.seam_residual},
                         {"punctures", p}});
    }
    Json coverage = Json::array();
    for (const auto& c : coverage_monitor(ext, config.nx))
        coverage.push_back({{"step", c.step}, {"band_area", c.band_area}, {"cumulative", c.cumulative}});
    return {{"strip", Json::array({ext.domain().y_lo, ext.domain().y_hi})}, {"steps", steps}, {"coverage", coverage}};
}

void filter_checks(VerificationReport& report, const std::vector<std::string>& wanted) {
    if (wanted.empty()) return;
    std::vector<CheckResult> kept;
    for (const auto& w : wanted) {
        bool found = false;
        for (const auto& c : report.checks)
            if (c.name == w || c.name.rfind(w + ".", 0) == 0) {
                bool dup = false;
                for (const auto& k : kept) dup = dup || k.name == c.name;
                if (!dup) kept.push_back(c);
                found = true;
            }
        if (!found) kept.push_back(reported_check(w, std::nan(""), "not applicable to this surface"));
    }
    report.checks = std::move(kept);
}

void write_mesh(const RunConfig& config, const std::vector<MeshPiece>& pieces, RunResult& result) {
    const std::string format = config.export_format.empty() ? "obj" : config.export_format;
    const auto path = std::filesystem::path(config.output_dir()) / (format == "obj" ? "mesh.obj" : "grid.csv");
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    if (format == "obj")
        write_obj(out, pieces, config.nx, config.ny, config.wrap, config.threads);
    else
        write_csv(out, pieces, config.nx, config.ny, config.wrap, config.threads);
    if (!out) throw InputError("write failed for '" + path.string() + "'");
    result.artifacts.push_back(path.string());
}

}  // namespace

RunResult execute(const RunConfig& config, std::ostream& log) {
    config.validate();
    RunResult result;
    VerificationReport& report = result.report;
    Stopwatch clock(result.timings);
    const int n = config.effective_steps();
    report.operation = config.operation;
    report.surface = config.surface;
    report.steps = n;
    report.seed = config.seed;
    report.timestamp = utc_timestamp();

    const SurfacePtr surface = clock.time("load", [&] { return catalog_surface(config.surface); });
    std::filesystem::create_directories(config.output_dir());
    log << config.operation << ' ' << surface->name() << " (n = " << n << ")\n";

    if (config.operation == "reflect") {
        std::optional<BoundaryEdge> edge;
        if (!config.edge.empty()) {
            edge = surface->edge(config.edge);
            if (!edge) throw InputError("surface has no edge '" + config.edge + "'");
        } else if (const auto free = surface->free_edges(); !free.empty()) {
            edge = free.front();
        } else {
            throw InputError("surface has no free boundary to reflect across");
        }
        ReflectionOptions opts;
        opts.steklov_tol = config.steklov_tol;
        opts.match_tol = config.match_tol;
        try {
            const ReflectedPatch patch = clock.time("reflect", [&] { return reflect_patch(surface, *edge, opts); });
            const auto& r = patch.residuals;
            report.lineage = {edge->label};
            report.add(make_check("reflect.steklov", r.steklov, "<=", config.steklov_tol));
            report.add(reported_check("reflect.schwarz", r.schwarz));
            report.add(make_check("reflect.conformality", r.conformality, "<=", kConformalTol));
            report.add(make_check("reflect.match_value", r.match_value, "<=", config.match_tol));
            report.add(make_check("reflect.match_derivative", r.match_derivative, "<=", config.match_tol));
            report.add(reported_check("reflect.ode_identity", r.ode_identity));
            // The mirror image leaves the ball (interior source) or enters it (exterior source).
            const StripDomain d = patch.surface()->domain();
            double rmin = INFINITY, rmax = 0.0;
            for (int j = 0; j <= config.ny; ++j)
                for (int i = 0; i < config.nx; ++i) {
                    const double x = d.period * i / config.nx, y = d.y_lo + d.height() * j / config.ny;
                    const double rr = patch.surface()->position(x, y).norm();
                    rmin = std::min(rmin, rr);
                    rmax = std::max(rmax, rr);
                }
            if (patch.sigma > 0)
                report.add(make_check("reflect.outside_ball", rmin, ">=", 1.0 - 1e-10));
            else
                report.add(make_check("reflect.inside_ball", rmax, "<=", 1.0 + 1e-10));
            report.extra = {{"edge", edge->label},
                            {"mirror_strip", Json::array({d.y_lo, d.y_hi})},
                            {"period", d.period},
                            {"arc_length", patch.map.P()}};
            if (!config.export_format.empty()) {
                auto pieces = mesh_pieces(*surface, surface);
                pieces.push_back(mesh_piece(patch));
                write_mesh(config, pieces, result);
            }
        } catch (const StageError& e) {
            report.add(make_check("reflect." + e.stage(), 1.0, "<=", 0.0, e.what()));
        }
    } else if (config.operation == "export-mesh") {
        if (n > 0) {
            const ExtensionPtr ext = clock.time("extend", [&] { return extend(surface, n, extend_options(config)); });
            report.lineage = ext->lineage();
            clock.time("export", [&] { write_mesh(config, mesh_pieces(ext), result); });
        } else {
            clock.time("export", [&] { write_mesh(config, mesh_pieces(*surface, surface), result); });
        }
    } else {
        // extend, verify, report
        const bool full = config.operation != "extend";
        if (full) {
            clock.time("surface", [&] { surface_checks(report, *surface, config); });
            clock.time("steklov", [&] { steklov_checks(report, *surface, config); });
            clock.time("superharmonic", [&] { superharmonic_report(report, *surface, config); });
        }
        ExtensionPtr ext;
        if (two_free_lines(*surface) || config.operation == "extend") {
            try {
                ext = clock.time("extend", [&] { return extend(surface, n, extend_options(config)); });
                report.add(make_check("extension.build", 0.0, "<=", 0.0, "lineage " + ext->lineage_string()));
            } catch (const ExtensionError& e) {
                report.lineage = e.lineage_prefix();
                report.add(make_check("extension.build", 1.0, "<=", 0.0, e.what()));
            }
        } else {
            report.add(reported_check("extension.build", std::nan(""), "needs a periodic strip with two free lines"));
        }
        if (ext) {
            report.lineage = ext->lineage();
            clock.time("extension_checks", [&] { extension_checks(report, *ext, config); });
            report.extra = clock.time("coverage", [&] { return extension_details(*ext, config); });
            if (full && two_free_lines(*surface)) curvature_checks(report, surface, ext, config, clock);
            if (!config.export_format.empty()) clock.time("export", [&] { write_mesh(config, mesh_pieces(ext), result); });
        }
    }

    filter_checks(report, config.checks);
    const auto dir = std::filesystem::path(config.output_dir());
    {
        std::ofstream out(dir / "report.json");
        if (!out) throw InputError("cannot write report into '" + dir.string() + "'");
        write_json(out, report.to_json());
        result.artifacts.push_back((dir / "report.json").string());
    }
    {
        std::ofstream out(dir / "timings.json");
        write_json(out, result.timings);
    }
    for (const auto& c : report.checks)
        if (c.failed()) log << "FAIL " << c.name << " = " << format_double(c.value) << '\n';
    result.exit_code = report.passed() || config.operation == "report" ? kExitOk : kExitChecksFailed;
    return result;
}

int run(const RunConfig& config) {
    try {
        return execute(config, std::cout).exit_code;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

std::string strip_timestamp(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (line.find("\"timestamp\":") == std::string::npos) out += line + '\n';
    return out;
}

}  // namespace fbr
