#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fbr/catalog.hpp"
#include "fbr/errors.hpp"
#include "fbr/surface_file.hpp"

using namespace fbr;

namespace {

// mpmath, 30 digits.
constexpr double kT0 = 1.19967864025773383;
constexpr double kC = 0.46048508825013391;

double max_point_error(const AnalyticSurface& a, const AnalyticSurface& b, double y_hi) {
    double e = 0.0;
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j <= 8; ++j) {
            const double x = 2.0 * std::numbers::pi * i / 32, y = y_hi * j / 8;
            e = std::max(e, (a.position(x, y) - b.position(x, y)).norm());
        }
    return e;
}

}  // namespace

TEST(CatenoidConstants, Bisection) {
    const auto& k = critical_catenoid_constants();
    EXPECT_NEAR(k.t0, kT0, 1e-12);
    EXPECT_NEAR(k.c, kC, 1e-12);
    EXPECT_NEAR(k.boundary_radius(), 0.83355655960096470, 1e-12);
    EXPECT_NEAR(std::pow(k.boundary_radius(), 2) + std::pow(k.boundary_height(), 2), 1.0, 1e-12);
}

TEST(Catalog, InvariantSuite) {
    for (const auto& s : {critical_catenoid(), exterior_critical_catenoid(), noncritical_catenoid(0.9), equatorial_disk(),
                          warped_disk(0.3), warped_plane(0.1), flat_plane()}) {
        const auto r = check_surface_invariants(*s, 1000, 11);
        EXPECT_LE(r.harmonicity, 1e-10) << s->name();
        EXPECT_LE(r.conformality, 1e-10) << s->name();
        EXPECT_LE(r.sphere, 1e-10) << s->name();
    }
    // The Mercator sphere is conformal but not harmonic.
    const auto r = check_surface_invariants(*sphere_patch(2.0), 200, 1);
    EXPECT_LE(r.conformality, 1e-12);
    EXPECT_GT(r.harmonicity, 0.1);
}

TEST(Catalog, ExactDerivativesMatchFiniteDifferences) {
    for (const auto& s : {critical_catenoid(), warped_disk(0.3), sphere_patch(1.5), warped_plane(0.2)}) {
        const double x = 0.37, y = 0.41, h = 1e-5;
        const SurfacePoint p = s->evaluate(x, y);
        const Vec3 dx = (s->position(x + h, y) - s->position(x - h, y)) / (2 * h);
        const Vec3 dy = (s->position(x, y + h) - s->position(x, y - h)) / (2 * h);
        EXPECT_LE((dx - p.dx).norm(), 1e-8) << s->name();
        EXPECT_LE((dy - p.dy).norm(), 1e-8) << s->name();
        const Vec3 dxy = (s->evaluate(x, y + h).dx - s->evaluate(x, y - h).dx) / (2 * h);
        const Vec3 dyy = (s->evaluate(x, y + h).dy - s->evaluate(x, y - h).dy) / (2 * h);
        const Vec3 dxx = (s->evaluate(x + h, y).dx - s->evaluate(x - h, y).dx) / (2 * h);
        EXPECT_LE((dxy - p.dxy).norm(), 1e-8) << s->name();
        EXPECT_LE((dyy - p.dyy).norm(), 1e-8) << s->name();
        EXPECT_LE((dxx - p.dxx).norm(), 1e-8) << s->name();
    }
}

TEST(Catalog, EdgesAndBallSides) {
    const auto cat = critical_catenoid();
    ASSERT_EQ(cat->free_edges().size(), 2u);
    for (const auto& e : cat->edges()) EXPECT_EQ(e.ball_side, BallSide::interior);
    const auto ext = exterior_critical_catenoid();
    ASSERT_TRUE(ext->edge("gamma1"));
    EXPECT_TRUE(ext->edge("gamma1")->free);
    EXPECT_EQ(ext->edge("gamma1")->ball_side, BallSide::exterior);
    EXPECT_FALSE(ext->edge("gamma2")->free);
    const auto disk = equatorial_disk();
    ASSERT_EQ(disk->free_edges().size(), 1u);
    // The disk image is the punctured unit disk in the plane x3 = 0.
    EXPECT_NEAR(disk->position(1.0, 8.0).norm(), std::exp(-8.0), 1e-15);
    EXPECT_EQ(disk->position(1.0, 3.0).z(), 0.0);
}

TEST(Catalog, Selectors) {
    EXPECT_EQ(catalog_surface("critical-catenoid")->name(), "critical-catenoid");
    EXPECT_NO_THROW(catalog_surface("noncritical-catenoid:0.9"));
    EXPECT_THROW(catalog_surface("noncritical-catenoid:1.2"), InputError);
    EXPECT_THROW(catalog_surface("noncritical-catenoid:abc"), InputError);
    EXPECT_THROW(catalog_surface("torus"), InputError);
}

TEST(Catalog, ScaledCatenoidFactor) {
    const auto s = scaled(critical_catenoid(), 2.0);
    EXPECT_NEAR(s->evaluate(0.3, 0.0).dx.norm(), 2.0 * 0.83355655960096470, 1e-12);
}

TEST(SurfaceFile, RoundTripCatenoidAndDisk) {
    for (const auto& src : {critical_catenoid(), equatorial_disk(3.0)}) {
        const auto spec = surface_spec_from_traces(*src, 33);
        std::ostringstream os;
        write_surface_spec(os, spec);
        const auto back = build_surface(parse_surface_spec(os.str()), "roundtrip");
        EXPECT_LE(max_point_error(*src, *back, src->domain().y_hi), 1e-10) << src->name();
        EXPECT_EQ(back->free_edges().size(), src->free_edges().size());
    }
}

TEST(SurfaceFile, LoadFromDisk) {
    const std::string path = ::testing::TempDir() + "/cat.surf";
    {
        std::ofstream out(path);
        write_surface_spec(out, surface_spec_from_traces(*critical_catenoid(), 33));
    }
    const auto s = load_surface(path);
    EXPECT_LE(max_point_error(*critical_catenoid(), *s, 2 * kT0), 1e-8);
    EXPECT_NO_THROW(catalog_surface("file:" + path));
    std::remove(path.c_str());
    EXPECT_THROW(load_surface(path), InputError);
}

TEST(SurfaceFile, CorruptedFieldNamesLine) {
    const std::string text = "period=6.283185307179586\nheight=1\ncomponent=1\ng:\nperiod=6.283185307179586\na1=oops\n";
    try {
        parse_surface_spec(text);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 6"), std::string::npos) << e.what();
    }
}

TEST(SurfaceFile, RejectsNonConformal) {
    // psi1 = x, psi2 = 2y, psi3 = 0.
    SurfaceSpec spec;
    spec.period = 2.0;
    spec.height = 1.0;
    spec.components[0].g = TrigPolynomial(2.0, {0.0}, {0.0}, 1.0);
    spec.components[0].f = TrigPolynomial::constant(2.0, 0.0);
    spec.components[1].g = TrigPolynomial::constant(2.0, 0.0);
    spec.components[1].f = TrigPolynomial::constant(2.0, 2.0);
    spec.components[2].g = TrigPolynomial::constant(2.0, 0.0);
    spec.components[2].f = TrigPolynomial::constant(2.0, 0.0);
    EXPECT_THROW(build_surface(spec, "bad"), InputError);
}
