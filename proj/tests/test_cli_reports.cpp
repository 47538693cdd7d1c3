#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fbr/catalog.hpp"
#include "fbr/config.hpp"
#include "fbr/errors.hpp"
#include "fbr/mesh_export.hpp"
#include "fbr/report.hpp"
#include "fbr/run.hpp"

using namespace fbr;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fbreflect-test-" + name);
    fs::remove_all(p);
    return p;
}

struct ObjCounts {
    int vertices = 0, faces = 0, groups = 0;
};

ObjCounts count_obj(const std::string& text) {
    ObjCounts c;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) ++c.vertices;
        if (line.rfind("f ", 0) == 0) ++c.faces;
        if (line.rfind("o ", 0) == 0) ++c.groups;
    }
    return c;
}

int shell(const std::string& args) {
    const int rc = std::system((std::string(FBREFLECT_EXE) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Config, ParsesKeyValueLines) {
    std::istringstream in("# comment\nsurface = noncritical-catenoid:0.9\ngrid = 16x12  # trailing\ntol-steklov=1e-6\nwrap = true\n");
    const RunConfig c = parse_config(in);
    EXPECT_EQ(c.surface, "noncritical-catenoid:0.9");
    EXPECT_EQ(c.nx, 16);
    EXPECT_EQ(c.ny, 12);
    EXPECT_DOUBLE_EQ(c.steklov_tol, 1e-6);
    EXPECT_TRUE(c.wrap);
}

TEST(Config, ErrorsNameTheLine) {
    std::istringstream in("surface = plane\nbogus = 3\n");
    try {
        parse_config(in);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(Config, Invariants) {
    RunConfig c;
    c.nx = 7;
    EXPECT_THROW(c.validate(), InputError);
    c = {};
    c.steklov_tol = 0.0;
    EXPECT_THROW(c.validate(), InputError);
    c = {};
    c.steps = -2;
    EXPECT_THROW(c.validate(), InputError);
    EXPECT_THROW(parse_grid("64"), InputError);
    EXPECT_EQ(parse_grid("64x32"), std::make_pair(64, 32));
    EXPECT_EQ(RunConfig{}.effective_steps(), 8);
}

TEST(Mesh, SinglePatchCounts) {
    const SurfacePtr s = critical_catenoid();
    std::ostringstream plain, wrapped;
    write_obj(plain, mesh_pieces(*s, s), 8, 8, false);
    write_obj(wrapped, mesh_pieces(*s, s), 8, 8, true);
    const ObjCounts a = count_obj(plain.str()), b = count_obj(wrapped.str());
    EXPECT_EQ(a.vertices, 64);
    EXPECT_EQ(a.faces, 2 * 7 * 7);
    EXPECT_EQ(b.vertices, 64);
    EXPECT_EQ(b.faces, 2 * 8 * 7);
    EXPECT_EQ(a.groups, 1);
    EXPECT_THROW(write_obj(plain, mesh_pieces(*flat_plane(), flat_plane()), 8, 8, true), InputError);
    EXPECT_THROW(write_obj(plain, mesh_pieces(*s, s), 7, 8, false), InputError);
}

TEST(Mesh, CsvColumnsAndIdentityOnOriginal) {
    const SurfacePtr s = critical_catenoid();
    std::ostringstream out;
    write_csv(out, mesh_pieces(*s, s), 8, 8, false);
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    EXPECT_EQ(header, "x,y,X,Y,psi1,psi2,psi3");
    int rows = 0;
    while (std::getline(in, row)) {
        ++rows;
        std::vector<double> v;
        std::stringstream rs(row);
        std::string cell;
        while (std::getline(rs, cell, ',')) v.push_back(std::stod(cell));
        ASSERT_EQ(v.size(), 7u);
        EXPECT_EQ(v[0], v[2]);
        EXPECT_EQ(v[1], v[3]);
    }
    EXPECT_EQ(rows, 64);
}

TEST(Report, JsonFloatsUse17Digits) {
    Json j;
    j["a"] = 0.1;
    j["b"] = std::nan("");
    j["c"] = Json::array({1.0, 2.5});
    const std::string s = dump_json(j);
    EXPECT_NE(s.find("0.10000000000000001"), std::string::npos);
    EXPECT_NE(s.find("\"b\": null"), std::string::npos);
    EXPECT_EQ(strip_timestamp("{\n  \"timestamp\": \"x\",\n  \"a\": 1\n}\n"), "{\n  \"a\": 1\n}\n");
}

TEST(Report, ChecksAndStatus) {
    VerificationReport r;
    r.add(make_check("a", 1e-9, "<=", 1e-8));
    r.add(reported_check("b", 5.0));
    EXPECT_TRUE(r.passed());
    r.add(make_check("a", 1e-7, "<=", 1e-8));
    EXPECT_EQ(r.checks.size(), 2u);
    EXPECT_FALSE(r.passed());
    EXPECT_EQ(r.checks[1].status, "skipped");
}

TEST(Run, ExportMeshGroupsForExtension) {
    const fs::path dir = scratch("ext2");
    RunConfig c;
    c.operation = "export-mesh";
    c.steps = 2;
    c.nx = c.ny = 8;
    c.out_dir = dir.string();
    c.export_format = "obj";
    std::ostringstream log;
    const RunResult r = execute(c, log);
    EXPECT_EQ(r.exit_code, 0);
    const ObjCounts counts = count_obj(slurp(dir / "mesh.obj"));
    EXPECT_EQ(counts.groups, 3);
    EXPECT_EQ(counts.vertices, 3 * 64);
}

TEST(Run, VerifyCriticalCatenoidPasses) {
    RunConfig c;
    c.out_dir = scratch("verify").string();
    std::ostringstream log;
    const RunResult r = execute(c, log);
    for (const auto& ch : r.report.checks) EXPECT_NE(ch.status, "fail") << ch.name << " = " << ch.value;
    EXPECT_EQ(r.exit_code, 0) << log.str();
    EXPECT_TRUE(r.report.curvature.has_value());
}

TEST(Run, NoncriticalFailsSteklov) {
    RunConfig c;
    c.surface = "noncritical-catenoid:0.9";
    c.steps = 2;
    c.out_dir = scratch("noncritical").string();
    std::ostringstream log;
    const RunResult r = execute(c, log);
    EXPECT_EQ(r.exit_code, kExitChecksFailed);
    bool steklov_failed = false;
    for (const auto& ch : r.report.checks)
        if (ch.name.rfind("steklov.", 0) == 0 && ch.failed()) {
            steklov_failed = true;
            EXPECT_TRUE(ch.location.has_value());
        }
    EXPECT_TRUE(steklov_failed);
}

TEST(Run, ChecksListedOnceEach) {
    RunConfig c;
    c.steps = 0;
    c.checks = {"steklov", "surface.conformality", "no-such-check"};
    c.out_dir = scratch("filter").string();
    std::ostringstream log;
    const RunResult r = execute(c, log);
    ASSERT_EQ(r.report.checks.size(), 4u);  // two steklov edges, conformality, the unknown one
    EXPECT_EQ(r.report.checks.back().name, "no-such-check");
    EXPECT_EQ(r.report.checks.back().status, "skipped");
}

TEST(Cli, ExitStatusesAndDeterminism) {
    const fs::path a = scratch("cli-a"), b = scratch("cli-b"), c = scratch("cli-c");
    EXPECT_EQ(shell("verify --surface critical-catenoid --steps 2 --grid 32x16 --seed 7 --out " + a.string()), 0);
    EXPECT_EQ(shell("verify --surface critical-catenoid --steps 2 --grid 32x16 --seed 7 --out " + b.string()), 0);
    EXPECT_EQ(shell("verify --surface critical-catenoid --steps 2 --grid 32x16 --seed 7 --threads 4 --out " + c.string()), 0);
    const std::string ra = strip_timestamp(slurp(a / "report.json"));
    EXPECT_FALSE(ra.empty());
    EXPECT_EQ(ra, strip_timestamp(slurp(b / "report.json")));
    EXPECT_EQ(ra, strip_timestamp(slurp(c / "report.json")));

    EXPECT_NE(shell("verify --surface noncritical-catenoid:0.9 --steps 0 --out " + a.string()), 0);
    EXPECT_EQ(shell("verify --grid 4x4 --out " + a.string()), kExitInput);
    EXPECT_EQ(shell("verify --surface no-such-surface --out " + a.string()), kExitInput);
    EXPECT_EQ(shell("frobnicate"), kExitInput);
}

TEST(Cli, ExtendEightStepsObjGroups) {
    const fs::path d = scratch("cli-ext8");
    EXPECT_EQ(shell("extend --surface critical-catenoid --steps 8 --grid 16x8 --export obj --out " + d.string()), 0);
    EXPECT_EQ(count_obj(slurp(d / "mesh.obj")).groups, 9);
    const fs::path w = scratch("cli-wrap");
    EXPECT_EQ(shell("export-mesh --grid 8x8 --wrap --out " + w.string()), 0);
    const ObjCounts counts = count_obj(slurp(w / "mesh.obj"));
    EXPECT_EQ(counts.faces, 112);
}

TEST(Cli, EnvironmentDefaultsOutputDirectory) {
    const fs::path d = scratch("env");
    ::setenv("FBREFLECT_OUT", d.string().c_str(), 1);
    RunConfig c;
    EXPECT_EQ(c.output_dir(), d.string());
    ::unsetenv("FBREFLECT_OUT");
    EXPECT_EQ(c.output_dir(), "fbreflect-out");
}
