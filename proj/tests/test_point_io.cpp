#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "acpd/point_io.hpp"
#include "test_support.hpp"

using namespace acpd;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("acpd_io_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("point files round-trip exactly") {
    TempDir dir;
    auto rng = testing::make_rng(71);
    Matrix coords = testing::random_matrix(rng, 25, 3, -1e6, 1e6);
    coords(0, 0) = 1e-300;
    coords(1, 1) = -3.141592653589793e15;
    coords(2, 2) = 0.1;
    const PointSet original(coords);

    const auto file = dir.path / "pts.txt";
    write_point_file(file, original);
    const PointSet loaded = read_point_file(file);
    REQUIRE(loaded.size() == original.size());
    REQUIRE(loaded.dim() == original.dim());
    CHECK((loaded.coords - original.coords).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("comments and blank lines are skipped, dimension is inferred") {
    TempDir dir;
    const auto file = dir.path / "annotated.txt";
    {
        std::ofstream out(file);
        out << "# header comment\n\n  \t\n";
        out << "1.5 2.5\n";
        out << "# interior comment\n";
        out << "-1 0\n";
    }
    const PointSet pts = read_point_file(file);
    CHECK(pts.size() == 2);
    CHECK(pts.dim() == 2);
    CHECK(pts.coords(0, 0) == 1.5);
    CHECK(pts.coords(1, 1) == 0.0);
}

TEST_CASE("parse errors carry the line number") {
    TempDir dir;
    SUBCASE("field count mismatch") {
        const auto file = dir.path / "ragged.txt";
        {
            std::ofstream out(file);
            out << "1 2\n1 2 3\n";
        }
        try {
            (void)read_point_file(file);
            FAIL("expected parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(":2:") != std::string::npos);
        }
    }
    SUBCASE("malformed number") {
        const auto file = dir.path / "junk.txt";
        {
            std::ofstream out(file);
            out << "1 2\n3 potato\n";
        }
        try {
            (void)read_point_file(file);
            FAIL("expected parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(":2:") != std::string::npos);
        }
    }
    SUBCASE("empty file") {
        const auto file = dir.path / "empty.txt";
        { std::ofstream out(file); }
        CHECK_THROWS_AS((void)read_point_file(file), std::runtime_error);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)read_point_file(dir.path / "absent.txt"), std::runtime_error);
    }
}
