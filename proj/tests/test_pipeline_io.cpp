#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))

#include <png.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "core/errors.hpp"
#include "core/image_io.hpp"

using namespace dunedrift;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("dunedrift_io_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

Raster random_raster(std::mt19937_64& rng, int w, int h) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> s(static_cast<size_t>(w) * h);
    for (double& v : s) v = dist(rng);
    return Raster(w, h, std::move(s));
}

void write_png(const fs::path& p, int w, int h, int bit_depth, int color_type,
               const std::vector<std::uint8_t>& bytes) {
    FILE* fp = std::fopen(p.string().c_str(), "wb");
    REQUIRE(fp != nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, fp);
    png_set_IHDR(png, info, w, h, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
    size_t stride = static_cast<size_t>(w) * channels * (bit_depth / 8);
    for (int y = 0; y < h; ++y) {
        png_write_row(png, const_cast<png_bytep>(bytes.data() + y * stride));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

}  // namespace

TEST_CASE("P5 load dequantizes bytes") {
    fs::path p = temp_dir() / "gray.pgm";
    std::string data = "P5\n3 1\n255\n";
    data.push_back('\0');
    data.push_back(static_cast<char>(128));
    data.push_back(static_cast<char>(255));
    write_file(p, data);
    Raster r = load_image(p.string());
    CHECK(r.width() == 3);
    CHECK(r.height() == 1);
    CHECK(r.at(0, 0) == 0.0);
    CHECK_NEAR(r.at(1, 0), 0.50196, 1e-5);
    CHECK(r.at(2, 0) == 1.0);
}

TEST_CASE("P2 load with comments") {
    fs::path p = temp_dir() / "ascii.pgm";
    write_file(p, "P2\n# a comment\n2 2\n# another\n255\n0 64\n128 255\n");
    Raster r = load_image(p.string());
    CHECK(r.at(0, 0) == 0.0);
    CHECK_NEAR(r.at(1, 0), 64.0 / 255.0, 1e-15);
    CHECK_NEAR(r.at(0, 1), 128.0 / 255.0, 1e-15);
    CHECK(r.at(1, 1) == 1.0);
}

TEST_CASE("PGM rejection paths") {
    fs::path deep = temp_dir() / "deep.pgm";
    write_file(deep, "P5\n2 1\n65535\n....");
    CHECK_THROWS_WITH_AS(load_image(deep.string()), doctest::Contains("16-bit"), IoError);

    fs::path odd = temp_dir() / "odd.pgm";
    write_file(odd, "P5\n2 1\n100\n..");
    CHECK_THROWS_AS(load_image(odd.string()), IoError);

    fs::path ppm = temp_dir() / "color.ppm";
    write_file(ppm, "P6\n1 1\n255\nabc");
    CHECK_THROWS_AS(load_image(ppm.string()), IoError);

    fs::path trunc = temp_dir() / "trunc.pgm";
    write_file(trunc, "P5\n4 4\n255\nxy");
    CHECK_THROWS_AS(load_image(trunc.string()), IoError);

    CHECK_THROWS_AS(load_image((temp_dir() / "missing.pgm").string()), IoError);
}

TEST_CASE("PGM and PNG round trips are byte-exact") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        Raster r = random_raster(rng, 17, 9);
        auto expect = quantize(r);
        for (const char* ext : {"pgm", "png"}) {
            fs::path p = temp_dir() / ("rt" + std::to_string(trial) + "." + ext);
            save_image(r, p.string());
            Raster back = load_image(p.string());
            REQUIRE(back.width() == r.width());
            REQUIRE(back.height() == r.height());
            auto got = quantize(back);
            CHECK(got == expect);
        }
    }
}

TEST_CASE("RGB PNG converts to luminance") {
    fs::path p = temp_dir() / "rgb.png";
    // White, black, pure red, mid gray.
    std::vector<std::uint8_t> px = {255, 255, 255, 0, 0, 0, 255, 0, 0, 128, 128, 128};
    write_png(p, 4, 1, 8, PNG_COLOR_TYPE_RGB, px);
    Raster r = load_image(p.string());
    CHECK(r.at(0, 0) == 1.0);
    CHECK(r.at(1, 0) == 0.0);
    CHECK_NEAR(r.at(2, 0), 0.2126, 1e-12);
    CHECK_NEAR(r.at(3, 0), 128.0 / 255.0, 1e-12);
}

TEST_CASE("16-bit PNG is rejected with a clear message") {
    fs::path p = temp_dir() / "deep.png";
    std::vector<std::uint8_t> px(2 * 2 * 2, 0x80);
    write_png(p, 2, 2, 16, PNG_COLOR_TYPE_GRAY, px);
    CHECK_THROWS_WITH_AS(load_image(p.string()), doctest::Contains("16-bit"), IoError);
}

TEST_CASE("unknown save extension") {
    Raster r(2, 2, 0.5);
    CHECK_THROWS_AS(save_image(r, (temp_dir() / "image.tiff").string()), ArgumentError);
    CHECK_THROWS_AS(save_image(r, (temp_dir() / "image").string()), ArgumentError);
}

TEST_CASE("saved PGM bytes follow round-half-up") {
    Raster r(1, 1, 0.5);
    fs::path p = temp_dir() / "half.pgm";
    save_image(r, p.string());
    std::ifstream in(p, std::ios::binary);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all == std::string("P5\n1 1\n255\n") + static_cast<char>(128));
}
