#include "core/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "core/errors.hpp"

namespace dunedrift {

namespace {

// ---- PGM ----

// Skips whitespace and '#' comment lines between header tokens.
int next_pgm_int(std::istream& in, const std::string& path) {
    for (;;) {
        int c = in.peek();
        if (c == EOF) throw IoError(path + ": truncated PGM header");
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        break;
    }
    int value = 0;
    if (!(in >> value)) throw IoError(path + ": malformed PGM header");
    return value;
}

Raster load_pgm(std::ifstream& in, const std::string& path, bool binary) {
    int width = next_pgm_int(in, path);
    int height = next_pgm_int(in, path);
    int maxval = next_pgm_int(in, path);
    if (maxval > 255) {
        throw IoError(path + ": 16-bit PGM (maxval " + std::to_string(maxval) +
                      ") is not supported; only maxval 255 is accepted");
    }
    if (maxval != 255) {
        throw IoError(path + ": PGM maxval must be 255, got " + std::to_string(maxval));
    }
    if (width < 1 || height < 1) throw IoError(path + ": invalid PGM dimensions");

    std::vector<std::uint8_t> bytes(static_cast<size_t>(width) * height);
    if (binary) {
        in.get();  // single whitespace after maxval
        in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (static_cast<size_t>(in.gcount()) != bytes.size()) {
            throw IoError(path + ": truncated PGM pixel data");
        }
    } else {
        for (size_t i = 0; i < bytes.size(); ++i) {
            int v = 0;
            if (!(in >> v)) throw IoError(path + ": truncated PGM pixel data");
            if (v < 0 || v > maxval) throw IoError(path + ": PGM sample out of range");
            bytes[i] = static_cast<std::uint8_t>(v);
        }
    }
    return dequantize(width, height, bytes);
}

// ---- PNG ----

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

Raster load_png(const std::string& path) {
    PngReader rd;
    rd.fp = std::fopen(path.c_str(), "rb");
    if (!rd.fp) throw IoError(path + ": cannot open file");
    rd.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!rd.png) throw IoError(path + ": libpng initialization failed");
    rd.info = png_create_info_struct(rd.png);
    if (!rd.info) throw IoError(path + ": libpng initialization failed");
    if (setjmp(png_jmpbuf(rd.png))) {
        throw IoError(path + ": PNG decode error");
    }
    png_init_io(rd.png, rd.fp);
    png_read_info(rd.png, rd.info);

    png_uint_32 width = png_get_image_width(rd.png, rd.info);
    png_uint_32 height = png_get_image_height(rd.png, rd.info);
    int bit_depth = png_get_bit_depth(rd.png, rd.info);
    int color_type = png_get_color_type(rd.png, rd.info);
    if (bit_depth == 16) {
        throw IoError(path + ": 16-bit PNG is not supported; convert to 8-bit first");
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(rd.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(rd.png);
    if (png_get_valid(rd.png, rd.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(rd.png);
    png_set_strip_alpha(rd.png);
    png_read_update_info(rd.png, rd.info);

    int channels = png_get_channels(rd.png, rd.info);
    if (channels != 1 && channels != 3) {
        throw IoError(path + ": unsupported PNG channel layout");
    }

    // png_read_image deinterlaces on its own.
    size_t stride = static_cast<size_t>(width) * channels;
    std::vector<std::uint8_t> pixels(stride * height);
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * stride;
    png_read_image(rd.png, rows.data());

    std::vector<double> samples(static_cast<size_t>(width) * height);
    for (png_uint_32 y = 0; y < height; ++y) {
        const std::uint8_t* row = pixels.data() + y * stride;
        for (png_uint_32 x = 0; x < width; ++x) {
            double v;
            if (channels == 1) {
                v = row[x] / 255.0;
            } else {
                double r = row[3 * x] / 255.0;
                double g = row[3 * x + 1] / 255.0;
                double b = row[3 * x + 2] / 255.0;
                v = 0.2126 * r + 0.7152 * g + 0.0722 * b;
            }
            samples[static_cast<size_t>(y) * width + x] = std::clamp(v, 0.0, 1.0);
        }
    }
    return Raster(static_cast<int>(width), static_cast<int>(height), std::move(samples));
}

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngWriter() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

void save_png(const Raster& r, const std::string& path) {
    std::vector<std::uint8_t> bytes = quantize(r);
    PngWriter wr;
    wr.fp = std::fopen(path.c_str(), "wb");
    if (!wr.fp) throw IoError(path + ": cannot open file for writing");
    wr.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!wr.png) throw IoError(path + ": libpng initialization failed");
    wr.info = png_create_info_struct(wr.png);
    if (!wr.info) throw IoError(path + ": libpng initialization failed");
    if (setjmp(png_jmpbuf(wr.png))) {
        throw IoError(path + ": PNG encode error");
    }
    png_init_io(wr.png, wr.fp);
    png_set_IHDR(wr.png, wr.info, static_cast<png_uint_32>(r.width()),
                 static_cast<png_uint_32>(r.height()), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(wr.png, wr.info);
    for (int y = 0; y < r.height(); ++y) {
        png_write_row(wr.png, bytes.data() + static_cast<size_t>(y) * r.width());
    }
    png_write_end(wr.png, nullptr);
    if (std::fflush(wr.fp) != 0) throw IoError(path + ": write failed");
}

void save_pgm(const Raster& r, const std::string& path) {
    std::vector<std::uint8_t> bytes = quantize(r);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out << "P5\n" << r.width() << " " << r.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(path + ": write failed");
}

}  // namespace

Raster load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open file");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2) throw IoError(path + ": file too short to identify");

    if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) {
        return load_pgm(in, path, magic[1] == '5');
    }
    if (magic[0] == 'P' && magic[1] >= '1' && magic[1] <= '6') {
        throw IoError(path + ": only PGM P2/P5 is supported among the PNM formats");
    }
    if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') {
        in.close();
        return load_png(path);
    }
    throw IoError(path + ": unrecognized image format (expected PGM or PNG)");
}

void save_image(const Raster& r, const std::string& path) {
    auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == "pgm") {
        save_pgm(r, path);
    } else if (ext == "png") {
        save_png(r, path);
    } else {
        throw ArgumentError(path + ": unknown output extension (use .pgm or .png)");
    }
}

}  // namespace dunedrift
