#include "mdlhisto/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mdlhisto::io {

namespace {

double parse_real(const std::string& token, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": cannot parse '" +
                                 token + "' as a real number");
    }
    while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used]))) ++used;
    if (used != token.size())
        throw std::runtime_error("line " + std::to_string(line_no) + ": trailing junk in '" +
                                 token + "'");
    if (!std::isfinite(v))
        throw std::runtime_error("line " + std::to_string(line_no) + ": non-finite value '" +
                                 token + "'");
    return v;
}

// Skips whitespace and # comments in a PGM header.
int next_header_int(std::istream& in, const std::string& path) {
    for (;;) {
        const int c = in.peek();
        if (c == EOF) throw std::runtime_error(path + ": truncated PGM header");
        if (std::isspace(c)) {
            in.get();
        } else if (c == '#') {
            std::string junk;
            std::getline(in, junk);
        } else {
            break;
        }
    }
    int value = 0;
    if (!(in >> value)) throw std::runtime_error(path + ": malformed PGM header");
    return value;
}

}  // namespace

std::vector<double> read_csv_signal(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::stringstream ss(line);
        std::string token;
        while (std::getline(ss, token, ',')) {
            const auto first = token.find_first_not_of(" \t");
            if (first == std::string::npos) continue;
            const auto last = token.find_last_not_of(" \t");
            values.push_back(parse_real(token.substr(first, last - first + 1), line_no));
        }
    }
    if (values.empty()) throw std::runtime_error(path + ": no samples found");
    return values;
}

void write_csv_signal(const std::string& path, std::span<const double> values) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (double v : values) out << format_double(v) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

PgmImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string magic(2, '\0');
    in.read(magic.data(), 2);
    if (magic != "P2" && magic != "P5")
        throw std::runtime_error(path + ": not a PGM file (magic '" + magic + "')");

    PgmImage img;
    const int width = next_header_int(in, path);
    const int height = next_header_int(in, path);
    img.maxval = next_header_int(in, path);
    if (width < 1 || height < 1 || img.maxval < 1 || img.maxval > 65535)
        throw std::runtime_error(path + ": invalid PGM dimensions or maxval");
    img.cols = static_cast<std::size_t>(width);
    img.rows = static_cast<std::size_t>(height);
    img.pixels.resize(img.rows * img.cols);

    if (magic == "P2") {
        for (auto& p : img.pixels)
            if (!(in >> p)) throw std::runtime_error(path + ": truncated P2 raster");
    } else {
        in.get();  // single whitespace after maxval
        const int bytes = img.maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(img.pixels.size() * static_cast<std::size_t>(bytes));
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (in.gcount() != static_cast<std::streamsize>(raw.size()))
            throw std::runtime_error(path + ": truncated P5 raster");
        for (std::size_t i = 0; i < img.pixels.size(); ++i)
            img.pixels[i] = bytes == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
    }
    for (int p : img.pixels)
        if (p < 0 || p > img.maxval)
            throw std::runtime_error(path + ": pixel value outside [0, maxval]");
    return img;
}

void write_pgm(const std::string& path, const PgmImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "P5\n" << img.cols << " " << img.rows << "\n" << img.maxval << "\n";
    const int bytes = img.maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw;
    raw.reserve(img.pixels.size() * static_cast<std::size_t>(bytes));
    for (int p : img.pixels) {
        if (bytes == 2) raw.push_back(static_cast<unsigned char>((p >> 8) & 0xff));
        raw.push_back(static_cast<unsigned char>(p & 0xff));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw std::runtime_error("write failed for " + path);
}

wavelet::Grid to_unit_grid(const PgmImage& img) {
    wavelet::Grid g(img.rows, img.cols);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        g.data[i] = static_cast<double>(img.pixels[i]) / img.maxval;
    return g;
}

namespace {
int quantize_unit(double v, int maxval) {
    const double scaled = std::nearbyint(v * maxval);
    if (scaled < 0.0) return 0;
    if (scaled > maxval) return maxval;
    return static_cast<int>(scaled);
}
}  // namespace

PgmImage from_unit_grid(const wavelet::Grid& grid, int maxval) {
    PgmImage img;
    img.rows = grid.rows;
    img.cols = grid.cols;
    img.maxval = maxval;
    img.pixels.resize(grid.data.size());
    for (std::size_t i = 0; i < grid.data.size(); ++i)
        img.pixels[i] = quantize_unit(grid.data[i], maxval);
    return img;
}

PgmImage residual_to_pgm(const wavelet::Grid& residual, int maxval) {
    PgmImage img;
    img.rows = residual.rows;
    img.cols = residual.cols;
    img.maxval = maxval;
    img.pixels.resize(residual.data.size());
    for (std::size_t i = 0; i < residual.data.size(); ++i)
        img.pixels[i] = quantize_unit(0.5 * (residual.data[i] + 1.0), maxval);
    return img;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return fnv1a64(bytes);
}

}  // namespace mdlhisto::io
