#include "varmesh/pgm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <limits>
#include <string>

#include "varmesh/errors.hpp"

namespace varmesh {

namespace {

// Reads the next header token, treating '#' as a comment that runs to the
// end of the line. Comments are legal anywhere between tokens.
std::string next_token(std::istream& in) {
    std::string tok;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            // skip
        } else {
            break;
        }
        c = in.get();
    }
    while (c != EOF && !std::isspace(static_cast<unsigned char>(c)) && c != '#') {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (c != EOF) in.unget();
    if (tok.empty()) throw ImageFormatError("unexpected end of header");
    return tok;
}

long parse_long(const std::string& tok, const char* what) {
    std::size_t pos = 0;
    long value = 0;
    try {
        value = std::stol(tok, &pos);
    } catch (const std::exception&) {
        throw ImageFormatError(std::string("malformed ") + what + " '" + tok + "'");
    }
    if (pos != tok.size())
        throw ImageFormatError(std::string("malformed ") + what + " '" + tok + "'");
    return value;
}

}  // namespace

double GrayImage::intensity(int row, int col) const {
    return static_cast<double>(samples[static_cast<std::size_t>(row) * width + col]) / maxval;
}

GrayImage read_pgm(std::istream& in) {
    const std::string magic = next_token(in);
    if (magic != "P2" && magic != "P5")
        throw ImageFormatError("unsupported magic '" + magic + "', expected P2 or P5");

    GrayImage img;
    const long w = parse_long(next_token(in), "width");
    const long h = parse_long(next_token(in), "height");
    const long maxval = parse_long(next_token(in), "maxval");
    if (w < 1 || h < 1)
        throw ImageFormatError("image dimensions must be positive");
    if (maxval < 1 || maxval > 65535)
        throw ImageFormatError("maxval " + std::to_string(maxval) + " outside [1, 65535]");
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.maxval = static_cast<int>(maxval);

    const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    img.samples.resize(count);

    if (magic == "P2") {
        for (std::size_t i = 0; i < count; ++i) {
            const long s = parse_long(next_token(in), "sample");
            if (s < 0 || s > maxval)
                throw ImageFormatError("sample " + std::to_string(s) + " exceeds maxval");
            img.samples[i] = static_cast<std::uint16_t>(s);
        }
        return img;
    }

    // P5: exactly one whitespace byte after maxval, then the raw payload.
    const int sep = in.get();
    if (sep == EOF || !std::isspace(static_cast<unsigned char>(sep)))
        throw ImageFormatError("missing separator before binary payload");
    const bool wide = maxval > 255;
    for (std::size_t i = 0; i < count; ++i) {
        const int hi = in.get();
        if (hi == EOF) throw ImageFormatError("truncated binary payload");
        long s = hi;
        if (wide) {
            const int lo = in.get();
            if (lo == EOF) throw ImageFormatError("truncated binary payload");
            s = (s << 8) | lo;
        }
        if (s > maxval)
            throw ImageFormatError("sample " + std::to_string(s) + " exceeds maxval");
        img.samples[i] = static_cast<std::uint16_t>(s);
    }
    return img;
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImageFormatError("cannot open '" + path.string() + "'");
    return read_pgm(in);
}

void write_pgm_file(const GrayImage& image, const std::filesystem::path& path) {
    if (image.width < 1 || image.height < 1)
        throw ImageFormatError("refusing to write empty image");
    if (image.maxval < 1 || image.maxval > 65535)
        throw ImageFormatError("maxval outside [1, 65535]");
    if (image.samples.size() !=
        static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height))
        throw ImageFormatError("sample buffer does not match image dimensions");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ImageFormatError("cannot open '" + path.string() + "' for writing");
    out << "P5\n" << image.width << ' ' << image.height << '\n' << image.maxval << '\n';
    const bool wide = image.maxval > 255;
    for (std::uint16_t s : image.samples) {
        if (s > image.maxval) throw ImageFormatError("sample exceeds maxval");
        if (wide) out.put(static_cast<char>((s >> 8) & 0xff));
        out.put(static_cast<char>(s & 0xff));
    }
    if (!out) throw ImageFormatError("short write to '" + path.string() + "'");
}

}  // namespace varmesh
