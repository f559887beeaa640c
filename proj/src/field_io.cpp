#include "varmesh/field_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "varmesh/errors.hpp"

namespace varmesh {

namespace {

constexpr std::array<char, 4> kMagic = {'F', 'L', 'D', '1'};

void put_u32_le(std::ostream& out, std::uint32_t v) {
    std::array<char, 4> b = {static_cast<char>(v & 0xff),
                             static_cast<char>((v >> 8) & 0xff),
                             static_cast<char>((v >> 16) & 0xff),
                             static_cast<char>((v >> 24) & 0xff)};
    out.write(b.data(), b.size());
}

void put_f64_le(std::ostream& out, double d) {
    std::uint64_t v = std::bit_cast<std::uint64_t>(d);
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i)
        b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b.data(), b.size());
}

void write_header(std::ostream& out, const GridSpec& grid, int components) {
    out.write(kMagic.data(), kMagic.size());
    char dim_byte = static_cast<char>(grid.dim);
    char comp_byte = static_cast<char>(components);
    char zero = 0;
    out.write(&dim_byte, 1);
    out.write(&comp_byte, 1);
    out.write(&zero, 1);
    out.write(&zero, 1);
    put_u32_le(out, static_cast<std::uint32_t>(grid.n));
}

void write_payload(std::ostream& out, const ScalarField& f) {
    for (double v : f.values())
        put_f64_le(out, v);
}

// Reads exactly `count` bytes or reports a truncated file.
void read_exact(std::istream& in, char* dst, std::size_t count) {
    in.read(dst, static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
        throw FieldIoError(FieldIoError::Code::TruncatedPayload,
                           "field file ends before the declared payload");
}

} // namespace

ScalarField StoredField::to_scalar() const {
    if (!is_scalar())
        throw FieldError("stored field has " + std::to_string(components.size()) +
                         " components, expected a scalar");
    return components[0];
}

VectorField StoredField::to_vector() const {
    if (components.size() != static_cast<std::size_t>(grid.dim))
        throw FieldError("stored field has " + std::to_string(components.size()) +
                         " components, expected a vector with dim components");
    return VectorField(grid, components);
}

Transformation StoredField::to_transformation() const {
    return Transformation(grid, to_vector());
}

void write_field(std::ostream& out, const ScalarField& f) {
    write_header(out, f.grid(), 1);
    write_payload(out, f);
    if (!out)
        throw FieldIoError(FieldIoError::Code::Io, "field write failed");
}

void write_field(std::ostream& out, const VectorField& v) {
    write_header(out, v.grid(), v.components());
    for (int c = 0; c < v.components(); ++c)
        write_payload(out, v.comp(c));
    if (!out)
        throw FieldIoError(FieldIoError::Code::Io, "field write failed");
}

StoredField read_field(std::istream& in) {
    std::array<char, 12> header;
    read_exact(in, header.data(), header.size());

    for (std::size_t i = 0; i < kMagic.size(); ++i)
        if (header[i] != kMagic[i])
            throw FieldIoError(FieldIoError::Code::BadMagic,
                               "not a field file (bad magic)");

    int dim = static_cast<int>(static_cast<unsigned char>(header[4]));
    int components = static_cast<int>(static_cast<unsigned char>(header[5]));
    if (header[6] != 0 || header[7] != 0)
        throw FieldIoError(FieldIoError::Code::DimensionMismatch,
                           "reserved header bytes must be zero");
    if (dim != 2 && dim != 3)
        throw FieldIoError(FieldIoError::Code::DimensionMismatch,
                           "field file declares dimension " + std::to_string(dim));
    if (components != 1 && components != dim)
        throw FieldIoError(FieldIoError::Code::DimensionMismatch,
                           "field file declares " + std::to_string(components) +
                               " components for dimension " + std::to_string(dim));

    std::uint32_t n = 0;
    for (int i = 0; i < 4; ++i)
        n |= static_cast<std::uint32_t>(static_cast<unsigned char>(header[8 + i])) << (8 * i);
    if (n < 3 || n > (1u << 20))
        throw FieldIoError(FieldIoError::Code::DimensionMismatch,
                           "field file declares unusable axis size " + std::to_string(n));

    GridSpec grid(dim, static_cast<int>(n));

    StoredField result{grid, {}};
    std::vector<double> values(grid.node_count());
    std::array<char, 8> raw;
    for (int c = 0; c < components; ++c) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            read_exact(in, raw.data(), raw.size());
            std::uint64_t bits = 0;
            for (int b = 0; b < 8; ++b)
                bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(
                            raw[static_cast<std::size_t>(b)]))
                        << (8 * b);
            values[i] = std::bit_cast<double>(bits);
        }
        result.components.emplace_back(grid, values);
    }
    return result;
}

void write_field_file(const std::filesystem::path& path, const ScalarField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FieldIoError(FieldIoError::Code::Io,
                           "cannot open " + path.string() + " for writing");
    write_field(out, f);
}

void write_field_file(const std::filesystem::path& path, const VectorField& v) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FieldIoError(FieldIoError::Code::Io,
                           "cannot open " + path.string() + " for writing");
    write_field(out, v);
}

StoredField read_field_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FieldIoError(FieldIoError::Code::Io, "cannot open " + path.string());
    return read_field(in);
}

} // namespace varmesh
