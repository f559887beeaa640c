#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "varmesh/field.hpp"
#include "varmesh/transform.hpp"

namespace varmesh {

/// Decoded FLD1 container. Layout on disk:
///   bytes 0-3   magic, ASCII "FLD1"
///   byte  4     dimension (2 or 3)
///   byte  5     component count (1 for scalar, dim for vector)
///   bytes 6-7   reserved, must be zero
///   bytes 8-11  points per axis, unsigned 32-bit little-endian
///   payload     n^dim * components doubles, IEEE-754 little-endian,
///               row-major node order, component-major (all of component
///               0 first, then component 1, ...)
struct StoredField {
    GridSpec grid;
    std::vector<ScalarField> components;

    bool is_scalar() const { return components.size() == 1; }

    /// Throws FieldError when the stored component count does not match.
    ScalarField to_scalar() const;
    VectorField to_vector() const;
    Transformation to_transformation() const;
};

void write_field(std::ostream& out, const ScalarField& f);
void write_field(std::ostream& out, const VectorField& v);
StoredField read_field(std::istream& in);

void write_field_file(const std::filesystem::path& path, const ScalarField& f);
void write_field_file(const std::filesystem::path& path, const VectorField& v);
StoredField read_field_file(const std::filesystem::path& path);

} // namespace varmesh
