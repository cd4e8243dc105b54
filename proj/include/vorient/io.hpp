#pragma once

#include <stdexcept>
#include <string>

#include "vorient/geometry.hpp"

namespace vorient {

enum class CloudFormat { Xyz, Ply };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

CloudFormat format_from_string(const std::string& name);
CloudFormat format_from_path(const std::string& path);

struct LoadedCloud {
    PointCloud cloud;
    std::vector<Vec3> normals;  // empty when the file has none
    bool has_normals() const { return !normals.empty(); }
};

// XYZ: ASCII "x y z" or "x y z nx ny nz" per line, '#' comments skipped.
// PLY: ASCII or binary-little-endian, vertex properties x,y,z and optional
// nx,ny,nz. File normals are unit-normalized on load.
LoadedCloud read_point_cloud(const std::string& path, CloudFormat format);

// Writes positions + normals; ASCII output uses 9 significant digits and is
// byte-deterministic. Throws when the cloud has no normals.
void write_oriented_cloud(const PointCloud& cloud, const std::string& path, CloudFormat format);

}  // namespace vorient
