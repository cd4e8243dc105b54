#include "vorient/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace vorient {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

void check_finite(const Vec3& p, const std::string& path, std::size_t line) {
    if (!p.finite())
        throw IoError(path + ":" + std::to_string(line) + ": non-finite coordinate");
}

LoadedCloud read_xyz(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    LoadedCloud out;
    std::string line;
    std::size_t line_no = 0;
    bool expect_normals = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        Vec3 p, n;
        if (!(ss >> p.x)) continue;  // blank line
        if (!(ss >> p.y >> p.z))
            throw IoError(path + ":" + std::to_string(line_no) + ": malformed line");
        check_finite(p, path, line_no);
        bool has_n = static_cast<bool>(ss >> n.x);
        if (has_n && !(ss >> n.y >> n.z))
            throw IoError(path + ":" + std::to_string(line_no) + ": malformed normal");
        if (out.cloud.points.empty()) expect_normals = has_n;
        if (has_n != expect_normals)
            throw IoError(path + ":" + std::to_string(line_no) + ": inconsistent column count");
        out.cloud.points.push_back(p);
        if (has_n) {
            check_finite(n, path, line_no);
            out.normals.push_back(n.normalized());
        }
    }
    return out;
}

struct PlyProperty {
    std::string name;
    std::string type;
};

LoadedCloud read_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    std::size_t line_no = 0;
    auto next = [&]() {
        if (!std::getline(in, line)) throw IoError(path + ": truncated header");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_no;
    };

    next();
    if (line != "ply") throw IoError(path + ":1: not a PLY file");
    next();
    bool binary;
    if (line == "format ascii 1.0") {
        binary = false;
    } else if (line == "format binary_little_endian 1.0") {
        binary = true;
    } else {
        throw IoError(path + ":" + std::to_string(line_no) + ": unsupported format: " + line);
    }

    std::size_t vertex_count = 0;
    std::vector<PlyProperty> props;
    bool in_vertex = false;
    while (true) {
        next();
        std::istringstream ss(line);
        std::string kw;
        ss >> kw;
        if (kw == "comment") continue;
        if (kw == "element") {
            std::string name;
            std::size_t count;
            ss >> name >> count;
            in_vertex = (name == "vertex");
            if (in_vertex) vertex_count = count;
            else if (count > 0 && !props.empty())
                break;  // vertex data must come first for our reader
            continue;
        }
        if (kw == "property") {
            if (!in_vertex) continue;
            PlyProperty p;
            std::string t;
            ss >> t;
            if (t == "list")
                throw IoError(path + ":" + std::to_string(line_no) + ": list property on vertex");
            p.type = t;
            ss >> p.name;
            props.push_back(p);
            continue;
        }
        if (kw == "end_header") break;
        throw IoError(path + ":" + std::to_string(line_no) + ": unexpected header line: " + line);
    }

    int ix = -1, iy = -1, iz = -1, inx = -1, iny = -1, inz = -1;
    for (std::size_t i = 0; i < props.size(); ++i) {
        const std::string& n = props[i].name;
        int id = static_cast<int>(i);
        if (n == "x") ix = id;
        else if (n == "y") iy = id;
        else if (n == "z") iz = id;
        else if (n == "nx") inx = id;
        else if (n == "ny") iny = id;
        else if (n == "nz") inz = id;
    }
    if (ix < 0 || iy < 0 || iz < 0) throw IoError(path + ": vertex element lacks x/y/z");
    bool with_normals = inx >= 0 && iny >= 0 && inz >= 0;

    auto type_size = [&](const std::string& t) -> std::size_t {
        if (t == "float" || t == "float32" || t == "int" || t == "int32" || t == "uint" ||
            t == "uint32")
            return 4;
        if (t == "double" || t == "float64") return 8;
        if (t == "uchar" || t == "char" || t == "int8" || t == "uint8") return 1;
        if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
        throw IoError(path + ": unsupported property type " + t);
    };

    LoadedCloud out;
    out.cloud.points.reserve(vertex_count);
    if (with_normals) out.normals.reserve(vertex_count);
    std::vector<double> row(props.size());

    for (std::size_t v = 0; v < vertex_count; ++v) {
        if (binary) {
            for (std::size_t i = 0; i < props.size(); ++i) {
                const std::string& t = props[i].type;
                std::size_t sz = type_size(t);
                unsigned char buf[8];
                if (!in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(sz)))
                    throw IoError(path + ": truncated vertex data");
                if (t == "float" || t == "float32") {
                    float f;
                    std::memcpy(&f, buf, 4);
                    row[i] = f;
                } else if (t == "double" || t == "float64") {
                    double d;
                    std::memcpy(&d, buf, 8);
                    row[i] = d;
                } else {
                    long long value = 0;
                    std::memcpy(&value, buf, sz);  // little endian host assumed
                    row[i] = static_cast<double>(value);
                }
            }
        } else {
            next();
            std::istringstream ss(line);
            for (std::size_t i = 0; i < props.size(); ++i)
                if (!(ss >> row[i]))
                    throw IoError(path + ":" + std::to_string(line_no) + ": malformed vertex");
        }
        Vec3 p{row[ix], row[iy], row[iz]};
        check_finite(p, path, v + 1);
        out.cloud.points.push_back(p);
        if (with_normals) {
            Vec3 n{row[inx], row[iny], row[inz]};
            check_finite(n, path, v + 1);
            out.normals.push_back(n.normalized());
        }
    }
    return out;
}

void append_number(std::string& s, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    s += buf;
}

std::string render_cloud_ascii(const PointCloud& cloud, bool ply) {
    std::string s;
    s.reserve(cloud.size() * 80 + 256);
    if (ply) {
        s += "ply\nformat ascii 1.0\nelement vertex ";
        s += std::to_string(cloud.size());
        s += "\nproperty double x\nproperty double y\nproperty double z\n"
             "property double nx\nproperty double ny\nproperty double nz\nend_header\n";
    }
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.points[i];
        Vec3 n = cloud.normal_vector(i);
        append_number(s, p.x); s += ' ';
        append_number(s, p.y); s += ' ';
        append_number(s, p.z); s += ' ';
        append_number(s, n.x); s += ' ';
        append_number(s, n.y); s += ' ';
        append_number(s, n.z); s += '\n';
    }
    return s;
}

}  // namespace

CloudFormat format_from_string(const std::string& name) {
    std::string n = lower(name);
    if (n == "xyz") return CloudFormat::Xyz;
    if (n == "ply") return CloudFormat::Ply;
    throw IoError("unknown format: " + name);
}

CloudFormat format_from_path(const std::string& path) {
    auto dot = path.rfind('.');
    if (dot != std::string::npos) {
        std::string ext = lower(path.substr(dot + 1));
        if (ext == "ply") return CloudFormat::Ply;
    }
    return CloudFormat::Xyz;
}

LoadedCloud read_point_cloud(const std::string& path, CloudFormat format) {
    LoadedCloud out = format == CloudFormat::Xyz ? read_xyz(path) : read_ply(path);
    if (out.cloud.points.empty()) throw IoError(path + ": no points");
    return out;
}

void write_oriented_cloud(const PointCloud& cloud, const std::string& path, CloudFormat format) {
    if (!cloud.has_normals())
        throw IoError("write_oriented_cloud: cloud has no normals");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << render_cloud_ascii(cloud, format == CloudFormat::Ply);
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace vorient
