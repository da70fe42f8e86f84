#include <cstdio>
#include <string>

#include "btz/spacetime.hpp"

namespace btz {

namespace {

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct LeafMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
};

LeafMesh triangulate(const DecoratedSimplex& s, double kappa, double t, int res)
{
    LeafMesh mesh;
    auto index = [res](int i, int j) {
        // row i holds res - i + 1 vertices
        return i * (res + 1) - i * (i - 1) / 2 + j;
    };
    for (int i = 0; i <= res; ++i) {
        for (int j = 0; i + j <= res; ++j) {
            const Vec3 alpha(double(res - i - j) / res, double(i) / res, double(j) / res);
            mesh.vertices.push_back(develop_blended(s, kappa, t, alpha));
        }
    }
    for (int i = 0; i < res; ++i) {
        for (int j = 0; i + j < res; ++j) {
            mesh.faces.push_back({index(i, j), index(i + 1, j), index(i, j + 1)});
            if (i + j + 1 < res)
                mesh.faces.push_back({index(i + 1, j), index(i + 1, j + 1), index(i, j + 1)});
        }
    }
    return mesh;
}

}  // namespace

std::string export_mesh(const PolyhedralSpacetime& st, const std::vector<double>& leaves,
                        int resolution, MeshFormat format)
{
    if (leaves.empty())
        fail(ErrorCode::InvalidInput, "no leaves requested");
    if (resolution < 1)
        fail(ErrorCode::InvalidInput, "mesh resolution must be at least 1");
    for (double t : leaves)
        if (!(t > 0.0) || !std::isfinite(t))
            fail(ErrorCode::InvalidInput, "leaf times must be positive");

    std::string out;
    if (format == MeshFormat::Obj) {
        out += "# leaves of the time function, " + std::to_string(leaves.size()) + " leaves\n";
        int offset = 1;
        for (double t : leaves) {
            for (const auto& s : st.complex.simplices) {
                const LeafMesh m = triangulate(s, st.kappa, t, resolution);
                out += "o leaf_" + fmt17(t) + "_simplex_" + std::to_string(s.id) + "\n";
                for (const auto& v : m.vertices)
                    out += "v " + fmt17(v(0)) + " " + fmt17(v(1)) + " " + fmt17(v(2)) + "\n";
                for (const auto& f : m.faces)
                    out += "f " + std::to_string(f[0] + offset) + " " + std::to_string(f[1] + offset) +
                           " " + std::to_string(f[2] + offset) + "\n";
                offset += static_cast<int>(m.vertices.size());
            }
        }
        return out;
    }

    out += "{\"kappa\":" + fmt17(st.kappa) + ",\"resolution\":" + std::to_string(resolution) +
           ",\"leaves\":[";
    for (std::size_t l = 0; l < leaves.size(); ++l) {
        out += (l ? "," : "") + std::string("{\"t\":") + fmt17(leaves[l]) + ",\"simplices\":[";
        for (std::size_t k = 0; k < st.complex.simplices.size(); ++k) {
            const auto& s = st.complex.simplices[k];
            const LeafMesh m = triangulate(s, st.kappa, leaves[l], resolution);
            out += (k ? "," : "") + std::string("{\"id\":") + std::to_string(s.id) + ",\"vertices\":[";
            for (std::size_t i = 0; i < m.vertices.size(); ++i) {
                const Vec3& v = m.vertices[i];
                out += (i ? ",[" : "[") + fmt17(v(0)) + "," + fmt17(v(1)) + "," + fmt17(v(2)) + "]";
            }
            out += "],\"faces\":[";
            for (std::size_t i = 0; i < m.faces.size(); ++i) {
                const auto& f = m.faces[i];
                out += (i ? ",[" : "[") + std::to_string(f[0]) + "," + std::to_string(f[1]) + "," +
                       std::to_string(f[2]) + "]";
            }
            out += "]}";
        }
        out += "]}";
    }
    out += "]}\n";
    return out;
}

}  // namespace btz
