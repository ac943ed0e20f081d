#include "pipeflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pipeflow {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_vtk(const TriMesh& mesh,
               const std::vector<std::pair<std::string, const ScalarField*>>& fields,
               const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("write_vtk: cannot open " + path);
    out << "# vtk DataFile Version 3.0\n";
    out << "pipeflow cross-section\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.n_vertices() << " double\n";
    for (const auto& v : mesh.vertices) {
        out << fmt_num(v.x) << ' ' << fmt_num(v.y) << " 0\n";
    }
    out << "CELLS " << mesh.n_triangles() << ' ' << 4 * mesh.n_triangles() << '\n';
    for (const auto& t : mesh.triangles) {
        out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
    out << "CELL_TYPES " << mesh.n_triangles() << '\n';
    for (int t = 0; t < mesh.n_triangles(); ++t) out << "5\n";
    if (!fields.empty()) {
        out << "POINT_DATA " << mesh.n_vertices() << '\n';
        for (const auto& [name, field] : fields) {
            out << "SCALARS " << name << " double 1\n";
            out << "LOOKUP_TABLE default\n";
            for (double v : field->values) out << fmt_num(v) << '\n';
        }
    }
    if (!out) throw ConfigError("write_vtk: write failed for " + path);
}

std::vector<GrowthSample> read_growth_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("growth samples: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) {
        throw MalformedSamples("growth samples: empty file");
    }
    // tolerate a UTF-8 BOM and trailing CR
    if (line.size() >= 3 && line.compare(0, 3, "\xef\xbb\xbf") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "zeta,Y") {
        throw MalformedSamples("growth samples: expected header \"zeta,Y\"");
    }
    std::vector<GrowthSample> samples;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        GrowthSample s;
        char comma = 0;
        if (!(ss >> s.zeta >> comma >> s.Y) || comma != ',') {
            throw MalformedSamples("growth samples: bad row at line " +
                                   std::to_string(lineno));
        }
        samples.push_back(s);
    }
    return samples;
}

} // namespace pipeflow
