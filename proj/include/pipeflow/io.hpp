#pragma once

#include <string>
#include <vector>

#include "pipeflow/fem.hpp"
#include "pipeflow/growth.hpp"

namespace pipeflow {

/// Shortest round-trip decimal representation used for every emitted number
/// (17 significant digits), so identical runs produce byte-identical files.
std::string fmt_num(double v);

/// Legacy ASCII VTK unstructured grid with one point scalar per field.
void write_vtk(const TriMesh& mesh,
               const std::vector<std::pair<std::string, const ScalarField*>>& fields,
               const std::string& path);

/// Two-column growth samples with header "zeta,Y".
std::vector<GrowthSample> read_growth_csv(const std::string& path);

} // namespace pipeflow
