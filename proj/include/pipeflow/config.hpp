#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pipeflow/geometry.hpp"

namespace pipeflow {

/// One experiment configuration, read from a JSON document and optionally
/// overridden by CLI flags. See the README for the exact grammar.
struct RunConfig {
    CrossSection section = make_section(SectionKind::Disk, 1.0);
    int rings = 16;
    int sectors = 64;
    int level = 0;
    std::vector<double> alphas;
    bool alphas_specified = false; // "alpha" key present (even if empty)
    int order = 8;
    double tol = 1e-11;
    std::string out_dir = ".";
};

/// Parse a config file. Throws ConfigError naming the offending key.
RunConfig load_config(const std::string& path);

/// Parse an alpha specification: either a comma list "0.1,1,4" or a range
/// "min:max:count:log" / "min:max:count:lin".
std::vector<double> parse_alpha_spec(const std::string& spec);

/// The default sweep grid: 25 log-spaced points in [1e-2, 1e3] plus alpha = 0.
std::vector<double> default_sweep_grid();

} // namespace pipeflow
