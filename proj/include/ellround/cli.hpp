#pragma once

#include "ellround/streaming.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace ellround::cli {

// CSV, one point per line; blank lines and '#' comments are skipped.
PointList parse_points(std::istream& in);
PointList parse_points_file(const std::string& path);
void write_points(std::ostream& out, const PointList& points);

enum class Generator { ball, gaussian, lattice, simplex_shell };

Generator parse_generator(const std::string& name);

struct GeneratorSpec {
    Generator kind = Generator::ball;
    Eigen::Index d = 2;
    std::size_t n = 100;
    std::uint64_t seed = 0;
    long lattice_n = 10;  // lattice: coordinates in [-N, N]
    double radius = 16;   // simplex-shell: adversary radius
};

PointList generate(const GeneratorSpec& spec);

enum class Mode { seeded, online, coreset, adversary, verify, inequalities };

Mode parse_mode(const std::string& name);
const char* to_string(Mode m);

struct RunConfig {
    Mode mode = Mode::online;
    std::string input_path;               // empty: use the generator
    std::optional<GeneratorSpec> generator;
    Eigen::Index d = 2;                   // adversary / inequalities mode only
    double radius = 16;                   // adversary mode
    std::optional<Vector> c0;             // seeded mode
    double r0 = 0;                        // seeded mode
    SvdPath path = SvdPath::recompute;
    std::optional<std::size_t> verify_every;  // default: 1 for d <= 6, else 0
    double tolerance = 1e-7;
    int grid_density = 100;               // inequalities mode
    std::string out_dir = ".";
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitViolation = 2;

// Writes report.json and trace.csv (plus coreset.txt / adversary.csv) into out_dir.
int run(const RunConfig& config, std::ostream& log);

}  // namespace ellround::cli
