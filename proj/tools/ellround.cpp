#include "ellround/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

ellround::Vector parse_vector(const std::string& text) {
    std::istringstream in(text);
    const ellround::PointList pts = ellround::cli::parse_points(in);
    if (pts.size() != 1) throw std::invalid_argument("--c0 must be one comma-separated vector");
    return pts.front();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming ellipsoidal rounding"};
    std::string mode = "online";
    std::string input;
    std::string gen;
    long d = 2;
    std::size_t n = 100;
    long lattice_n = 10;
    double radius = 16;
    std::string c0;
    double r0 = 0;
    std::uint64_t seed = 0;
    std::string out = ".";
    long verify_every = -1;
    double tol = 1e-7;
    int grid = 100;
    bool rank_one = false;

    app.add_option("--mode", mode, "seeded | online | coreset | adversary | verify | inequalities")
        ->check(CLI::IsMember({"seeded", "online", "coreset", "adversary", "verify", "inequalities"}));
    app.add_option("--input", input, "CSV point file");
    app.add_option("--gen", gen, "ball | gaussian | lattice | simplex-shell")
        ->check(CLI::IsMember({"ball", "gaussian", "lattice", "simplex-shell"}));
    app.add_option("--d", d, "dimension (generators, adversary)");
    app.add_option("--n", n, "point count (generators)");
    app.add_option("--N", lattice_n, "lattice coordinate bound");
    app.add_option("--R", radius, "adversary radius");
    app.add_option("--c0", c0, "seed center, comma separated");
    app.add_option("--r0", r0, "seed radius");
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--out", out, "output directory");
    app.add_option("--verify-every", verify_every, "run the step oracle every k steps (0 = off)");
    app.add_option("--tol", tol, "verification tolerance");
    app.add_option("--grid", grid, "inequality grid density");
    app.add_flag("--rank-one", rank_one, "use the rank-one SVD update path");
    CLI11_PARSE(app, argc, argv);

    ellround::cli::RunConfig cfg;
    try {
        cfg.mode = ellround::cli::parse_mode(mode);
        cfg.input_path = input;
        if (!gen.empty()) {
            ellround::cli::GeneratorSpec spec;
            spec.kind = ellround::cli::parse_generator(gen);
            spec.d = d;
            spec.n = n;
            spec.seed = seed;
            spec.lattice_n = lattice_n;
            spec.radius = radius;
            cfg.generator = spec;
        }
        cfg.d = d;
        cfg.radius = radius;
        if (!c0.empty()) cfg.c0 = parse_vector(c0);
        cfg.r0 = r0;
        cfg.path = rank_one ? ellround::SvdPath::rank_one : ellround::SvdPath::recompute;
        if (verify_every >= 0) cfg.verify_every = static_cast<std::size_t>(verify_every);
        cfg.tolerance = tol;
        cfg.grid_density = grid;
        cfg.out_dir = out;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ellround::cli::kExitInputError;
    }
    return ellround::cli::run(cfg, std::cerr);
}
