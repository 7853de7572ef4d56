#include "ellround/adversary.hpp"
#include "ellround/cli.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ellround::cli {

Generator parse_generator(const std::string& name) {
    if (name == "ball") return Generator::ball;
    if (name == "gaussian") return Generator::gaussian;
    if (name == "lattice") return Generator::lattice;
    if (name == "simplex-shell") return Generator::simplex_shell;
    throw std::invalid_argument("unknown generator '" + name + "'");
}

PointList generate(const GeneratorSpec& spec) {
    if (spec.d < 1) throw std::invalid_argument("generator: d must be at least 1");
    if (spec.n < 1) throw std::invalid_argument("generator: n must be at least 1");
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal;
    PointList out;
    out.reserve(spec.n);
    switch (spec.kind) {
        case Generator::ball: {
            std::uniform_real_distribution<double> unif;
            for (std::size_t i = 0; i < spec.n; ++i) {
                Vector g(spec.d);
                for (Eigen::Index j = 0; j < spec.d; ++j) g(j) = normal(rng);
                const double r = std::pow(unif(rng), 1.0 / static_cast<double>(spec.d));
                out.push_back(g.norm() > 0 ? Vector(g.normalized() * r) : Vector(g));
            }
            break;
        }
        case Generator::gaussian:
            for (std::size_t i = 0; i < spec.n; ++i) {
                Vector g(spec.d);
                for (Eigen::Index j = 0; j < spec.d; ++j) g(j) = normal(rng);
                out.push_back(g);
            }
            break;
        case Generator::lattice: {
            if (spec.lattice_n < 1) throw std::invalid_argument("generator: lattice N must be at least 1");
            std::uniform_int_distribution<long> coord(-spec.lattice_n, spec.lattice_n);
            for (std::size_t i = 0; i < spec.n; ++i) {
                Vector p(spec.d);
                for (Eigen::Index j = 0; j < spec.d; ++j) p(j) = static_cast<double>(coord(rng));
                out.push_back(p);
            }
            break;
        }
        case Generator::simplex_shell: {
            AdversaryOptions opts;
            opts.check_every = 0;
            AdversaryTrace tr = run_adversary(library_rule, spec.d, spec.radius, opts);
            out = std::move(tr.points);
            if (out.size() > spec.n) out.resize(spec.n);
            break;
        }
    }
    return out;
}

}  // namespace ellround::cli
