#include "ellround/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace ellround::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_field(std::string_view field, std::size_t line) {
    field = trim(field);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw std::invalid_argument("line " + std::to_string(line) + ": non-numeric field '" + std::string(field) + "'");
    }
    if (!std::isfinite(v)) throw std::invalid_argument("line " + std::to_string(line) + ": non-finite field");
    return v;
}

}  // namespace

PointList parse_points(std::istream& in) {
    PointList out;
    std::string raw;
    std::size_t line = 0;
    Eigen::Index d = -1;
    while (std::getline(in, raw)) {
        ++line;
        const std::string_view body = trim(raw);
        if (body.empty() || body.front() == '#') continue;
        std::vector<double> vals;
        std::size_t start = 0;
        while (true) {
            const auto comma = body.find(',', start);
            vals.push_back(parse_field(body.substr(start, comma == std::string_view::npos ? body.npos : comma - start), line));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        const auto k = static_cast<Eigen::Index>(vals.size());
        if (d < 0) d = k;
        if (k != d) {
            throw std::invalid_argument("line " + std::to_string(line) + ": expected " + std::to_string(d) + " fields, got " +
                                        std::to_string(k));
        }
        out.push_back(Eigen::Map<const Vector>(vals.data(), k));
    }
    return out;
}

PointList parse_points_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return parse_points(in);
}

void write_points(std::ostream& out, const PointList& points) {
    char buf[32];
    for (const Vector& p : points) {
        for (Eigen::Index j = 0; j < p.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", p(j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace ellround::cli
