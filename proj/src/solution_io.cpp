#include "slitstone/solution_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "slitstone/errors.hpp"

namespace slitstone {

std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_solution(std::ostream& os, const DiscreteSolution& sol) {
    os << kSolutionMagic << '\n';
    os << "nx " << sol.mesh.nx << '\n';
    os << "ny " << sol.mesh.ny << '\n';
    os << "L " << format_g17(sol.mesh.L) << '\n';
    os << "h " << format_g17(sol.mesh.h) << '\n';
    os << "k " << sol.k << '\n';
    os << "a";
    for (double c : sol.a) os << ' ' << format_g17(c);
    os << '\n';
    os << "boundary_mode " << to_string(sol.mode) << '\n';
    if (sol.mode == BoundaryMode::enriched) {
        os << "enrich_b";
        for (double c : sol.enrich_b) os << ' ' << format_g17(c);
        os << '\n';
    }
    os << "iterations " << sol.iterations << '\n';
    os << "residual " << format_g17(sol.residual) << '\n';
    os << "converged " << (sol.converged ? 1 : 0) << '\n';
    os << "scale " << format_g17(sol.scale) << '\n';
    os << "variant " << sol.variant << '\n';
    os << "kernel " << sol.kernel << '\n';
    os << "values\n";
    for (int j = 0; j < sol.mesh.ny; ++j) {
        for (int i = 0; i < sol.mesh.nx; ++i) {
            if (i) os << ' ';
            os << format_g17(sol.values[sol.mesh.idx(i, j)]);
        }
        os << '\n';
    }
    os << "active\n";
    for (int i = 0; i < sol.mesh.nx; ++i) {
        if (i) os << ' ';
        os << static_cast<int>(sol.active[static_cast<std::size_t>(i)]);
    }
    os << '\n';
}

void write_solution_file(const std::string& path, const DiscreteSolution& sol) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_solution(os, sol);
    if (!os) throw IoError("write failed on " + path);
}

namespace {

std::string expect_line(std::istream& is, const char* what) {
    std::string line;
    if (!std::getline(is, line)) throw IoError(std::string("unexpected end of file reading ") + what);
    return line;
}

// "key v1 v2 ..." -> values; verifies the key.
std::vector<double> keyed_doubles(const std::string& line, const std::string& key) {
    std::istringstream ss(line);
    std::string k;
    ss >> k;
    if (k != key) throw IoError("expected header key '" + key + "', got '" + k + "'");
    std::vector<double> vals;
    double x;
    while (ss >> x) vals.push_back(x);
    return vals;
}

double keyed_double(const std::string& line, const std::string& key) {
    const auto v = keyed_doubles(line, key);
    if (v.size() != 1) throw IoError("header key '" + key + "' needs exactly one value");
    return v[0];
}

std::string keyed_string(const std::string& line, const std::string& key) {
    std::istringstream ss(line);
    std::string k, v;
    ss >> k >> v;
    if (k != key) throw IoError("expected header key '" + key + "', got '" + k + "'");
    return v;
}

}  // namespace

DiscreteSolution read_solution(std::istream& is) {
    if (expect_line(is, "magic") != kSolutionMagic) {
        throw IoError(std::string("bad magic; expected '") + kSolutionMagic + "'");
    }
    const int nx = static_cast<int>(keyed_double(expect_line(is, "nx"), "nx"));
    const int ny = static_cast<int>(keyed_double(expect_line(is, "ny"), "ny"));
    const double L = keyed_double(expect_line(is, "L"), "L");
    const double h = keyed_double(expect_line(is, "h"), "h");

    DiscreteSolution sol;
    sol.mesh = Mesh::make(L, h);
    if (sol.mesh.nx != nx || sol.mesh.ny != ny) throw IoError("header nx/ny inconsistent with L/h");

    sol.k = static_cast<int>(keyed_double(expect_line(is, "k"), "k"));
    sol.a = keyed_doubles(expect_line(is, "a"), "a");
    sol.mode = boundary_mode_from_string(keyed_string(expect_line(is, "boundary_mode"), "boundary_mode"));
    std::string line = expect_line(is, "enrich_b or iterations");
    if (sol.mode == BoundaryMode::enriched) {
        sol.enrich_b = keyed_doubles(line, "enrich_b");
        line = expect_line(is, "iterations");
    }
    sol.iterations = static_cast<long>(keyed_double(line, "iterations"));
    sol.residual = keyed_double(expect_line(is, "residual"), "residual");
    sol.converged = keyed_double(expect_line(is, "converged"), "converged") != 0.0;
    sol.scale = keyed_double(expect_line(is, "scale"), "scale");
    sol.variant = keyed_string(expect_line(is, "variant"), "variant");
    sol.kernel = keyed_string(expect_line(is, "kernel"), "kernel");

    if (expect_line(is, "values") != "values") throw IoError("expected 'values' section");
    sol.values.resize(sol.mesh.node_count());
    for (int j = 0; j < ny; ++j) {
        std::istringstream row(expect_line(is, "value row"));
        for (int i = 0; i < nx; ++i) {
            if (!(row >> sol.values[sol.mesh.idx(i, j)])) throw IoError("short value row");
        }
    }
    if (expect_line(is, "active") != "active") throw IoError("expected 'active' section");
    sol.active.resize(static_cast<std::size_t>(nx));
    {
        std::istringstream row(expect_line(is, "active row"));
        for (int i = 0; i < nx; ++i) {
            int flag;
            if (!(row >> flag)) throw IoError("short active row");
            sol.active[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(flag != 0);
        }
    }
    return sol;
}

DiscreteSolution read_solution_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    return read_solution(is);
}

}  // namespace slitstone
