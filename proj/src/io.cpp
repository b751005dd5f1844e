#include "wavelab/io.hpp"

#include <cstdint>
#include <fstream>

#include <json.hpp>

namespace wavelab {

namespace {

void put_i32(std::ostream& out, std::int32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }
void put_f64(std::ostream& out, double v) { out.write(reinterpret_cast<const char*>(&v), 8); }
std::int32_t get_i32(std::istream& in) {
    std::int32_t v;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
double get_f64(std::istream& in) {
    double v;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

}  // namespace

void write_field(const Field& f, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("write_field: cannot open " + path.string());
    const GridSpec& g = f.grid();
    put_i32(out, g.d);
    put_i32(out, g.n);
    put_f64(out, g.period);
    for (const cplx& v : f.values()) put_f64(out, v.real());
    if (!out) throw io_error("write_field: write failed for " + path.string());
}

Field read_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("read_field: cannot open " + path.string());
    const int d = get_i32(in);
    const int n = get_i32(in);
    const double L = get_f64(in);
    GridSpec g(d, n, L);
    std::vector<double> vals(g.size());
    for (double& v : vals) v = get_f64(in);
    if (!in) throw io_error("read_field: truncated file " + path.string());
    return Field::from_real(g, vals);
}

void write_field_csv(const Field& f, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("write_field_csv: cannot open " + path.string());
    const GridSpec& g = f.grid();
    out << (g.d == 1 ? "x,value\n" : "x0,x1,value\n");
    const auto& v = f.values();
    out.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto p = g.point(i);
        if (g.d == 1)
            out << p[0] << "," << v[i].real() << "\n";
        else
            out << p[0] << "," << p[1] << "," << v[i].real() << "\n";
    }
}

void write_strip_field(const StripField& v, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("write_strip_field: cannot open " + path.string());
    put_i32(out, v.grid.d);
    put_i32(out, v.grid.n);
    put_f64(out, v.grid.period);
    put_i32(out, v.nz);
    const ChebGrid& cz = ChebGrid::get(v.nz);
    for (double z : cz.z) put_f64(out, z);
    for (const cplx& x : v.values) put_f64(out, x.real());
    if (!out) throw io_error("write_strip_field: write failed for " + path.string());
}

StripField read_strip_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("read_strip_field: cannot open " + path.string());
    const int d = get_i32(in);
    const int n = get_i32(in);
    const double L = get_f64(in);
    GridSpec g(d, n, L);
    int nz = get_i32(in);
    for (int j = 0; j < nz; ++j) get_f64(in);  // z nodes are implied by nz
    StripField v(g, nz);
    for (cplx& x : v.values) x = get_f64(in);
    if (!in) throw io_error("read_strip_field: truncated file " + path.string());
    return v;
}

void write_trajectory(const Trajectory& traj, const WaveParams& params, double s_norms,
                      const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "fields");
    nlohmann::ordered_json man;
    if (!traj.samples.empty()) {
        const GridSpec& g = traj.samples.front().eta.grid();
        man["grid"] = {{"d", g.d}, {"n", g.n}, {"period", g.period}};
    }
    man["params"] = {{"g", params.g}, {"h", params.h}, {"delta", params.delta}, {"nz", params.nz}};
    man["dt"] = traj.dt;
    man["steps"] = traj.steps;
    man["halted"] = traj.halted;
    man["halt_reason"] = traj.halt_reason;
    man["s"] = s_norms;

    auto times = nlohmann::ordered_json::array();
    auto ham = nlohmann::ordered_json::array();
    auto mass = nlohmann::ordered_json::array();
    auto momentum = nlohmann::ordered_json::array();
    auto norms = nlohmann::ordered_json::array();
    auto files = nlohmann::ordered_json::array();
    char name[64];
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const Snapshot& s = traj.samples[i];
        times.push_back(s.t);
        ham.push_back(s.hamiltonian);
        mass.push_back(s.mass);
        if (traj.samples.front().eta.grid().d == 1)
            momentum.push_back(s.momentum[0]);
        else
            momentum.push_back(nlohmann::ordered_json::array({s.momentum[0], s.momentum[1]}));
        nlohmann::ordered_json nr;
        nr["eta"] = sobolev_norm(s.eta, s_norms + 0.5);
        nr["psi"] = sobolev_norm(s.psi, s_norms + 0.5);
        if (!s.B.empty()) {
            nr["B"] = sobolev_norm(s.B, s_norms);
            double v2 = 0.0;
            for (const Field& v : s.V) v2 += std::pow(sobolev_norm(v, s_norms), 2);
            nr["V"] = std::sqrt(v2);
            nr["a_min"] = s.a_min;
        }
        norms.push_back(nr);

        std::snprintf(name, sizeof(name), "eta_%04zu.bin", i);
        write_field(s.eta, dir / "fields" / name);
        nlohmann::ordered_json row;
        row["eta"] = std::string("fields/") + name;
        std::snprintf(name, sizeof(name), "psi_%04zu.bin", i);
        write_field(s.psi, dir / "fields" / name);
        row["psi"] = std::string("fields/") + name;
        files.push_back(row);
    }
    man["times"] = times;
    man["hamiltonian"] = ham;
    man["mass"] = mass;
    man["momentum"] = momentum;
    man["norms"] = norms;
    man["files"] = files;

    std::ofstream out(dir / "manifest.json");
    if (!out) throw io_error("write_trajectory: cannot open manifest in " + dir.string());
    out << man.dump(2) << "\n";
}

bool trajectory_complete(const std::filesystem::path& dir) {
    return std::filesystem::exists(dir / "manifest.json");
}

}  // namespace wavelab
