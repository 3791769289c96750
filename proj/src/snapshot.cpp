#include "wallflux/snapshot.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wallflux/error.hpp"

namespace wallflux {

namespace {

std::vector<double> parse_numbers(const std::string& s) {
    std::vector<double> out;
    std::istringstream iss(s);
    double v;
    while (iss >> v) out.push_back(v);
    return out;
}

}  // namespace

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open snapshot: " + path);
    Snapshot snap;
    std::vector<double> times;
    std::string line;
    // Header: key = value until a blank line.
    while (std::getline(in, line)) {
        if (line.empty()) break;
        if (line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DataError("snapshot header line missing '=': " + line);
        std::string key = line.substr(0, eq);
        key.erase(key.find_last_not_of(" \t") + 1);
        key.erase(0, key.find_first_not_of(" \t"));
        const std::vector<double> vals = parse_numbers(line.substr(eq + 1));
        if (key == "origin" && vals.size() == 3) {
            snap.origin = {vals[0], vals[1], vals[2]};
        } else if (key == "spacing" && vals.size() == 3) {
            snap.spacing = {vals[0], vals[1], vals[2]};
        } else if (key == "dims" && vals.size() == 3) {
            snap.dims[0] = static_cast<int>(vals[0]);
            snap.dims[1] = static_cast<int>(vals[1]);
            snap.dims[2] = static_cast<int>(vals[2]);
        } else if (key == "times" && !vals.empty()) {
            times = vals;
        } else if (key == "nu" && vals.size() == 1) {
            snap.nu = vals[0];
        } else {
            throw DataError("unrecognized snapshot header entry: " + line);
        }
    }
    if (snap.dims[0] < 2 || snap.dims[1] < 2 || snap.dims[2] < 2)
        throw DataError("snapshot grid must have at least 2 nodes per axis");
    if (times.empty()) throw DataError("snapshot header missing times");
    const std::size_t n = snap.nodes_per_slab();
    for (double t : times) {
        SnapshotSlab slab;
        slab.time = t;
        slab.u1.reserve(n);
        slab.u2.reserve(n);
        slab.u3.reserve(n);
        slab.p.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::getline(in, line)) throw DataError("snapshot truncated");
            const std::vector<double> vals = parse_numbers(line);
            if (vals.size() != 4) throw DataError("snapshot record needs 4 columns: " + line);
            slab.u1.push_back(vals[0]);
            slab.u2.push_back(vals[1]);
            slab.u3.push_back(vals[2]);
            slab.p.push_back(vals[3]);
        }
        snap.slabs.push_back(std::move(slab));
    }
    return snap;
}

void write_snapshot(const std::string& path, const Snapshot& snap) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write snapshot: " + path);
    char buf[256];
    std::snprintf(buf, sizeof buf, "origin = %.17g %.17g %.17g\n", snap.origin.x, snap.origin.y,
                  snap.origin.z);
    out << buf;
    std::snprintf(buf, sizeof buf, "spacing = %.17g %.17g %.17g\n", snap.spacing.x, snap.spacing.y,
                  snap.spacing.z);
    out << buf;
    std::snprintf(buf, sizeof buf, "dims = %d %d %d\n", snap.dims[0], snap.dims[1], snap.dims[2]);
    out << buf;
    out << "times =";
    for (const auto& s : snap.slabs) {
        std::snprintf(buf, sizeof buf, " %.17g", s.time);
        out << buf;
    }
    out << "\n";
    std::snprintf(buf, sizeof buf, "nu = %.17g\n", snap.nu);
    out << buf;
    out << "\n";
    for (const auto& s : snap.slabs) {
        for (std::size_t i = 0; i < snap.nodes_per_slab(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", s.u1[i], s.u2[i], s.u3[i],
                          s.p[i]);
            out << buf;
        }
    }
}

namespace {

class SampledField final : public FlowField {
public:
    SampledField(Snapshot snap, double horizon) : snap_(std::move(snap)) {
        nu_ = snap_.nu;
        horizon_ = horizon;
    }

    std::string id() const override { return "sampled"; }
    bool steady() const override { return snap_.slabs.size() == 1; }

    Vec3 velocity(const Vec3& x, double t) const override {
        return {interp(x, t, 0), interp(x, t, 1), interp(x, t, 2)};
    }
    double pressure(const Vec3& x, double t) const override { return interp(x, t, 3); }

    Mat3 velocity_grad(const Vec3& x, double t) const override {
        Mat3 g;
        for (int j = 0; j < 3; ++j) {
            Vec3 e{0, 0, 0};
            e[j] = 1.0;
            const double h = snap_.spacing[j];
            const Vec3 up = velocity(x + h * e, t), um = velocity(x - h * e, t);
            for (int i = 0; i < 3; ++i) g.m[i][j] = (up[i] - um[i]) / (2.0 * h);
        }
        return g;
    }

    Vec3 velocity_laplacian(const Vec3& x, double t) const override {
        Vec3 lap{};
        const Vec3 c = velocity(x, t);
        for (int j = 0; j < 3; ++j) {
            Vec3 e{0, 0, 0};
            e[j] = 1.0;
            const double h = snap_.spacing[j];
            lap += (velocity(x + h * e, t) + velocity(x - h * e, t) - 2.0 * c) / (h * h);
        }
        return lap;
    }

    Vec3 pressure_grad(const Vec3& x, double t) const override {
        Vec3 g;
        for (int j = 0; j < 3; ++j) {
            Vec3 e{0, 0, 0};
            e[j] = 1.0;
            const double h = snap_.spacing[j];
            g[j] = (pressure(x + h * e, t) - pressure(x - h * e, t)) / (2.0 * h);
        }
        return g;
    }

    Vec3 velocity_dt(const Vec3& x, double t) const override {
        if (snap_.slabs.size() < 2) return {};
        const double h = 1e-3 * (snap_.slabs.back().time - snap_.slabs.front().time);
        return (velocity(x, t + h) - velocity(x, t - h)) / (2.0 * h);
    }

    double wall_pressure(const Body& body, const Vec3& s, double t) const override {
        const Vec3 n = body.normal_at(s);
        const double h = std::max({snap_.spacing.x, snap_.spacing.y, snap_.spacing.z});
        // Quadratic extrapolation to the wall from {1,2,3}*h interior points.
        const double p1 = pressure(s + h * n, t);
        const double p2 = pressure(s + 2.0 * h * n, t);
        const double p3 = pressure(s + 3.0 * h * n, t);
        return 3.0 * p1 - 3.0 * p2 + p3;
    }

private:
    double node(const SnapshotSlab& s, int i, int j, int k, int comp) const {
        const std::size_t idx =
            static_cast<std::size_t>(k) * snap_.dims[0] * snap_.dims[1] +
            static_cast<std::size_t>(j) * snap_.dims[0] + i;
        switch (comp) {
            case 0: return s.u1[idx];
            case 1: return s.u2[idx];
            case 2: return s.u3[idx];
            default: return s.p[idx];
        }
    }

    double interp_slab(const SnapshotSlab& s, const Vec3& x, int comp) const {
        double f[3], c[3];
        int i0[3];
        for (int a = 0; a < 3; ++a) {
            c[a] = (x[a] - snap_.origin[a]) / snap_.spacing[a];
            if (c[a] < -1e-9 || c[a] > snap_.dims[a] - 1 + 1e-9)
                throw DataError("out of data coverage");
            i0[a] = static_cast<int>(std::floor(c[a]));
            i0[a] = std::max(0, std::min(i0[a], snap_.dims[a] - 2));
            f[a] = c[a] - i0[a];
        }
        double acc = 0.0;
        for (int dk = 0; dk < 2; ++dk)
            for (int dj = 0; dj < 2; ++dj)
                for (int di = 0; di < 2; ++di) {
                    const double w = (di ? f[0] : 1.0 - f[0]) * (dj ? f[1] : 1.0 - f[1]) *
                                     (dk ? f[2] : 1.0 - f[2]);
                    acc += w * node(s, i0[0] + di, i0[1] + dj, i0[2] + dk, comp);
                }
        return acc;
    }

    double interp(const Vec3& x, double t, int comp) const {
        if (snap_.slabs.size() == 1) return interp_slab(snap_.slabs[0], x, comp);
        const auto& slabs = snap_.slabs;
        if (t <= slabs.front().time) return interp_slab(slabs.front(), x, comp);
        if (t >= slabs.back().time) return interp_slab(slabs.back(), x, comp);
        std::size_t k = 1;
        while (k < slabs.size() && slabs[k].time < t) ++k;
        const double t0 = slabs[k - 1].time, t1 = slabs[k].time;
        const double w = (t - t0) / (t1 - t0);
        return (1.0 - w) * interp_slab(slabs[k - 1], x, comp) + w * interp_slab(slabs[k], x, comp);
    }

    Snapshot snap_;
};

}  // namespace

std::shared_ptr<FlowField> make_sampled_field(Snapshot snap, double horizon) {
    if (snap.slabs.empty()) throw DataError("snapshot has no time blocks");
    return std::make_shared<SampledField>(std::move(snap), horizon);
}

}  // namespace wallflux
