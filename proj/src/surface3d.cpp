#include "pss/surface3d.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pss {

double ortho_defect(const FrameState& st) {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 3; ++k) dot += st.e[i][k] * st.e[j][k];
            worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 inverse_transpose(const Mat3& m) {
    double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                 m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                 m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    Mat3 cof;
    cof[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    cof[0][1] = -(m[1][0] * m[2][2] - m[1][2] * m[2][0]);
    cof[0][2] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    cof[1][0] = -(m[0][1] * m[2][2] - m[0][2] * m[2][1]);
    cof[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
    cof[1][2] = -(m[0][0] * m[2][1] - m[0][1] * m[2][0]);
    cof[2][0] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
    cof[2][1] = -(m[0][0] * m[1][2] - m[0][2] * m[1][0]);
    cof[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    Mat3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = cof[i][j] / det;
    return out;
}

}  // namespace

void renormalize(FrameState& st) {
    // Newton iteration toward the polar (nearest orthogonal) factor
    for (int it = 0; it < 3; ++it) {
        Mat3 mt = inverse_transpose(st.e);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) st.e[i][j] = 0.5 * (st.e[i][j] + mt[i][j]);
    }
}

namespace {

// coefficient arrays of one slice restricted to [ix0, ix1]
struct FormSlice {
    std::vector<double> f11, f12, f21, f22, f31, f32, d12;
};

FieldView subview(const JetFields& j, int ix0, int len) {
    auto sub = [&](const std::vector<double>& v) {
        return std::span<const double>(v).subspan(ix0, len);
    };
    return {sub(j.x),  sub(j.u),  sub(j.ux),  sub(j.uxx),
            sub(j.uxxx), sub(j.ut), sub(j.uxt), sub(j.uxxt)};
}

FormSlice eval_forms(const CompiledForms& cf, const JetFields& slice, int ix0, int len) {
    FieldView v = subview(slice, ix0, len);
    return {cf.f11.eval_field(v), cf.f12.eval_field(v), cf.f21.eval_field(v),
            cf.f22.eval_field(v), cf.f31.eval_field(v), cf.f32.eval_field(v),
            cf.d12.eval_field(v)};
}

// transport derivative for one direction: p1, p2, p3 are the components of
// w1, w2, w3 in that direction; w13 = a w1 + b w2, w23 = b w1 + c w2
FrameState deriv(const FrameState& st, double p1, double p2, double p3, double a, double b,
                 double c) {
    double w13 = a * p1 + b * p2;
    double w23 = b * p1 + c * p2;
    FrameState d;
    for (int k = 0; k < 3; ++k) {
        d.X[k] = p1 * st.e[0][k] + p2 * st.e[1][k];
        d.e[0][k] = p3 * st.e[1][k] + w13 * st.e[2][k];
        d.e[1][k] = -p3 * st.e[0][k] + w23 * st.e[2][k];
        d.e[2][k] = -w13 * st.e[0][k] - w23 * st.e[1][k];
    }
    return d;
}

FrameState axpy(const FrameState& st, double h, const FrameState& d) {
    FrameState out = st;
    for (int k = 0; k < 3; ++k) {
        out.X[k] += h * d.X[k];
        for (int i = 0; i < 3; ++i) out.e[i][k] += h * d.e[i][k];
    }
    return out;
}

FrameState rk4(const FrameState& st, double h,
               const std::array<std::array<double, 6>, 3>& coef) {
    // coef rows: coefficients (p1, p2, p3, a, b, c) at the start, mid, end
    auto f = [&](const FrameState& s, int row) {
        const auto& c = coef[row];
        return deriv(s, c[0], c[1], c[2], c[3], c[4], c[5]);
    };
    FrameState k1 = f(st, 0);
    FrameState k2 = f(axpy(st, h / 2, k1), 1);
    FrameState k3 = f(axpy(st, h / 2, k2), 1);
    FrameState k4 = f(axpy(st, h, k3), 2);
    FrameState out = st;
    for (int k = 0; k < 3; ++k) {
        out.X[k] += h / 6 * (k1.X[k] + 2 * k2.X[k] + 2 * k3.X[k] + k4.X[k]);
        for (int i = 0; i < 3; ++i)
            out.e[i][k] += h / 6 * (k1.e[i][k] + 2 * k2.e[i][k] + 2 * k3.e[i][k] + k4.e[i][k]);
    }
    return out;
}

void note_drift(FrameState& st, int& steps, int interval, double* drift) {
    if (++steps % interval != 0) return;
    if (drift) *drift = std::max(*drift, ortho_defect(st));
    renormalize(st);
}

void check_rect(int ix0, int ix1, std::size_t nslices, const SffCoeffs& co,
                const JetFields& first) {
    if (ix0 < 0 || ix1 < ix0 || (ix1 - ix0) % 2 != 0 ||
        static_cast<std::size_t>(ix1) >= first.x.size())
        throw std::invalid_argument("surface transport: bad x-index range");
    if (nslices == 0 || nslices % 2 == 0)
        throw std::invalid_argument("surface transport: slice count must be odd");
    if (co.x.size() != static_cast<std::size_t>(ix1 - ix0 + 1))
        throw std::invalid_argument("surface transport: coefficient nodes not conformable");
    for (std::size_t k = 0; k < co.x.size(); ++k)
        if (std::abs(co.x[k] - first.x[ix0 + k]) > 1e-12)
            throw std::invalid_argument("surface transport: coefficient nodes misaligned");
}

}  // namespace

FrameState transport_x(FrameState st, const JetFields& slice, const SffCoeffs& co, int ix0,
                       int ix1, double mu, int eps, const FrameOptions& opt, double* drift,
                       std::vector<FrameState>* record) {
    check_rect(ix0, ix1, 1, co, slice);
    CompiledForms cf = compile_forms(mu, eps);
    FormSlice fs = eval_forms(cf, slice, ix0, ix1 - ix0 + 1);
    int steps = 0;
    if (record) record->push_back(st);
    for (int k = 0; k + 2 <= ix1 - ix0; k += 2) {
        double h = slice.x[ix0 + k + 2] - slice.x[ix0 + k];
        std::array<std::array<double, 6>, 3> coef;
        for (int s = 0; s < 3; ++s) {
            int i = k + s;
            coef[s] = {fs.f11[i], fs.f21[i], fs.f31[i], co.a[i], co.b[i], co.c[i]};
        }
        st = rk4(st, h, coef);
        note_drift(st, steps, opt.renorm_interval, drift);
        if (record) record->push_back(st);
    }
    if (drift) *drift = std::max(*drift, ortho_defect(st));
    return st;
}

FrameState transport_t(FrameState st, std::span<const JetFields> slices,
                       std::span<const double> times, const SffCoeffs& co, int ix0, int ix,
                       double mu, int eps, const FrameOptions& opt, double* drift,
                       std::vector<FrameState>* record) {
    int ci = ix - ix0;
    if (ci < 0 || static_cast<std::size_t>(ci) >= co.x.size())
        throw std::invalid_argument("transport_t: x-index outside the coefficient range");
    if (slices.empty() || slices.size() % 2 == 0)
        throw std::invalid_argument("transport_t: slice count must be odd");
    if (std::abs(co.x[ci] - slices[0].x[ix]) > 1e-12)
        throw std::invalid_argument("transport_t: coefficient nodes misaligned");
    CompiledForms cf = compile_forms(mu, eps);
    double a = co.a[ci], b = co.b[ci], c = co.c[ci];
    int steps = 0;
    if (record) record->push_back(st);
    for (std::size_t j = 0; j + 2 < slices.size(); j += 2) {
        double h = times[j + 2] - times[j];
        std::array<std::array<double, 6>, 3> coef;
        for (int s = 0; s < 3; ++s) {
            FormSlice fs = eval_forms(cf, slices[j + s], ix, 1);
            coef[s] = {fs.f12[0], fs.f22[0], fs.f32[0], a, b, c};
        }
        st = rk4(st, h, coef);
        note_drift(st, steps, opt.renorm_interval, drift);
        if (record) record->push_back(st);
    }
    if (drift) *drift = std::max(*drift, ortho_defect(st));
    return st;
}

SurfaceMesh integrate_frame(std::span<const JetFields> slices, std::span<const double> times,
                            const SffCoeffs& co, int ix0, int ix1, double mu, int eps,
                            const FrameOptions& opt) {
    check_rect(ix0, ix1, slices.size(), co, slices[0]);
    if (times.size() != slices.size())
        throw std::invalid_argument("integrate_frame: times and slices not conformable");

    SurfaceMesh mesh;
    mesh.nx = (ix1 - ix0) / 2 + 1;
    mesh.nt = static_cast<int>(slices.size() - 1) / 2 + 1;
    for (int i = 0; i < mesh.nx; ++i) mesh.x.push_back(slices[0].x[ix0 + 2 * i]);
    for (int j = 0; j < mesh.nt; ++j) mesh.t.push_back(times[2 * j]);
    mesh.nodes.resize(static_cast<std::size_t>(mesh.nx) * mesh.nt);
    mesh.valid.assign(mesh.nodes.size(), 1);

    CompiledForms cf = compile_forms(mu, eps);
    double drift = 0.0;

    // seed row at the first slice, then one t-column per mesh x-node
    std::vector<FrameState> row;
    transport_x(opt.seed, slices[0], co, ix0, ix1, mu, eps, opt, &drift, &row);
    for (int i = 0; i < mesh.nx; ++i) {
        std::vector<FrameState> col;
        transport_t(row[i], slices, times, co, ix0, ix0 + 2 * i, mu, eps, opt, &drift, &col);
        for (int j = 0; j < mesh.nt; ++j) mesh.nodes[mesh.idx(i, j)] = col[j];
    }

    // genericity mask from |Delta_12| at the mesh vertices
    for (int j = 0; j < mesh.nt; ++j) {
        FormSlice fs = eval_forms(cf, slices[2 * j], ix0, ix1 - ix0 + 1);
        for (int i = 0; i < mesh.nx; ++i)
            if (std::abs(fs.d12[2 * i]) < opt.mask_eps) mesh.valid[mesh.idx(i, j)] = 0;
    }

    mesh.max_ortho_drift = drift;
    return mesh;
}

namespace {

void mesh_triangles(const SurfaceMesh& mesh, std::vector<std::array<std::size_t, 3>>& tris) {
    tris.clear();
    for (int j = 0; j + 1 < mesh.nt; ++j)
        for (int i = 0; i + 1 < mesh.nx; ++i) {
            std::size_t v00 = mesh.idx(i, j), v10 = mesh.idx(i + 1, j);
            std::size_t v11 = mesh.idx(i + 1, j + 1), v01 = mesh.idx(i, j + 1);
            if (!(mesh.valid[v00] && mesh.valid[v10] && mesh.valid[v11] && mesh.valid[v01]))
                continue;
            tris.push_back({v00, v10, v11});
            tris.push_back({v00, v11, v01});
        }
}

double tri_angle(const std::array<double, 3>& at, const std::array<double, 3>& p,
                 const std::array<double, 3>& q) {
    std::array<double, 3> u, v;
    for (int k = 0; k < 3; ++k) {
        u[k] = p[k] - at[k];
        v[k] = q[k] - at[k];
    }
    double uu = 0, vv = 0, uv = 0;
    for (int k = 0; k < 3; ++k) {
        uu += u[k] * u[k];
        vv += v[k] * v[k];
        uv += u[k] * v[k];
    }
    return std::acos(std::max(-1.0, std::min(1.0, uv / std::sqrt(uu * vv))));
}

double tri_area(const std::array<double, 3>& p0, const std::array<double, 3>& p1,
                const std::array<double, 3>& p2) {
    std::array<double, 3> u, v;
    for (int k = 0; k < 3; ++k) {
        u[k] = p1[k] - p0[k];
        v[k] = p2[k] - p0[k];
    }
    double cx = u[1] * v[2] - u[2] * v[1];
    double cy = u[2] * v[0] - u[0] * v[2];
    double cz = u[0] * v[1] - u[1] * v[0];
    return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

}  // namespace

MeshDiagnostics mesh_diagnostics(const SurfaceMesh& mesh, std::span<const JetFields> slices,
                                 const SffCoeffs& co, int ix0, double mu, int eps) {
    MeshDiagnostics rep;
    std::vector<std::array<std::size_t, 3>> tris;
    mesh_triangles(mesh, tris);
    if (tris.empty()) {
        rep.degenerate = true;
        rep.message = "degenerate, no faces";
        return rep;
    }

    CompiledForms cf = compile_forms(mu, eps);

    // metric: central differences of positions vs w1^2 + w2^2 from the jets
    double num = 0.0, den = 0.0;
    for (int j = 1; j + 1 < mesh.nt; ++j) {
        FormSlice fs = eval_forms(cf, slices[2 * j], ix0, 2 * (mesh.nx - 1) + 1);
        for (int i = 1; i + 1 < mesh.nx; ++i) {
            std::size_t v = mesh.idx(i, j);
            if (!mesh.valid[v] || !mesh.valid[mesh.idx(i - 1, j)] ||
                !mesh.valid[mesh.idx(i + 1, j)] || !mesh.valid[mesh.idx(i, j - 1)] ||
                !mesh.valid[mesh.idx(i, j + 1)])
                continue;
            double hx = mesh.x[i + 1] - mesh.x[i - 1];
            double ht = mesh.t[j + 1] - mesh.t[j - 1];
            std::array<double, 3> dx{}, dt{};
            for (int k = 0; k < 3; ++k) {
                dx[k] = (mesh.nodes[mesh.idx(i + 1, j)].X[k] -
                         mesh.nodes[mesh.idx(i - 1, j)].X[k]) / hx;
                dt[k] = (mesh.nodes[mesh.idx(i, j + 1)].X[k] -
                         mesh.nodes[mesh.idx(i, j - 1)].X[k]) / ht;
            }
            double Ed = 0, Fd = 0, Gd = 0;
            for (int k = 0; k < 3; ++k) {
                Ed += dx[k] * dx[k];
                Fd += dx[k] * dt[k];
                Gd += dt[k] * dt[k];
            }
            int c = 2 * i;
            double E = fs.f11[c] * fs.f11[c] + fs.f21[c] * fs.f21[c];
            double F = fs.f11[c] * fs.f12[c] + fs.f21[c] * fs.f22[c];
            double G = fs.f12[c] * fs.f12[c] + fs.f22[c] * fs.f22[c];
            num += (Ed - E) * (Ed - E) + 2 * (Fd - F) * (Fd - F) + (Gd - G) * (Gd - G);
            den += E * E + 2 * F * F + G * G;
        }
    }
    if (den > 0) rep.metric_rel_err = std::sqrt(num / den);

    // angle-defect Gaussian curvature on interior vertices
    std::vector<double> angle(mesh.nodes.size(), 0.0), area(mesh.nodes.size(), 0.0);
    std::vector<int> count(mesh.nodes.size(), 0);
    for (const auto& t : tris) {
        const auto& p0 = mesh.nodes[t[0]].X;
        const auto& p1 = mesh.nodes[t[1]].X;
        const auto& p2 = mesh.nodes[t[2]].X;
        double ar = tri_area(p0, p1, p2);
        angle[t[0]] += tri_angle(p0, p1, p2);
        angle[t[1]] += tri_angle(p1, p2, p0);
        angle[t[2]] += tri_angle(p2, p0, p1);
        for (std::size_t v : t) {
            area[v] += ar;
            ++count[v];
        }
    }
    double ksum = 0.0;
    rep.k_min = 1e300;
    rep.k_max = -1e300;
    for (int j = 1; j + 1 < mesh.nt; ++j)
        for (int i = 1; i + 1 < mesh.nx; ++i) {
            std::size_t v = mesh.idx(i, j);
            if (count[v] != 6 || area[v] <= 0.0) continue;  // needs the full triangle ring
            double K = 3.0 * (2.0 * std::numbers::pi - angle[v]) / area[v];
            rep.k_min = std::min(rep.k_min, K);
            rep.k_max = std::max(rep.k_max, K);
            ksum += K;
            ++rep.interior_vertices;
        }
    if (rep.interior_vertices > 0) rep.k_mean = ksum / rep.interior_vertices;
    else {
        rep.k_min = rep.k_max = 0.0;
    }
    return rep;
}

void export_obj(std::ostream& os, const SurfaceMesh& mesh) {
    std::vector<std::array<std::size_t, 3>> tris;
    mesh_triangles(mesh, tris);
    if (tris.empty()) throw std::invalid_argument("export_obj: mesh has no faces");
    std::vector<long> vid(mesh.nodes.size(), -1);
    long next = 1;
    os.precision(9);
    for (std::size_t v = 0; v < mesh.nodes.size(); ++v) {
        if (!mesh.valid[v]) continue;
        vid[v] = next++;
        os << "v " << mesh.nodes[v].X[0] << " " << mesh.nodes[v].X[1] << " "
           << mesh.nodes[v].X[2] << "\n";
    }
    for (const auto& t : tris)
        os << "f " << vid[t[0]] << " " << vid[t[1]] << " " << vid[t[2]] << "\n";
}

void export_obj(const std::string& path, const SurfaceMesh& mesh) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("export_obj: cannot open " + path);
    export_obj(os, mesh);
}

ObjData parse_obj(std::istream& is) {
    ObjData data;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            std::array<double, 3> p{};
            ls >> p[0] >> p[1] >> p[2];
            data.vertices.push_back(p);
        } else if (tag == "f") {
            std::array<int, 3> f{};
            ls >> f[0] >> f[1] >> f[2];
            data.faces.push_back(f);
        }
    }
    return data;
}

}  // namespace pss
