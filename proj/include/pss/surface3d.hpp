#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pss/immersion.hpp"

namespace pss {

/// Position and orthonormal frame (e1, e2 tangent, e3 normal).
struct FrameState {
    std::array<double, 3> X{0.0, 0.0, 0.0};
    std::array<std::array<double, 3>, 3> e{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
};

/// max_ij |e_i . e_j - delta_ij|
double ortho_defect(const FrameState& st);

/// Project the frame onto the nearest orthogonal one (polar factor).
void renormalize(FrameState& st);

struct SurfaceMesh {
    int nx = 0, nt = 0;
    std::vector<double> x, t;
    std::vector<FrameState> nodes;  // row-major: index j * nx + i, j the t-row
    std::vector<char> valid;        // genericity mask per vertex
    double max_ortho_drift = 0.0;   // worst defect seen before renormalization
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
};

struct FrameOptions {
    int renorm_interval = 16;
    double mask_eps = 1e-8;
    FrameState seed{};
};

/// Transport along the x-grid of one jet slice from node ix0 to ix1
/// (ix1 - ix0 even): fourth-order steps spanning two grid nodes each, so the
/// stage midpoints land on grid nodes. co must hold the coefficients at
/// slice.x[ix0..ix1].
FrameState transport_x(FrameState st, const JetFields& slice, const SffCoeffs& co, int ix0,
                       int ix1, double mu, int eps, const FrameOptions& opt = {},
                       double* drift = nullptr, std::vector<FrameState>* record = nullptr);

/// Transport in t at the fixed grid node ix across uniformly spaced slices
/// (odd count): steps span two slices each. co is indexed relative to ix0.
FrameState transport_t(FrameState st, std::span<const JetFields> slices,
                       std::span<const double> times, const SffCoeffs& co, int ix0, int ix,
                       double mu, int eps, const FrameOptions& opt = {}, double* drift = nullptr,
                       std::vector<FrameState>* record = nullptr);

/// Integrate the frame over the rectangle [x(ix0), x(ix1)] x [t_0, t_end]:
/// seed row along x at the first slice, then one t-column per mesh x-node.
/// Mesh nodes sit on every second grid node and every second slice.
SurfaceMesh integrate_frame(std::span<const JetFields> slices, std::span<const double> times,
                            const SffCoeffs& co, int ix0, int ix1, double mu, int eps,
                            const FrameOptions& opt = {});

struct MeshDiagnostics {
    double metric_rel_err = 0.0;  // discrete vs w1^2 + w2^2, relative Frobenius
    double k_min = 0.0, k_max = 0.0, k_mean = 0.0;  // discrete Gaussian curvature
    int interior_vertices = 0;
    bool degenerate = false;
    std::string message;
};

MeshDiagnostics mesh_diagnostics(const SurfaceMesh& mesh, std::span<const JetFields> slices,
                                 const SffCoeffs& co, int ix0, double mu, int eps);

/// Wavefront OBJ: one "v" line per valid vertex (9 significant digits,
/// row-major order), quads between valid vertices split into two triangles.
void export_obj(std::ostream& os, const SurfaceMesh& mesh);
void export_obj(const std::string& path, const SurfaceMesh& mesh);

struct ObjData {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> faces;  // 1-based as in the file
};
ObjData parse_obj(std::istream& is);

}  // namespace pss
