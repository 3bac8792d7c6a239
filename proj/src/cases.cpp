/**
 * @file cases.cpp
 * @brief Built-in manufactured flows and cloud sampling helpers.
 */

#include "nlstokes/analysis/case.hpp"

namespace nls {

ManufacturedCase builtin_case(const std::string& name) {
    if (name != "disk-swirl") throw ConfigError("unknown manufactured case '" + name + "'");

    // Stream function psi = (1 - x^2 - y^2)^2 with u = (-d.psi/dy, d.psi/dx)
    // ... up to the overall sign that makes u1 = +4y(1 - r^2). Differentiating
    // once more gives the gradient and Laplacian below; p = x has gradient
    // (1, 0), and f = lap_u - grad_p ties the forcing to both.
    ManufacturedCase mc;
    mc.name = "disk-swirl";
    mc.dim = 2;
    mc.u = [](const double* x, double* out) {
        const double s = 1.0 - x[0] * x[0] - x[1] * x[1];
        out[0] = 4.0 * x[1] * s;
        out[1] = -4.0 * x[0] * s;
    };
    mc.grad_u = [](const double* x, double* out) {
        const double s = 1.0 - x[0] * x[0] - x[1] * x[1];
        out[0] = -8.0 * x[0] * x[1];            // d u1 / dx
        out[1] = 4.0 * s - 8.0 * x[1] * x[1];   // d u1 / dy
        out[2] = -4.0 * s + 8.0 * x[0] * x[0];  // d u2 / dx
        out[3] = 8.0 * x[0] * x[1];             // d u2 / dy
    };
    mc.lap_u = [](const double* x, double* out) {
        out[0] = -32.0 * x[1];
        out[1] = 32.0 * x[0];
    };
    mc.p = [](const double* x) { return x[0]; };
    mc.grad_p = [](const double*, double* out) {
        out[0] = 1.0;
        out[1] = 0.0;
    };
    mc.f = [](const double* x, double* out) {
        out[0] = -32.0 * x[1] - 1.0;
        out[1] = 32.0 * x[0];
    };
    return mc;
}

std::vector<double> sample_velocity(const ManufacturedCase& mc, const PointCloud& cloud) {
    std::vector<double> out(static_cast<std::size_t>(cloud.size()) * mc.dim);
    for (int i = 0; i < cloud.size(); ++i)
        mc.u(cloud.point(i), &out[static_cast<std::size_t>(i) * mc.dim]);
    return out;
}

std::vector<double> sample_pressure(const ManufacturedCase& mc, const PointCloud& cloud) {
    std::vector<double> out(static_cast<std::size_t>(cloud.size()));
    for (int i = 0; i < cloud.size(); ++i) out[static_cast<std::size_t>(i)] = mc.p(cloud.point(i));
    return out;
}

std::vector<double> sample_forcing(const ManufacturedCase& mc, const PointCloud& cloud) {
    std::vector<double> out(static_cast<std::size_t>(cloud.size()) * mc.dim);
    for (int i = 0; i < cloud.size(); ++i)
        mc.f(cloud.point(i), &out[static_cast<std::size_t>(i) * mc.dim]);
    return out;
}

}  // namespace nls
