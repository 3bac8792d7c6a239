#pragma once

/**
 * @file case.hpp
 * @brief Manufactured flows with closed-form derivatives.
 *
 * A case bundles a divergence-free velocity, a mean-zero pressure and every
 * derivative field the diagnostics need, with the forcing tied to them by
 * f = laplacian(u) - grad(p). Cases drive truncation ladders, solve-error
 * measurements and convergence studies; the built-in one lives on the unit
 * disk because the convergence theory wants a smooth boundary.
 */

#include <functional>
#include <string>
#include <vector>

#include "nlstokes/geometry/cloud.hpp"

namespace nls {

struct ManufacturedCase {
    std::string name;
    int dim = 2;

    std::function<void(const double*, double*)> u;       ///< velocity, dim values
    std::function<void(const double*, double*)> grad_u;  ///< row-major dim x dim
    std::function<void(const double*, double*)> lap_u;   ///< componentwise Laplacian
    std::function<double(const double*)> p;              ///< pressure
    std::function<void(const double*, double*)> grad_p;  ///< dim values
    std::function<void(const double*, double*)> f;       ///< lap_u - grad_p
};

/**
 * @brief Built-in case by name.
 *
 * "disk-swirl": stream function psi = (1 - |x|^2)^2 on the unit disk,
 * u = (4y(1-|x|^2), -4x(1-|x|^2)), p = x1, f = (-32y - 1, 32x).
 * The velocity vanishes on the boundary circle and is divergence free by
 * construction.
 *
 * @throws ConfigError for unknown names.
 */
ManufacturedCase builtin_case(const std::string& name);

/** @name Field sampling over a cloud (dim-interleaved for vector fields). */
///@{
std::vector<double> sample_velocity(const ManufacturedCase& mc, const PointCloud& cloud);
std::vector<double> sample_pressure(const ManufacturedCase& mc, const PointCloud& cloud);
std::vector<double> sample_forcing(const ManufacturedCase& mc, const PointCloud& cloud);
///@}

}  // namespace nls
