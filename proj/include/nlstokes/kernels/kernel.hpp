#pragma once

/**
 * @file kernel.hpp
 * @brief Radial kernel profiles and their rescaled, normalized forms.
 *
 * A profile is a compactly supported radial function R on [0,1] (argument is
 * the squared separation ratio, see ScaledKernel) together with its
 * integrated companion R̄(r) = ∫_r^1 R(s) ds. The rescaled kernels
 *
 *   R_δ(x,y)  = C_δ · R(‖x−y‖² / 4δ²),
 *   R̄_δ(x,y) = C_δ · R̄(‖x−y‖² / 4δ²),   C_δ = α_n · δ^(−n),
 *
 * vanish for ‖x−y‖ ≥ 2δ. The dimension constant α_n is fixed so that R̄_δ
 * integrates to one over ℝⁿ, which is the property every downstream operator
 * relies on (the mollifier has unit mass, the gradient/divergence pair is
 * first-order consistent, the stabilizer scales like δ²·Δ).
 */

#include <cstddef>
#include <string>
#include <vector>

#include "nlstokes/common.hpp"

namespace nls {

/** @brief Profile families understood by the evaluator. */
enum class ProfileKind { Quadratic, Cosine, Custom };

/**
 * @brief Dimensionless radial profile R with integrated companion R̄.
 *
 * Admissibility (checked eagerly for custom tables):
 *  - R ≥ 0 everywhere, R(r) = 0 for r ≥ 1 (compact support),
 *  - R is C¹ on [0,1],
 *  - R ≥ gamma0 > 0 on [0, 1/2] (nondegeneracy).
 *
 * Built-ins:
 *  - "quadratic": R(r) = (1−r)²,        R̄(r) = (1−r)³/3
 *  - "cosine":    R(r) = (1+cos πr)/2,  R̄(r) = (1−r)/2 − sin(πr)/(2π)
 */
class KernelProfile {
public:
    /** @brief Built-in profile by name ("quadratic" or "cosine"). */
    static KernelProfile builtin(const std::string& name);

    /**
     * @brief Custom profile from a CSV table of (r, R(r)) rows.
     *
     * The grid must be strictly increasing and cover [0,1]; values are
     * interpolated with a natural cubic spline and R̄ is its exact segment
     * integral. Violations of positivity, support or nondegeneracy raise
     * ValidationError naming the failed assumption.
     */
    static KernelProfile from_table(const std::string& csv_path);

    const std::string& name() const { return name_; }
    ProfileKind kind() const { return kind_; }

    /** @brief R(r); zero for r ≥ 1. */
    double R(double r) const;
    /** @brief dR/dr on [0,1); zero beyond the support. */
    double Rprime(double r) const;
    /** @brief R̄(r) = ∫_r^1 R(s) ds; zero for r ≥ 1. */
    double Rbar(double r) const;

    /** @brief Nondegeneracy floor: min of R over [0, 1/2]. */
    double gamma0() const { return gamma0_; }

    /** @brief Breakpoints of piecewise definition in r (for quadrature). */
    const std::vector<double>& breakpoints() const { return breaks_; }

private:
    KernelProfile() = default;

    std::string name_;
    ProfileKind kind_ = ProfileKind::Quadratic;
    double gamma0_ = 0.0;
    std::vector<double> breaks_;  // {0, 1} for built-ins, knots for tables

    // natural cubic spline data (custom profiles only)
    std::vector<double> knots_, vals_, sig_, tail_int_;
    double spline_eval(double r) const;
    double spline_deriv(double r) const;
    double spline_tail_integral(double r) const;
    void build_spline();
    void validate_custom();
};

/**
 * @brief Normalization constant α_n solving
 *        α_n · S_n · ∫₀² R̄(t²/4) t^(n−1) dt = 1,
 *        with S_n the unit-sphere area (2, 2π, 4π).
 *
 * The radial integrand is supported on [0,2] because the kernel argument is
 * the squared ratio; the integral runs to 2 accordingly.
 * @throws ValidationError when the integral is not strictly positive.
 */
double normalization_constant(const KernelProfile& profile, int dim);

/**
 * @brief A profile bound to a horizon δ and dimension n with its
 *        normalization; immutable and safe for concurrent reads.
 */
class ScaledKernel {
public:
    /** @throws ConfigError for dim ∉ {1,2,3} or δ ≤ 0. */
    ScaledKernel(KernelProfile profile, int dim, double delta);

    const KernelProfile& profile() const { return profile_; }
    int dim() const { return dim_; }
    double delta() const { return delta_; }
    /** @brief α_n. */
    double alpha() const { return alpha_; }
    /** @brief C_δ = α_n δ^(−n). */
    double c_delta() const { return c_delta_; }

    /** @brief R_δ(x,y); exactly 0 for ‖x−y‖ ≥ 2δ. */
    double eval_R(const double* x, const double* y) const;
    /** @brief R̄_δ(x,y); exactly 0 for ‖x−y‖ ≥ 2δ. */
    double eval_Rbar(const double* x, const double* y) const;

    /** @brief R_δ and R̄_δ from a squared distance (no point arithmetic). */
    double R_from_d2(double d2) const;
    double Rbar_from_d2(double d2) const;

    /**
     * @brief Batch profile evaluation for assembly sweeps.
     *
     * Writes unscaled R(q) and R̄(q) for q_k = d2[k]/(4δ²); the caller folds
     * C_δ and quadrature weights into its row scaling. Uses the SIMD fast
     * path for the quadratic profile.
     */
    void profile_values(const double* d2, double* R_out, double* Rbar_out,
                        std::size_t n) const;

    /**
     * @brief Moment (1/2δ²)·∫_{ℝⁿ} R_δ(z) z₁² dz by radial quadrature.
     *
     * Equals 1 for any admissible kernel: integrating R̄_δ's unit mass by
     * parts moves one power of z onto R_δ. Deviations mean the gradient and
     * divergence operators lose first-order consistency.
     */
    double second_moment() const;

    /**
     * @brief β_n = (1/(2nδ²))·∫_{ℝⁿ} R̄_δ(z) ‖z‖² dz; δ-independent.
     *
     * The pressure stabilizer acts like β_n δ² Δ on smooth fields.
     */
    double stabilizer_coefficient() const;

private:
    KernelProfile profile_;
    int dim_ = 2;
    double delta_ = 0.0;
    double alpha_ = 0.0;
    double c_delta_ = 0.0;
    double inv_4d2_ = 0.0;  // 1/(4δ²)
};

}  // namespace nls
