#include "nlstokes/kernels/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nlstokes/simd/simd_ops.hpp"

namespace nls {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Unit-sphere areas S_n for n = 1, 2, 3.
double sphere_area(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * kPi;
        default: return 4.0 * kPi;
    }
}

/// ∫₀² F(t²/4)·t^power dt with panel splits at the profile's breakpoints
/// (mapped through t = 2√r so piecewise definitions stay smooth per panel).
double radial_integral(const KernelProfile& prof, bool integrated, int power) {
    using quad = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto f = [&](double t) {
        const double q = 0.25 * t * t;
        double F = integrated ? prof.Rbar(q) : prof.R(q);
        for (int m = 0; m < power; ++m) F *= t;
        return F;
    };
    std::vector<double> cuts;
    cuts.push_back(0.0);
    for (double rb : prof.breakpoints()) {
        if (rb > 0.0 && rb < 1.0) cuts.push_back(2.0 * std::sqrt(rb));
    }
    cuts.push_back(2.0);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (cuts[k + 1] - cuts[k] < 1e-14) continue;
        total += quad::integrate(f, cuts[k], cuts[k + 1], 12, 1e-13);
    }
    return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// KernelProfile
// ---------------------------------------------------------------------------

KernelProfile KernelProfile::builtin(const std::string& name) {
    KernelProfile p;
    p.name_ = name;
    p.breaks_ = {0.0, 1.0};
    if (name == "quadratic") {
        p.kind_ = ProfileKind::Quadratic;
        p.gamma0_ = 0.25;  // R is decreasing, so min over [0,1/2] is R(1/2)
    } else if (name == "cosine") {
        p.kind_ = ProfileKind::Cosine;
        p.gamma0_ = 0.5;
    } else {
        throw ConfigError("unknown kernel profile \"" + name +
                          "\" (built-ins: quadratic, cosine)");
    }
    return p;
}

double KernelProfile::R(double r) const {
    if (r >= 1.0) return 0.0;
    switch (kind_) {
        case ProfileKind::Quadratic: {
            const double t = 1.0 - r;
            return t * t;
        }
        case ProfileKind::Cosine:
            return 0.5 * (1.0 + std::cos(kPi * r));
        case ProfileKind::Custom:
            // clamp sub-tolerance interpolation undershoot so the assembled
            // quadratic forms stay semidefinite
            return std::max(spline_eval(r), 0.0);
    }
    return 0.0;
}

double KernelProfile::Rprime(double r) const {
    if (r >= 1.0) return 0.0;
    switch (kind_) {
        case ProfileKind::Quadratic:
            return -2.0 * (1.0 - r);
        case ProfileKind::Cosine:
            return -0.5 * kPi * std::sin(kPi * r);
        case ProfileKind::Custom:
            return spline_deriv(r);
    }
    return 0.0;
}

double KernelProfile::Rbar(double r) const {
    if (r >= 1.0) return 0.0;
    if (r < 0.0) r = 0.0;
    switch (kind_) {
        case ProfileKind::Quadratic: {
            const double t = 1.0 - r;
            return t * t * t * (1.0 / 3.0);
        }
        case ProfileKind::Cosine:
            // ∫_r^1 (1+cos πs)/2 ds
            return 0.5 * (1.0 - r) - 0.5 * std::sin(kPi * r) / kPi;
        case ProfileKind::Custom:
            return spline_tail_integral(r);
    }
    return 0.0;
}

// ---- custom tables ---------------------------------------------------------

KernelProfile KernelProfile::from_table(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw ConfigError("cannot open kernel table \"" + csv_path + "\"");

    KernelProfile p;
    p.kind_ = ProfileKind::Custom;
    p.name_ = "custom:" + csv_path;

    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream row(line);
        double r = 0.0, v = 0.0;
        if (!(row >> r >> v)) {
            if (first) {  // tolerate a single header line
                first = false;
                continue;
            }
            throw ValidationError("kernel table: malformed row \"" + line + "\"");
        }
        first = false;
        p.knots_.push_back(r);
        p.vals_.push_back(v);
    }
    if (p.knots_.size() < 4)
        throw ValidationError("kernel table: need at least 4 rows to interpolate");
    p.build_spline();
    p.validate_custom();
    p.breaks_ = p.knots_;
    return p;
}

void KernelProfile::build_spline() {
    const std::size_t m = knots_.size();
    for (std::size_t k = 0; k + 1 < m; ++k) {
        if (!(knots_[k + 1] > knots_[k]))
            throw ValidationError("kernel table: r grid must be strictly increasing");
    }
    if (std::abs(knots_.front()) > 1e-12 || std::abs(knots_.back() - 1.0) > 1e-12)
        throw ValidationError("kernel table: r grid must cover [0,1]");
    for (double v : vals_)
        if (!std::isfinite(v)) throw ValidationError("kernel table: non-finite value");

    // Natural cubic spline: tridiagonal solve for second derivatives.
    sig_.assign(m, 0.0);
    std::vector<double> diag(m, 0.0), off(m, 0.0), rhs(m, 0.0);
    for (std::size_t k = 1; k + 1 < m; ++k) {
        const double hl = knots_[k] - knots_[k - 1];
        const double hr = knots_[k + 1] - knots_[k];
        diag[k] = 2.0 * (hl + hr);
        off[k] = hr;
        rhs[k] = 6.0 * ((vals_[k + 1] - vals_[k]) / hr - (vals_[k] - vals_[k - 1]) / hl);
    }
    // forward sweep over the interior unknowns (σ_0 = σ_{m-1} = 0)
    for (std::size_t k = 2; k + 1 < m; ++k) {
        const double hl = knots_[k] - knots_[k - 1];
        const double w = hl / diag[k - 1];
        diag[k] -= w * off[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    for (std::size_t k = m - 2; k >= 1; --k) {
        const double upper = (k + 2 < m) ? off[k] * sig_[k + 1] : 0.0;
        sig_[k] = (rhs[k] - upper) / diag[k];
        if (k == 1) break;
    }

    // Tail integrals I_k = ∫_{r_k}^{1} spline, accumulated right to left.
    tail_int_.assign(m, 0.0);
    for (std::size_t k = m - 1; k >= 1; --k) {
        const double h = knots_[k] - knots_[k - 1];
        const double seg = h * (0.5 * (vals_[k - 1] + vals_[k]) -
                                (h * h / 24.0) * (sig_[k - 1] + sig_[k]));
        tail_int_[k - 1] = tail_int_[k] + seg;
    }
}

void KernelProfile::validate_custom() {
    double scale = 0.0;
    for (double v : vals_) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw ValidationError("kernel profile violates nondegeneracy: R is identically zero");

    // table data must be nonnegative as given
    for (double v : vals_)
        if (v < 0.0)
            throw ValidationError("kernel profile violates positivity: table value R < 0");

    if (std::abs(vals_.back()) > 1e-8 * scale)
        throw ValidationError("kernel profile violates support: R(1) must vanish");

    // Interpolation may undershoot between knots; tolerate tiny wiggle (it
    // is clamped to zero on evaluation) but reject genuine negativity.
    const int samples = 2048;
    double min_all = 0.0;
    double min_half = vals_.front();
    for (int k = 0; k <= samples; ++k) {
        const double r = static_cast<double>(k) / samples;
        const double v = spline_eval(r);
        min_all = std::min(min_all, v);
        if (r <= 0.5) min_half = std::min(min_half, std::max(v, 0.0));
    }
    if (min_all < -1e-6 * scale)
        throw ValidationError("kernel profile violates positivity: R < 0 inside the support");
    if (min_half <= 0.0)
        throw ValidationError("kernel profile violates nondegeneracy: R must be > 0 on [0, 1/2]");
    gamma0_ = min_half;
}

double KernelProfile::spline_eval(double r) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
    std::size_t k = (it == knots_.begin()) ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
    if (k + 1 >= knots_.size()) k = knots_.size() - 2;
    const double h = knots_[k + 1] - knots_[k];
    const double A = (knots_[k + 1] - r) / h;
    const double B = 1.0 - A;
    return A * vals_[k] + B * vals_[k + 1] +
           (h * h / 6.0) * ((A * A * A - A) * sig_[k] + (B * B * B - B) * sig_[k + 1]);
}

double KernelProfile::spline_deriv(double r) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
    std::size_t k = (it == knots_.begin()) ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
    if (k + 1 >= knots_.size()) k = knots_.size() - 2;
    const double h = knots_[k + 1] - knots_[k];
    const double A = (knots_[k + 1] - r) / h;
    const double B = 1.0 - A;
    return (vals_[k + 1] - vals_[k]) / h +
           (h / 6.0) * (-(3.0 * A * A - 1.0) * sig_[k] + (3.0 * B * B - 1.0) * sig_[k + 1]);
}

double KernelProfile::spline_tail_integral(double r) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
    std::size_t k = (it == knots_.begin()) ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
    if (k + 1 >= knots_.size()) k = knots_.size() - 2;
    const double h = knots_[k + 1] - knots_[k];
    const double a = (knots_[k + 1] - r) / h;  // remaining fraction of the segment
    const double ca = 1.0 - a;
    const double part =
        h * (vals_[k] * 0.5 * a * a + vals_[k + 1] * (a - 0.5 * a * a) +
             (h * h / 6.0) * (sig_[k] * (0.25 * a * a * a * a - 0.5 * a * a) +
                              sig_[k + 1] * (0.5 * ca * ca - 0.25 * ca * ca * ca * ca - 0.25)));
    return part + tail_int_[k + 1];
}

// ---------------------------------------------------------------------------
// Normalization and the scaled kernel
// ---------------------------------------------------------------------------

double normalization_constant(const KernelProfile& profile, int dim) {
    if (dim < 1 || dim > 3) throw ConfigError("kernel dimension must be 1, 2 or 3");
    const double integral = sphere_area(dim) * radial_integral(profile, true, dim - 1);
    if (!(integral > 0.0) || !std::isfinite(integral))
        throw ValidationError("kernel profile violates nondegeneracy: normalization integral is not positive");
    return 1.0 / integral;
}

ScaledKernel::ScaledKernel(KernelProfile profile, int dim, double delta)
    : profile_(std::move(profile)), dim_(dim), delta_(delta) {
    if (dim < 1 || dim > 3) throw ConfigError("kernel dimension must be 1, 2 or 3");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw ConfigError("kernel horizon delta must be positive");
    alpha_ = normalization_constant(profile_, dim_);
    c_delta_ = alpha_ * std::pow(delta_, -dim_);
    inv_4d2_ = 1.0 / (4.0 * delta_ * delta_);
}

double ScaledKernel::R_from_d2(double d2) const {
    const double q = d2 * inv_4d2_;
    if (q >= 1.0) return 0.0;
    return c_delta_ * profile_.R(q);
}

double ScaledKernel::Rbar_from_d2(double d2) const {
    const double q = d2 * inv_4d2_;
    if (q >= 1.0) return 0.0;
    return c_delta_ * profile_.Rbar(q);
}

double ScaledKernel::eval_R(const double* x, const double* y) const {
    double d2 = 0.0;
    for (int c = 0; c < dim_; ++c) {
        const double d = x[c] - y[c];
        d2 += d * d;
    }
    return R_from_d2(d2);
}

double ScaledKernel::eval_Rbar(const double* x, const double* y) const {
    double d2 = 0.0;
    for (int c = 0; c < dim_; ++c) {
        const double d = x[c] - y[c];
        d2 += d * d;
    }
    return Rbar_from_d2(d2);
}

void ScaledKernel::profile_values(const double* d2, double* R_out, double* Rbar_out,
                                  std::size_t n) const {
    // squared ratios q = d2/(4δ²) staged in R_out, then overwritten
    for (std::size_t k = 0; k < n; ++k) R_out[k] = d2[k] * inv_4d2_;
    if (profile_.kind() == ProfileKind::Quadratic) {
        const auto& ops = simd::active();
        ops.quad_profile_Rbar(R_out, Rbar_out, n);
        ops.quad_profile_R(R_out, R_out, n);
        return;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double q = R_out[k];
        Rbar_out[k] = profile_.Rbar(q);
        R_out[k] = profile_.R(q);
    }
}

double ScaledKernel::second_moment() const {
    // (1/2δ²)∫ R_δ z₁² dz = (α_n S_n / 2n) ∫₀² R(t²/4) t^{n+1} dt
    return alpha_ * sphere_area(dim_) * radial_integral(profile_, false, dim_ + 1) /
           (2.0 * dim_);
}

double ScaledKernel::stabilizer_coefficient() const {
    return alpha_ * sphere_area(dim_) * radial_integral(profile_, true, dim_ + 1) /
           (2.0 * dim_);
}

}  // namespace nls
