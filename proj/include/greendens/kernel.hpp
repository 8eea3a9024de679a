#ifndef GREENDENS_KERNEL_HPP
#define GREENDENS_KERNEL_HPP

#include <cmath>
#include <span>
#include <vector>

namespace greendens {

// Displacements with norm at or below this are treated as coincident points
// and rejected; the kernel is singular there.
inline constexpr double kCoincidentDistance = 1e-12;

// Throws InvalidArgument unless dim >= 2.
void require_dim(int dim);

// Surface of the unit sphere in `dim` dimensions, S_n = 2 pi^(n/2) / Gamma(n/2).
double unit_sphere_surface(int dim);

// Dimension-dependent kernel prefactor: n - 2 for n >= 3, 1 for n = 2
// (the n = 2 kernel comes from the logarithmic potential and keeps the same
// bracket with unit prefactor).
double kernel_prefactor(int dim);

namespace detail {

[[noreturn]] void throw_coincident();

// x^m by repeated multiplication; deterministic across platforms.
inline double pow_uint(double x, int m) {
    double r = 1.0;
    for (int i = 0; i < m; ++i) r *= x;
    return r;
}

// |r|^-n and |r|^-(n+2) from the squared norm. Even n needs no square root.
inline void inverse_powers(double r2, int n, double& inv_rn, double& inv_rn2) {
    double inv = 1.0 / r2;
    if (n % 2 == 0) {
        inv_rn = pow_uint(inv, n / 2);
    } else {
        inv_rn = pow_uint(inv, (n - 1) / 2) * std::sqrt(inv);
    }
    inv_rn2 = inv_rn * inv;
}

// Single kernel element; the one arithmetic used by both the dense matrix
// and the matrix-free product, keeping the two bit-identical.
inline double kernel_element(const double* r, double c, double nd,
                             double inv_rn, double inv_rn2, int u, int v) {
    double cross = nd * (r[u] * r[v]) * inv_rn2;
    double val = (u == v) ? inv_rn - cross : -cross;
    return c * val;
}

inline double squared_norm_checked(const double* r, int dim) {
    double r2 = 0.0;
    for (int k = 0; k < dim; ++k) r2 += r[k] * r[k];
    if (!(r2 > kCoincidentDistance * kCoincidentDistance)) throw_coincident();
    return r2;
}

} // namespace detail

// Mixed second derivative of the radial potential (one derivative per
// argument of x - x'), evaluated at displacement r:
//
//   K[u][v] = c_n * ( delta_uv / |r|^n  -  n * r_u r_v / |r|^(n+2) )
//
// Symmetric, traceless, even in r, and scales as |r|^(-n). The result is
// written row-major into K (dim*dim entries). Throws InvalidArgument for
// coincident displacements.
void dipole_kernel(std::span<const double> r, int dim, std::span<double> K);

std::vector<double> dipole_kernel(std::span<const double> r, int dim);

// Accumulates K(r)*phi into out (out += K*phi) without materializing the
// matrix. Element arithmetic follows a row-major dense matrix-vector product
// exactly, so the result is bit-identical to summing dipole_kernel(r) * phi.
// phi is expected to be unit length; this is not re-checked here.
inline void apply_dipole_add(const double* r, const double* phi, int dim,
                             double c, double* out) {
    double r2 = detail::squared_norm_checked(r, dim);
    double inv_rn, inv_rn2;
    detail::inverse_powers(r2, dim, inv_rn, inv_rn2);
    double nd = static_cast<double>(dim);
    for (int u = 0; u < dim; ++u) {
        double acc = 0.0;
        for (int v = 0; v < dim; ++v)
            acc += detail::kernel_element(r, c, nd, inv_rn, inv_rn2, u, v) * phi[v];
        out[u] += acc;
    }
}

// K(r)*phi as a fresh vector.
std::vector<double> apply_dipole(std::span<const double> r,
                                 std::span<const double> phi, int dim);

} // namespace greendens

#endif
