#include "greendens/kernel.hpp"

#include "greendens/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace greendens {

namespace detail {

void throw_coincident() {
    throw InvalidArgument("dipole kernel: displacement at or below the coincidence floor (|r| <= 1e-12)");
}

} // namespace detail

void require_dim(int dim) {
    if (dim < 2)
        throw InvalidArgument("dimension must be >= 2, got " + std::to_string(dim));
}

double unit_sphere_surface(int dim) {
    require_dim(dim);
    double half = 0.5 * static_cast<double>(dim);
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double kernel_prefactor(int dim) {
    require_dim(dim);
    return dim == 2 ? 1.0 : static_cast<double>(dim - 2);
}

void dipole_kernel(std::span<const double> r, int dim, std::span<double> K) {
    require_dim(dim);
    if (r.size() != static_cast<std::size_t>(dim))
        throw InvalidArgument("dipole kernel: displacement size does not match dimension");
    if (K.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim))
        throw InvalidArgument("dipole kernel: output size must be dim*dim");
    double r2 = detail::squared_norm_checked(r.data(), dim);
    double inv_rn, inv_rn2;
    detail::inverse_powers(r2, dim, inv_rn, inv_rn2);
    double c = kernel_prefactor(dim);
    double nd = static_cast<double>(dim);
    for (int u = 0; u < dim; ++u)
        for (int v = 0; v < dim; ++v)
            K[static_cast<std::size_t>(u) * dim + v] =
                detail::kernel_element(r.data(), c, nd, inv_rn, inv_rn2, u, v);
}

std::vector<double> dipole_kernel(std::span<const double> r, int dim) {
    std::vector<double> K(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
    dipole_kernel(r, dim, K);
    return K;
}

std::vector<double> apply_dipole(std::span<const double> r,
                                 std::span<const double> phi, int dim) {
    require_dim(dim);
    if (r.size() != static_cast<std::size_t>(dim) || phi.size() != static_cast<std::size_t>(dim))
        throw InvalidArgument("apply_dipole: vector sizes must match dimension");
    std::vector<double> out(static_cast<std::size_t>(dim), 0.0);
    apply_dipole_add(r.data(), phi.data(), dim, kernel_prefactor(dim), out.data());
    return out;
}

} // namespace greendens
