#pragma once

// Small dense complex linear algebra for finite-dimensional substrates:
// inner products, Gram-Schmidt, subspace predicates, Kronecker products and
// reduced density matrices. Dimensions here are tiny (2..~64), so everything
// is plain vectors, no BLAS.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ctcog::la {

using cplx = std::complex<double>;
using vec = std::vector<cplx>;
using mat = std::vector<vec>;  // row-major, mat[r][c]

inline constexpr double kDefaultTol = 1e-9;  // absolute tolerance on inner products

cplx inner(const vec& a, const vec& b);  // conjugate-linear in the first slot
double norm(const vec& a);
vec normalized(const vec& a);  // throws on (near-)zero input

// Projection of v onto the span of an orthonormal list.
vec project(std::span<const vec> onb, const vec& v);
double projection_weight(std::span<const vec> onb, const vec& v);  // ||P v||^2

// Modified Gram-Schmidt; vectors whose residual norm is <= tol are dropped.
std::vector<vec> orthonormalize(std::span<const vec> gens, double tol = kDefaultTol);
std::size_t rank(std::span<const vec> gens, double tol = kDefaultTol);

// Orthonormal basis of the orthogonal complement of span(onb) inside C^dim.
std::vector<vec> orthocomplement(std::span<const vec> onb, std::size_t dim,
                                 double tol = kDefaultTol);

bool in_span(std::span<const vec> onb, const vec& v, double tol = kDefaultTol);
bool spans_equal(std::span<const vec> a, std::span<const vec> b, double tol = kDefaultTol);
bool spans_orthogonal(std::span<const vec> a, std::span<const vec> b, double tol = kDefaultTol);
std::size_t intersection_dim(std::span<const vec> a, std::span<const vec> b,
                             double tol = kDefaultTol);

vec kron(const vec& a, const vec& b);
vec basis_vector(std::size_t dim, std::size_t index);
vec qubit_at_angle(double degrees);  // cos|0> + sin|1>, real amplitudes

// Reduced density matrix of a pure state: trace out every tensor factor
// except `keep`. `dims` lists the factor dimensions in tensor order.
mat reduced_density(const vec& psi, std::span<const std::size_t> dims, std::size_t keep);

// (I x ... x U x ... x I) psi with U acting on factor `k`.
vec apply_factor_unitary(const vec& psi, std::span<const std::size_t> dims, std::size_t k,
                         const mat& u);

}  // namespace ctcog::la
