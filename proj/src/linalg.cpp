#include "ctcog/linalg.hpp"

#include <cmath>
#include <numbers>

#include "ctcog/error.hpp"

namespace ctcog::la {

cplx inner(const vec& a, const vec& b) {
  if (a.size() != b.size())
    raise(Errc::DimensionMismatch, "inner product of vectors with different dimensions");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(const vec& a) {
  double s = 0.0;
  for (const cplx& x : a) s += std::norm(x);
  return std::sqrt(s);
}

vec normalized(const vec& a) {
  double n = norm(a);
  if (n < 1e-12) raise(Errc::InvalidArgument, "cannot normalise a zero vector");
  vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] / n;
  return out;
}

vec project(std::span<const vec> onb, const vec& v) {
  vec out(v.size(), cplx{0.0, 0.0});
  for (const vec& q : onb) {
    cplx c = inner(q, v);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += c * q[i];
  }
  return out;
}

double projection_weight(std::span<const vec> onb, const vec& v) {
  double w = 0.0;
  for (const vec& q : onb) w += std::norm(inner(q, v));
  return w;
}

std::vector<vec> orthonormalize(std::span<const vec> gens, double tol) {
  std::vector<vec> onb;
  for (const vec& g : gens) {
    vec w = g;
    // two projection passes for numerical stability
    for (int pass = 0; pass < 2; ++pass) {
      for (const vec& q : onb) {
        cplx c = inner(q, w);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * q[i];
      }
    }
    double n = norm(w);
    if (n <= std::max(tol, 1e-12)) continue;  // linearly dependent within tolerance
    for (cplx& x : w) x /= n;
    onb.push_back(std::move(w));
  }
  return onb;
}

std::size_t rank(std::span<const vec> gens, double tol) {
  return orthonormalize(gens, tol).size();
}

std::vector<vec> orthocomplement(std::span<const vec> onb, std::size_t dim, double tol) {
  std::vector<vec> all(onb.begin(), onb.end());
  std::vector<vec> complement;
  for (std::size_t i = 0; i < dim; ++i) {
    vec w = basis_vector(dim, i);
    for (int pass = 0; pass < 2; ++pass) {
      for (const vec& q : all) {
        cplx c = inner(q, w);
        for (std::size_t k = 0; k < dim; ++k) w[k] -= c * q[k];
      }
    }
    double n = norm(w);
    if (n <= std::max(tol, 1e-12)) continue;
    for (cplx& x : w) x /= n;
    all.push_back(w);
    complement.push_back(std::move(w));
  }
  return complement;
}

bool in_span(std::span<const vec> onb, const vec& v, double tol) {
  vec p = project(onb, v);
  double residual = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) residual += std::norm(v[i] - p[i]);
  return std::sqrt(residual) <= std::max(tol, 1e-12) * std::max(1.0, norm(v));
}

bool spans_equal(std::span<const vec> a, std::span<const vec> b, double tol) {
  if (rank(a, tol) != rank(b, tol)) return false;
  for (const vec& g : a)
    if (!in_span(b, g, tol)) return false;
  for (const vec& g : b)
    if (!in_span(a, g, tol)) return false;
  return true;
}

bool spans_orthogonal(std::span<const vec> a, std::span<const vec> b, double tol) {
  for (const vec& x : a)
    for (const vec& y : b)
      if (std::abs(inner(x, y)) > tol) return false;
  return true;
}

std::size_t intersection_dim(std::span<const vec> a, std::span<const vec> b, double tol) {
  std::vector<vec> joint(a.begin(), a.end());
  joint.insert(joint.end(), b.begin(), b.end());
  std::size_t ra = rank(a, tol);
  std::size_t rb = rank(b, tol);
  std::size_t ru = rank(joint, tol);
  return ra + rb - ru;
}

vec kron(const vec& a, const vec& b) {
  vec out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

vec basis_vector(std::size_t dim, std::size_t index) {
  if (index >= dim) raise(Errc::IndexOutOfRange, "basis vector index exceeds dimension");
  vec out(dim, cplx{0.0, 0.0});
  out[index] = cplx{1.0, 0.0};
  return out;
}

vec qubit_at_angle(double degrees) {
  double rad = degrees * std::numbers::pi / 180.0;
  return {cplx{std::cos(rad), 0.0}, cplx{std::sin(rad), 0.0}};
}

namespace {

// Splits a flat tensor index layout around factor `k`: psi index is
// (before * dims[k] + s) * after + b.
void split_dims(std::span<const std::size_t> dims, std::size_t k, std::size_t& before,
                std::size_t& after) {
  before = 1;
  after = 1;
  for (std::size_t i = 0; i < k; ++i) before *= dims[i];
  for (std::size_t i = k + 1; i < dims.size(); ++i) after *= dims[i];
}

}  // namespace

mat reduced_density(const vec& psi, std::span<const std::size_t> dims, std::size_t keep) {
  if (keep >= dims.size()) raise(Errc::IndexOutOfRange, "factor index out of range");
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (total != psi.size())
    raise(Errc::DimensionMismatch, "state dimension does not match factor dimensions");
  std::size_t before = 1, after = 1;
  split_dims(dims, keep, before, after);
  std::size_t dk = dims[keep];
  mat rho(dk, vec(dk, cplx{0.0, 0.0}));
  for (std::size_t s = 0; s < dk; ++s)
    for (std::size_t t = 0; t < dk; ++t)
      for (std::size_t a = 0; a < before; ++a)
        for (std::size_t b = 0; b < after; ++b) {
          std::size_t is = (a * dk + s) * after + b;
          std::size_t it = (a * dk + t) * after + b;
          rho[s][t] += psi[is] * std::conj(psi[it]);
        }
  return rho;
}

vec apply_factor_unitary(const vec& psi, std::span<const std::size_t> dims, std::size_t k,
                         const mat& u) {
  if (k >= dims.size()) raise(Errc::IndexOutOfRange, "factor index out of range");
  std::size_t dk = dims[k];
  if (u.size() != dk) raise(Errc::DimensionMismatch, "operator does not match factor dimension");
  std::size_t before = 1, after = 1;
  split_dims(dims, k, before, after);
  vec out(psi.size(), cplx{0.0, 0.0});
  for (std::size_t a = 0; a < before; ++a)
    for (std::size_t s = 0; s < dk; ++s)
      for (std::size_t b = 0; b < after; ++b) {
        cplx acc{0.0, 0.0};
        for (std::size_t t = 0; t < dk; ++t) acc += u[s][t] * psi[(a * dk + t) * after + b];
        out[(a * dk + s) * after + b] = acc;
      }
  return out;
}

}  // namespace ctcog::la
