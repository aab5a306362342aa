#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "crcoop/errors.hpp"

namespace crcoop {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// Hermitian inner product a†b.
inline cplx vdot(const cvec& a, const cvec& b) {
    if (a.size() != b.size()) throw input_error("vdot: size mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double norm2(const cvec& a) {
    double s = 0.0;
    for (const cplx& x : a) s += std::norm(x);
    return s;
}

inline double vnorm(const cvec& a) { return std::sqrt(norm2(a)); }

inline cvec scaled(const cvec& a, cplx s) {
    cvec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

inline cvec add(const cvec& a, const cvec& b) {
    cvec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline cvec sub(const cvec& a, const cvec& b) {
    cvec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline cvec unit(const cvec& a) {
    const double n = vnorm(a);
    if (n <= 0.0) throw input_error("unit: zero vector");
    return scaled(a, cplx{1.0 / n, 0.0});
}

inline bool all_finite(const cvec& a) {
    for (const cplx& x : a)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
}

struct ProjectionPair {
    cvec parallel;    // component along h_ref
    cvec orthogonal;  // remainder, orthogonal to h_ref
};

// Orthogonal decomposition of h with respect to the line spanned by h_ref.
inline ProjectionPair project_pair(const cvec& h_ref, const cvec& h) {
    if (h_ref.size() != h.size()) throw input_error("project_pair: size mismatch");
    const double nref = norm2(h_ref);
    if (nref <= 0.0) throw input_error("project_pair: zero reference vector");
    const cplx coef = vdot(h_ref, h) / nref;
    ProjectionPair out;
    out.parallel = scaled(h_ref, coef);
    out.orthogonal = sub(h, out.parallel);
    return out;
}

// |h1†h2|^2 / (||h1||^2 ||h2||^2), clipped into [0, 1].
inline double alignment_cos2(const cvec& h1, const cvec& h2) {
    const double n1 = norm2(h1), n2 = norm2(h2);
    if (n1 <= 0.0 || n2 <= 0.0) throw input_error("alignment_cos2: zero vector");
    const double c = std::norm(vdot(h1, h2)) / (n1 * n2);
    return std::clamp(c, 0.0, 1.0);
}

}  // namespace crcoop
