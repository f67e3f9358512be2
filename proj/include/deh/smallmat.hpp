#pragma once
// Exact dense complex linear algebra for dimensions 2 and 3, plus real
// 3-vector rotation helpers. This is the numeric bottom layer of the library:
// Pauli decomposition, a cyclic Jacobi Hermitian eigensolver, exp(-i H t),
// and the principal-branch logarithm of a unitary.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace deh {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Error taxonomy. Usage/configuration problems are kept apart from numerical
// contract violations and I/O failures so the CLI can map them to distinct
// exit codes (2, 3, 4).
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct config_error : error {
    using error::error;
};
struct numeric_error : error {
    using error::error;
};
struct io_error : error {
    using error::error;
};
struct hermiticity_error : numeric_error {
    using numeric_error::numeric_error;
};
struct unitarity_error : numeric_error {
    using numeric_error::numeric_error;
};
struct branch_cut_error : numeric_error {
    using numeric_error::numeric_error;
};
struct resonance_error : config_error {
    using config_error::config_error;
};
struct unsupported_error : config_error {
    using config_error::config_error;
};
struct energy_direction_error : config_error {
    using config_error::config_error;
};
struct integration_error : numeric_error {
    using numeric_error::numeric_error;
};
struct no_solution_error : numeric_error {
    using numeric_error::numeric_error;
};

// ---------------------------------------------------------------------------
// Fixed-size complex matrix, row major. Only N = 2 and N = 3 are instantiated;
// that keeps every routine exact, allocation-free and trivially copyable.
template <int N>
struct Matrix {
    static_assert(N == 2 || N == 3, "only dimensions 2 and 3 are supported");
    static constexpr int dim = N;

    std::array<cplx, static_cast<std::size_t>(N) * N> a{};

    cplx& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * N + c]; }
    const cplx& operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * N + c]; }

    static Matrix identity() {
        Matrix m;
        for (int i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }
    static Matrix zero() { return {}; }

    Matrix adjoint() const {
        Matrix m;
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c) m(r, c) = std::conj((*this)(c, r));
        return m;
    }

    cplx trace() const {
        cplx s = 0.0;
        for (int i = 0; i < N; ++i) s += (*this)(i, i);
        return s;
    }

    friend Matrix operator+(const Matrix& x, const Matrix& y) {
        Matrix m;
        for (std::size_t i = 0; i < x.a.size(); ++i) m.a[i] = x.a[i] + y.a[i];
        return m;
    }
    friend Matrix operator-(const Matrix& x, const Matrix& y) {
        Matrix m;
        for (std::size_t i = 0; i < x.a.size(); ++i) m.a[i] = x.a[i] - y.a[i];
        return m;
    }
    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        Matrix m;
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c) {
                cplx s = 0.0;
                for (int k = 0; k < N; ++k) s += x(r, k) * y(k, c);
                m(r, c) = s;
            }
        return m;
    }
    friend Matrix operator*(cplx s, const Matrix& x) {
        Matrix m;
        for (std::size_t i = 0; i < x.a.size(); ++i) m.a[i] = s * x.a[i];
        return m;
    }
    friend Matrix operator*(const Matrix& x, cplx s) { return s * x; }

    std::array<cplx, N> apply(const std::array<cplx, N>& v) const {
        std::array<cplx, N> out{};
        for (int r = 0; r < N; ++r) {
            cplx s = 0.0;
            for (int c = 0; c < N; ++c) s += (*this)(r, c) * v[c];
            out[r] = s;
        }
        return out;
    }
};

using Mat2 = Matrix<2>;
using Mat3 = Matrix<3>;

template <int N>
inline double max_abs(const Matrix<N>& m) {
    double v = 0.0;
    for (const cplx& x : m.a) v = std::max(v, std::abs(x));
    return v;
}

template <int N>
inline double max_abs_diff(const Matrix<N>& x, const Matrix<N>& y) {
    return max_abs(x - y);
}

template <int N>
inline double hermiticity_defect(const Matrix<N>& m) {
    return max_abs_diff(m, m.adjoint());
}

template <int N>
inline double unitarity_defect(const Matrix<N>& m) {
    return max_abs_diff(m.adjoint() * m, Matrix<N>::identity());
}

template <int N>
inline void require_hermitian(const Matrix<N>& m, double tol = 1e-12) {
    const double d = hermiticity_defect(m);
    if (d > tol)
        throw hermiticity_error("matrix is not Hermitian: max |M - M^+| = " + std::to_string(d));
}

template <int N>
inline void require_unitary(const Matrix<N>& m, double tol = 1e-10) {
    const double d = unitarity_defect(m);
    if (d > tol)
        throw unitarity_error("matrix is not unitary: max |U^+U - I| = " + std::to_string(d));
}

// ---------------------------------------------------------------------------
// Pauli basis (dimension 2).

inline Mat2 pauli_x() {
    Mat2 m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}
inline Mat2 pauli_y() {
    Mat2 m;
    m(0, 1) = cplx(0.0, -1.0);
    m(1, 0) = cplx(0.0, 1.0);
    return m;
}
inline Mat2 pauli_z() {
    Mat2 m;
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

// Coefficients of M = c_i I + c_x X + c_y Y + c_z Z; real for Hermitian M.
struct PauliCoeffs {
    double ci = 0.0, cx = 0.0, cy = 0.0, cz = 0.0;
};

inline PauliCoeffs pauli_decompose(const Mat2& m, double herm_tol = 1e-12) {
    require_hermitian(m, herm_tol);
    PauliCoeffs c;
    c.ci = 0.5 * m.trace().real();
    c.cx = 0.5 * (m * pauli_x()).trace().real();
    c.cy = 0.5 * (m * pauli_y()).trace().real();
    c.cz = 0.5 * (m * pauli_z()).trace().real();
    return c;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition via cyclic complex Jacobi rotations. For
// N <= 3 this converges to machine precision in a handful of sweeps and the
// full-matrix updates keep the code short and exactly unitary.

template <int N>
struct EigResult {
    std::array<double, N> values{};  // ascending
    Matrix<N> vectors;               // column k pairs with values[k]
};

template <int N>
inline EigResult<N> hermitian_eig(const Matrix<N>& m, double herm_tol = 1e-12) {
    require_hermitian(m, herm_tol);
    Matrix<N> a = m;
    Matrix<N> v = Matrix<N>::identity();
    const double scale = std::max(max_abs(m), 1e-300);

    for (int iter = 0; iter < 200; ++iter) {
        int p = 0, q = 1;
        double off = 0.0;
        for (int r = 0; r < N; ++r)
            for (int c = r + 1; c < N; ++c)
                if (std::abs(a(r, c)) > off) {
                    off = std::abs(a(r, c));
                    p = r;
                    q = c;
                }
        if (off <= 1e-15 * scale) break;

        // Unitary 2x2 rotation annihilating a(p,q).
        const cplx apq = a(p, q);
        const cplx phase = apq / std::abs(apq);
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * std::abs(apq));
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        Matrix<N> g = Matrix<N>::identity();
        g(p, p) = c;
        g(q, q) = c;
        g(p, q) = s * phase;
        g(q, p) = -s * std::conj(phase);

        a = g.adjoint() * a * g;
        v = v * g;
    }

    EigResult<N> out;
    std::array<int, N> order{};
    for (int i = 0; i < N; ++i) order[i] = i;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (a(order[j], order[j]).real() < a(order[i], order[i]).real())
                std::swap(order[i], order[j]);
    for (int k = 0; k < N; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (int r = 0; r < N; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

// exp(-i h t) for Hermitian h, by eigendecomposition. Exactly unitary up to
// rounding for any real t.
template <int N>
inline Matrix<N> mat_exp_i(const Matrix<N>& h, double t, double herm_tol = 1e-12) {
    const EigResult<N> e = hermitian_eig(h, herm_tol);
    Matrix<N> d;
    for (int k = 0; k < N; ++k) d(k, k) = std::exp(cplx(0.0, -e.values[k] * t));
    return e.vectors * d * e.vectors.adjoint();
}

// ---------------------------------------------------------------------------
// Principal logarithm of a unitary: returns Hermitian A with u = exp(i A) and
// every eigenphase in (-pi, pi]. Eigenvalues exactly on the negative real
// axis take phase +pi; phases that land just below the cut (within 1e-9 of
// -pi) are rejected as branch-ambiguous so callers can perturb their input.
//
// A unitary is normal, so it is diagonalized by the eigenbasis of a generic
// real combination a*(u+u^+)/2 + b*(u-u^+)/(2i) of its Hermitian and
// anti-Hermitian parts. A few fixed (a, b) pairs are tried and the candidate
// basis is verified against u directly; degenerate u-eigenvalues are safe
// because any orthonormal basis of a shared eigenspace is acceptable.
template <int N>
inline Matrix<N> unitary_log(const Matrix<N>& u, double unit_tol = 1e-10) {
    require_unitary(u, unit_tol);
    const Matrix<N> hre = cplx(0.5, 0.0) * (u + u.adjoint());
    const Matrix<N> him = cplx(0.0, -0.5) * (u - u.adjoint());

    constexpr double combos[][2] = {{0.9510565163, 0.3090169944}, {0.3090169944, -0.9510565163},
                                    {0.7071067812, 0.7071067812}, {1.0, 0.0},
                                    {0.0, 1.0},                   {-0.2800000000, 0.9600000000},
                                    {0.6000000000, -0.8000000000}};

    for (const auto& ab : combos) {
        const Matrix<N> mixed = cplx(ab[0], 0.0) * hre + cplx(ab[1], 0.0) * him;
        const EigResult<N> e = hermitian_eig(mixed, 1e-9);

        std::array<double, N> phases{};
        bool ok = true;
        for (int k = 0; k < N && ok; ++k) {
            std::array<cplx, N> vk{};
            for (int r = 0; r < N; ++r) vk[r] = e.vectors(r, k);
            const std::array<cplx, N> uv = u.apply(vk);
            cplx lambda = 0.0;  // Rayleigh quotient v^+ u v
            for (int r = 0; r < N; ++r) lambda += std::conj(vk[r]) * uv[r];
            double resid = 0.0;
            for (int r = 0; r < N; ++r) resid = std::max(resid, std::abs(uv[r] - lambda * vk[r]));
            if (resid > 1e-9) {
                ok = false;
                break;
            }
            double ph = std::atan2(lambda.imag(), lambda.real());
            if (ph <= -kPi + 1e-12) ph = kPi;  // the cut itself belongs to +pi
            else if (ph < -kPi + 1e-9)
                throw branch_cut_error(
                    "unitary eigenphase within 1e-9 of the principal branch cut at -pi; "
                    "perturb the input phases");
            phases[k] = ph;
        }
        if (!ok) continue;

        Matrix<N> log_a;
        for (int k = 0; k < N; ++k) {
            std::array<cplx, N> vk{};
            for (int r = 0; r < N; ++r) vk[r] = e.vectors(r, k);
            for (int r = 0; r < N; ++r)
                for (int c = 0; c < N; ++c) log_a(r, c) += phases[k] * vk[r] * std::conj(vk[c]);
        }
        log_a = cplx(0.5, 0.0) * (log_a + log_a.adjoint());
        return log_a;
    }
    throw numeric_error("unitary eigendecomposition did not converge for any mixing choice");
}

// For density-matrix comparisons: 1/2 * sum |eig(x - y)|.
inline double trace_distance(const Mat2& x, const Mat2& y, double herm_tol = 1e-9) {
    const EigResult<2> e = hermitian_eig(x - y, herm_tol);
    return 0.5 * (std::abs(e.values[0]) + std::abs(e.values[1]));
}

// ---------------------------------------------------------------------------
// Real 3-vectors and rotations (Bloch and angular-momentum work).

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
    friend Vec3 operator*(const Vec3& v, double s) { return s * v; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double max_abs_diff(const Vec3& a, const Vec3& b) {
    const Vec3 d = a - b;
    return std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z)});
}

// Rodrigues rotation of v about the unit axis n by angle (right-handed).
inline Vec3 rotate_about(const Vec3& v, const Vec3& n, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return c * v + s * cross(n, v) + (1.0 - c) * dot(n, v) * n;
}

// Counterclockwise rotation about +z by angle.
inline Vec3 rotate_z(const Vec3& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

}  // namespace deh
