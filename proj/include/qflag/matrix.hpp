#pragma once

#include "common.hpp"
#include "digraph.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qflag {

/// Row-major dense matrix of doubles.
class dense_matrix_t {
public:
    dense_matrix_t() = default;
    dense_matrix_t(index_t rows, index_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols), fill) {}

    static dense_matrix_t identity(index_t n) {
        dense_matrix_t m(n, n);
        for (index_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }

    double& operator()(index_t i, index_t j) { return a_[static_cast<size_t>(i * cols_ + j)]; }
    double operator()(index_t i, index_t j) const { return a_[static_cast<size_t>(i * cols_ + j)]; }

    const std::vector<double>& data() const { return a_; }

    dense_matrix_t transpose() const {
        dense_matrix_t t(cols_, rows_);
        for (index_t i = 0; i < rows_; ++i)
            for (index_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double trace() const {
        double s = 0.0;
        for (index_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
        return s;
    }

    /// Maximum absolute column sum.
    double norm1() const {
        double best = 0.0;
        for (index_t j = 0; j < cols_; ++j) {
            double s = 0.0;
            for (index_t i = 0; i < rows_; ++i) s += std::fabs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    double frobenius() const {
        double s = 0.0;
        for (double x : a_) s += x * x;
        return std::sqrt(s);
    }

    friend dense_matrix_t operator*(const dense_matrix_t& a, const dense_matrix_t& b) {
        if (a.cols_ != b.rows_) throw domain_error("matrix multiply: shape mismatch");
        dense_matrix_t c(a.rows_, b.cols_);
        for (index_t i = 0; i < a.rows_; ++i)
            for (index_t k = 0; k < a.cols_; ++k) {
                double aik = a(i, k);
                if (aik == 0.0) continue;
                for (index_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend dense_matrix_t operator+(const dense_matrix_t& a, const dense_matrix_t& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw domain_error("matrix add: shape mismatch");
        dense_matrix_t c = a;
        for (size_t k = 0; k < c.a_.size(); ++k) c.a_[k] += b.a_[k];
        return c;
    }

    friend dense_matrix_t operator-(const dense_matrix_t& a, const dense_matrix_t& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw domain_error("matrix subtract: shape mismatch");
        dense_matrix_t c = a;
        for (size_t k = 0; k < c.a_.size(); ++k) c.a_[k] -= b.a_[k];
        return c;
    }

    friend dense_matrix_t operator*(double s, const dense_matrix_t& a) {
        dense_matrix_t c = a;
        for (double& x : c.a_) x *= s;
        return c;
    }

private:
    index_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

namespace detail {

/// PA = LU with partial pivoting, in place; perm holds the row permutation.
/// Returns false on a (numerically) singular pivot.
inline bool lu_factor(dense_matrix_t& m, std::vector<index_t>& perm) {
    const index_t n = m.rows();
    perm.resize(static_cast<size_t>(n));
    for (index_t i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    for (index_t k = 0; k < n; ++k) {
        index_t piv = k;
        double best = std::fabs(m(k, k));
        for (index_t i = k + 1; i < n; ++i) {
            double v = std::fabs(m(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best < 1e-300) return false;
        if (piv != k) {
            for (index_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            std::swap(perm[static_cast<size_t>(k)], perm[static_cast<size_t>(piv)]);
        }
        for (index_t i = k + 1; i < n; ++i) {
            double f = m(i, k) / m(k, k);
            m(i, k) = f;
            for (index_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return true;
}

inline std::vector<double> lu_solve_one(const dense_matrix_t& lu, const std::vector<index_t>& perm,
                                        const std::vector<double>& b) {
    const index_t n = lu.rows();
    std::vector<double> x(static_cast<size_t>(n));
    for (index_t i = 0; i < n; ++i) x[static_cast<size_t>(i)] = b[static_cast<size_t>(perm[static_cast<size_t>(i)])];
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= lu(i, j) * x[static_cast<size_t>(j)];
    for (index_t i = n - 1; i >= 0; --i) {
        for (index_t j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= lu(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] /= lu(i, i);
    }
    return x;
}

} // namespace detail

/// Solve A x = b by partial-pivot LU; verifies the residual to 1e-10 (scaled).
inline std::vector<double> solve(const dense_matrix_t& a, const std::vector<double>& b) {
    if (a.rows() != a.cols()) throw domain_error("solve: matrix not square");
    if (static_cast<index_t>(b.size()) != a.rows()) throw domain_error("solve: rhs length mismatch");
    dense_matrix_t lu = a;
    std::vector<index_t> perm;
    if (!detail::lu_factor(lu, perm)) throw numeric_error("solve: singular system");
    std::vector<double> x = detail::lu_solve_one(lu, perm, b);
    double resid = 0.0, scale = 0.0;
    for (index_t i = 0; i < a.rows(); ++i) {
        double r = -b[static_cast<size_t>(i)];
        for (index_t j = 0; j < a.cols(); ++j) r += a(i, j) * x[static_cast<size_t>(j)];
        resid = std::max(resid, std::fabs(r));
        scale = std::max(scale, std::fabs(b[static_cast<size_t>(i)]));
    }
    if (resid > 1e-10 * std::max(1.0, scale))
        throw numeric_error("solve: residual " + std::to_string(resid) + " above tolerance");
    return x;
}

/// Solve A X = B column-wise (shared factorization).
inline dense_matrix_t solve(const dense_matrix_t& a, const dense_matrix_t& b) {
    if (a.rows() != a.cols() || a.rows() != b.rows()) throw domain_error("solve: shape mismatch");
    dense_matrix_t lu = a;
    std::vector<index_t> perm;
    if (!detail::lu_factor(lu, perm)) throw numeric_error("solve: singular system");
    dense_matrix_t x(a.rows(), b.cols());
    std::vector<double> col(static_cast<size_t>(a.rows()));
    for (index_t j = 0; j < b.cols(); ++j) {
        for (index_t i = 0; i < b.rows(); ++i) col[static_cast<size_t>(i)] = b(i, j);
        std::vector<double> xc = detail::lu_solve_one(lu, perm, col);
        for (index_t i = 0; i < a.rows(); ++i) x(i, j) = xc[static_cast<size_t>(i)];
    }
    return x;
}

namespace detail {

inline dense_matrix_t pade_expm(const dense_matrix_t& a, const std::vector<double>& b) {
    const index_t n = a.rows();
    const dense_matrix_t id = dense_matrix_t::identity(n);
    dense_matrix_t a2 = a * a;
    // Even/odd polynomial split: U = A * (odd coefficients), V = even coefficients.
    dense_matrix_t u(n, n), v(n, n);
    dense_matrix_t pow = id; // a^0
    // b is ordered b0..bm; walk powers of a2.
    std::vector<dense_matrix_t> a2k;
    a2k.push_back(id);
    for (size_t k = 1; 2 * k < b.size(); ++k) a2k.push_back(a2k.back() * a2);
    for (size_t k = 0; 2 * k + 1 < b.size(); ++k) u = u + b[2 * k + 1] * a2k[k];
    u = a * u;
    for (size_t k = 0; 2 * k < b.size(); ++k) v = v + b[2 * k] * a2k[k];
    return solve(v - u, v + u);
}

} // namespace detail

/**
 * Matrix exponential: scaling-and-squaring with diagonal Pade approximants
 * (orders 3/5/7/9/13 selected by the 1-norm).
 */
inline dense_matrix_t expm(const dense_matrix_t& m) {
    if (m.rows() != m.cols()) throw domain_error("expm: matrix not square");
    const index_t n = m.rows();
    if (n == 0) return dense_matrix_t(0, 0);
    const double nrm = m.norm1();
    if (!std::isfinite(nrm)) throw numeric_error("expm: non-finite input");

    static const std::vector<double> b3 = {120, 60, 12, 1};
    static const std::vector<double> b5 = {30240, 15120, 3360, 420, 30, 1};
    static const std::vector<double> b7 = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
    static const std::vector<double> b9 = {17643225600., 8821612800., 2075673600., 302702400.,
                                           30270240., 2162160., 110880., 3960., 90., 1.};
    static const std::vector<double> b13 = {64764752532480000., 32382376266240000., 7771770303897600.,
                                            1187353796428800., 129060195264000., 10559470521600.,
                                            670442572800., 33522128640., 1323241920., 40840800.,
                                            960960., 16380., 182., 1.};
    if (nrm <= 1.495585217958292e-2) return detail::pade_expm(m, b3);
    if (nrm <= 2.539398330063230e-1) return detail::pade_expm(m, b5);
    if (nrm <= 9.504178996162932e-1) return detail::pade_expm(m, b7);
    if (nrm <= 2.097847961257068) return detail::pade_expm(m, b9);

    const double theta13 = 5.371920351148152;
    int s = 0;
    double scaled = nrm;
    while (scaled > theta13) { scaled *= 0.5; ++s; }
    dense_matrix_t a = std::ldexp(1.0, -s) * m;
    dense_matrix_t e = detail::pade_expm(a, b13);
    for (int k = 0; k < s; ++k) e = e * e;
    for (double x : e.data())
        if (!std::isfinite(x)) throw numeric_error("expm: overflow in squaring phase");
    return e;
}

/**
 * Singular values: square roots of the eigenvalues of M^T M, computed by
 * cyclic Jacobi with threshold 1e-10, returned in descending order.
 */
inline std::vector<double> singular_values(const dense_matrix_t& m) {
    const index_t n = m.cols();
    if (n == 0) return {};
    dense_matrix_t b = m.transpose() * m;
    const double tol = 1e-10 * std::max(1.0, b.frobenius());
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (index_t p = 0; p < n; ++p)
            for (index_t q = p + 1; q < n; ++q) off += 2.0 * b(p, q) * b(p, q);
        if (std::sqrt(off) <= tol) break;
        for (index_t p = 0; p < n; ++p)
            for (index_t q = p + 1; q < n; ++q) {
                if (std::fabs(b(p, q)) <= tol / (static_cast<double>(n) * static_cast<double>(n))) continue;
                const double theta = (b(q, q) - b(p, p)) / (2.0 * b(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (index_t k = 0; k < n; ++k) {
                    double bkp = b(k, p), bkq = b(k, q);
                    b(k, p) = c * bkp - s * bkq;
                    b(k, q) = s * bkp + c * bkq;
                }
                for (index_t k = 0; k < n; ++k) {
                    double bpk = b(p, k), bqk = b(q, k);
                    b(p, k) = c * bpk - s * bqk;
                    b(q, k) = s * bpk + c * bqk;
                }
            }
    }
    std::vector<double> sv(static_cast<size_t>(n));
    for (index_t i = 0; i < n; ++i) sv[static_cast<size_t>(i)] = std::sqrt(std::max(0.0, b(i, i)));
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

struct eigenpair_t {
    double value = 0.0;
    std::vector<double> vector;
    int iterations = 0;
};

/**
 * Dominant eigenpair of an entrywise-nonnegative matrix by power iteration on
 * M + I (the shift damps rotational spectra); reports the unshifted value.
 * side = left iterates on the transpose.
 */
inline eigenpair_t dominant_eigenpair(const dense_matrix_t& m, bool left = false) {
    if (m.rows() != m.cols()) throw domain_error("dominant_eigenpair: matrix not square");
    const index_t n = m.rows();
    if (n == 0) return {};
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j)
            if (m(i, j) < 0.0) throw domain_error("dominant_eigenpair: negative entry");

    const dense_matrix_t w = left ? m.transpose() : m;
    std::vector<double> v(static_cast<size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> next(static_cast<size_t>(n));
    const int max_iter = 10000;
    const double tol = 1e-10;
    double diff = 0.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        for (index_t i = 0; i < n; ++i) {
            double s = v[static_cast<size_t>(i)]; // +I shift
            for (index_t j = 0; j < n; ++j) s += w(i, j) * v[static_cast<size_t>(j)];
            next[static_cast<size_t>(i)] = s;
        }
        double nrm = 0.0;
        for (double x : next) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) throw numeric_error("dominant_eigenpair: iterate vanished");
        for (double& x : next) x /= nrm;
        diff = 0.0;
        for (index_t i = 0; i < n; ++i) diff = std::max(diff, std::fabs(next[static_cast<size_t>(i)] - v[static_cast<size_t>(i)]));
        v.swap(next);
        if (diff < tol) break;
    }
    if (diff >= tol)
        throw numeric_error("dominant_eigenpair: no convergence in 10000 iterations, residual " + std::to_string(diff));

    double lambda_shifted = 0.0;
    for (index_t i = 0; i < n; ++i) {
        double s = v[static_cast<size_t>(i)];
        for (index_t j = 0; j < n; ++j) s += w(i, j) * v[static_cast<size_t>(j)];
        lambda_shifted += v[static_cast<size_t>(i)] * s;
    }
    eigenpair_t out;
    out.value = lambda_shifted - 1.0;
    if (std::fabs(out.value) < 1e-12) out.value = 0.0;
    for (double& x : v) x = std::max(0.0, x);
    out.vector = std::move(v);
    out.iterations = it + 1;
    return out;
}

/**
 * Katz solve: out side solves (I - alpha M) x = 1; in side solves the
 * transposed system (row sums of the resolvent).
 */
inline std::vector<double> katz_solve(const dense_matrix_t& m, double alpha, bool in_side) {
    if (m.rows() != m.cols()) throw domain_error("katz_solve: matrix not square");
    const index_t n = m.rows();
    dense_matrix_t sys(n, n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) {
            double entry = in_side ? m(j, i) : m(i, j);
            sys(i, j) = (i == j ? 1.0 : 0.0) - alpha * entry;
        }
    return solve(sys, std::vector<double>(static_cast<size_t>(n), 1.0));
}

/// 0/1 (or weighted) adjacency matrix of a digraph; diagonal 0.
inline dense_matrix_t adjacency_matrix(const digraph_t& g) {
    dense_matrix_t m(g.n_vertices(), g.n_vertices());
    for (auto [u, v] : g.arc_list()) m(u, v) = 1.0;
    return m;
}

inline dense_matrix_t adjacency_matrix(const weighted_digraph_t& g) {
    dense_matrix_t m(g.base().n_vertices(), g.base().n_vertices());
    for (auto [u, v] : g.base().arc_list()) m(u, v) = g.weight(u, v);
    return m;
}

} // namespace qflag
