#pragma once

#include <complex>
#include <vector>

namespace h14 {

using cplx = std::complex<double>;

// Polynomial in z and z* truncated at total degree max_degree:
// sum c[j,k] z^j (z*)^k, j + k <= max_degree.
class TruncatedSeries {
public:
    explicit TruncatedSeries(int max_degree = 5);

    static TruncatedSeries z(int max_degree = 5);
    static TruncatedSeries zbar(int max_degree = 5);
    static TruncatedSeries constant(cplx c, int max_degree = 5);

    int max_degree() const { return deg_; }
    cplx coeff(int j, int k) const;
    void set(int j, int k, cplx c);
    void add(int j, int k, cplx c);

    // the homogeneous part of total degree m
    TruncatedSeries degree_part(int m) const;
    bool is_zero(double tol = 0.0) const;
    // lowest total degree with a coefficient above tol, or max_degree + 1
    int order(double tol = 0.0) const;

    TruncatedSeries& operator+=(const TruncatedSeries& o);
    TruncatedSeries& operator-=(const TruncatedSeries& o);
    TruncatedSeries& operator*=(cplx s);
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(TruncatedSeries a, cplx s) { return a *= s; }
    friend TruncatedSeries operator*(cplx s, TruncatedSeries a) { return a *= s; }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

    // The series of conj(f) written in (z, z*): c'[j,k] = conj(c[k,j]).
    TruncatedSeries conjugate() const;

    // this(g, conj g). Needs g(0) = 0.
    TruncatedSeries compose(const TruncatedSeries& g) const;

    TruncatedSeries d_dz() const;
    TruncatedSeries d_dzbar() const;

    // Derivative along the vector field dz/dt = X: g_z X + g_z* conj(X).
    TruncatedSeries lie_derivative(const TruncatedSeries& X) const;

    cplx eval(cplx zv) const;

    double max_abs_diff(const TruncatedSeries& o) const;

private:
    int deg_;
    std::vector<cplx> c_;  // (deg_+1)^2, index j*(deg_+1)+k, zero when j+k > deg_
    std::size_t idx(int j, int k) const { return static_cast<std::size_t>(j * (deg_ + 1) + k); }
};

// exp(L_X) applied to the identity: the time-one map of dz/dt = X, as a series.
// X must vanish to order 2.
TruncatedSeries time_one_map(const TruncatedSeries& X);

}  // namespace h14
