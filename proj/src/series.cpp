#include "h14/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace h14 {

TruncatedSeries::TruncatedSeries(int max_degree) : deg_(max_degree) {
    if (max_degree < 1 || max_degree > 15) throw std::invalid_argument("TruncatedSeries: max_degree must be in [1, 15]");
    c_.assign(static_cast<std::size_t>((deg_ + 1) * (deg_ + 1)), cplx{});
}

TruncatedSeries TruncatedSeries::z(int max_degree) {
    TruncatedSeries s(max_degree);
    s.set(1, 0, 1.0);
    return s;
}

TruncatedSeries TruncatedSeries::zbar(int max_degree) {
    TruncatedSeries s(max_degree);
    s.set(0, 1, 1.0);
    return s;
}

TruncatedSeries TruncatedSeries::constant(cplx c, int max_degree) {
    TruncatedSeries s(max_degree);
    s.set(0, 0, c);
    return s;
}

cplx TruncatedSeries::coeff(int j, int k) const {
    if (j < 0 || k < 0 || j + k > deg_) return {};
    return c_[idx(j, k)];
}

void TruncatedSeries::set(int j, int k, cplx c) {
    if (j < 0 || k < 0 || j + k > deg_) throw std::out_of_range("TruncatedSeries::set: exponent beyond truncation");
    c_[idx(j, k)] = c;
}

void TruncatedSeries::add(int j, int k, cplx c) {
    if (j + k > deg_) return;
    c_[idx(j, k)] += c;
}

TruncatedSeries TruncatedSeries::degree_part(int m) const {
    TruncatedSeries r(deg_);
    for (int j = 0; j <= m; ++j)
        if (m <= deg_) r.c_[idx(j, m - j)] = c_[idx(j, m - j)];
    return r;
}

bool TruncatedSeries::is_zero(double tol) const {
    return std::all_of(c_.begin(), c_.end(), [tol](cplx v) { return std::abs(v) <= tol; });
}

int TruncatedSeries::order(double tol) const {
    for (int m = 0; m <= deg_; ++m)
        for (int j = 0; j <= m; ++j)
            if (std::abs(c_[idx(j, m - j)]) > tol) return m;
    return deg_ + 1;
}

static void check_same(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.max_degree() != b.max_degree()) throw std::invalid_argument("TruncatedSeries: mismatched truncation");
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
    check_same(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
    check_same(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(cplx s) {
    for (auto& v : c_) v *= s;
    return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_same(a, b);
    const int D = a.max_degree();
    TruncatedSeries r(D);
    for (int j1 = 0; j1 <= D; ++j1)
        for (int k1 = 0; j1 + k1 <= D; ++k1) {
            const cplx x = a.coeff(j1, k1);
            if (x == cplx{}) continue;
            for (int j2 = 0; j1 + k1 + j2 <= D; ++j2)
                for (int k2 = 0; j1 + k1 + j2 + k2 <= D; ++k2) r.add(j1 + j2, k1 + k2, x * b.coeff(j2, k2));
        }
    return r;
}

TruncatedSeries TruncatedSeries::conjugate() const {
    TruncatedSeries r(deg_);
    for (int j = 0; j <= deg_; ++j)
        for (int k = 0; j + k <= deg_; ++k) r.set(j, k, std::conj(coeff(k, j)));
    return r;
}

TruncatedSeries TruncatedSeries::compose(const TruncatedSeries& g) const {
    check_same(*this, g);
    if (std::abs(g.coeff(0, 0)) != 0.0) throw std::invalid_argument("TruncatedSeries::compose: inner series has a constant term");
    const TruncatedSeries gb = g.conjugate();
    // powers g^j and gb^k, built once
    std::vector<TruncatedSeries> gp(deg_ + 1, TruncatedSeries(deg_)), bp(deg_ + 1, TruncatedSeries(deg_));
    gp[0] = constant(1.0, deg_);
    bp[0] = constant(1.0, deg_);
    for (int i = 1; i <= deg_; ++i) {
        gp[i] = gp[i - 1] * g;
        bp[i] = bp[i - 1] * gb;
    }
    TruncatedSeries r(deg_);
    for (int j = 0; j <= deg_; ++j)
        for (int k = 0; j + k <= deg_; ++k) {
            const cplx c = coeff(j, k);
            if (c == cplx{}) continue;
            r += (gp[j] * bp[k]) * c;
        }
    return r;
}

TruncatedSeries TruncatedSeries::d_dz() const {
    TruncatedSeries r(deg_);
    for (int j = 1; j <= deg_; ++j)
        for (int k = 0; j + k <= deg_; ++k) r.set(j - 1, k, static_cast<double>(j) * coeff(j, k));
    return r;
}

TruncatedSeries TruncatedSeries::d_dzbar() const {
    TruncatedSeries r(deg_);
    for (int j = 0; j <= deg_; ++j)
        for (int k = 1; j + k <= deg_; ++k) r.set(j, k - 1, static_cast<double>(k) * coeff(j, k));
    return r;
}

TruncatedSeries TruncatedSeries::lie_derivative(const TruncatedSeries& X) const {
    return d_dz() * X + d_dzbar() * X.conjugate();
}

cplx TruncatedSeries::eval(cplx zv) const {
    const cplx zb = std::conj(zv);
    cplx s{};
    cplx zj = 1.0;
    for (int j = 0; j <= deg_; ++j) {
        cplx t = zj;
        for (int k = 0; j + k <= deg_; ++k) {
            s += coeff(j, k) * t;
            t *= zb;
        }
        zj *= zv;
    }
    return s;
}

double TruncatedSeries::max_abs_diff(const TruncatedSeries& o) const {
    check_same(*this, o);
    double m = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) m = std::max(m, std::abs(c_[i] - o.c_[i]));
    return m;
}

TruncatedSeries time_one_map(const TruncatedSeries& X) {
    const int D = X.max_degree();
    if (X.order() < 2) throw std::invalid_argument("time_one_map: generator must vanish to second order");
    TruncatedSeries result = TruncatedSeries::z(D);
    TruncatedSeries term = TruncatedSeries::z(D);
    // each Lie derivative raises the order by at least one, so D terms suffice
    for (int n = 1; n <= D; ++n) {
        term = term.lie_derivative(X) * cplx(1.0 / n);
        if (term.is_zero()) break;
        result += term;
    }
    return result;
}

}  // namespace h14
