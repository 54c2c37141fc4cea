#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wsteiner {

using Vec = std::vector<double>;

inline Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec scale(const Vec& a, double s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

// a + t*(b-a)
inline Vec lerp(const Vec& a, const Vec& b, double t) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double euclid(const Vec& a) { return std::sqrt(dot(a, a)); }

// Minimizes a unimodal function on [a,b] by golden section. Returns argmin.
template <class F>
double golden_min(F&& f, double a, double b, double tol) {
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Root of f on [a,b] assuming f(a) and f(b) bracket zero.
template <class F>
double bisect_root(F&& f, double a, double b, double tol) {
    double fa = f(a);
    if (fa == 0) return a;
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if (fm == 0) return m;
        if ((fa < 0) == (fm < 0)) { a = m; fa = fm; }
        else b = m;
    }
    return 0.5 * (a + b);
}

namespace detail {
template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
}  // namespace detail

template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 40) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// 8-node Gauss-Legendre rule on [0,1].
struct Gauss8 {
    static constexpr int n = 8;
    static constexpr double node[8] = {
        0.5 - 0.4801449282487682 , 0.5 - 0.3983332387068134,
        0.5 - 0.2627662049581645 , 0.5 - 0.0917173212478249,
        0.5 + 0.0917173212478249 , 0.5 + 0.2627662049581645,
        0.5 + 0.3983332387068134 , 0.5 + 0.4801449282487682};
    static constexpr double weight[8] = {
        0.05061426814518813, 0.11119051722668723, 0.15685332293894364,
        0.18134189168918099, 0.18134189168918099, 0.15685332293894364,
        0.11119051722668723, 0.05061426814518813};
};

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

// Deterministic seeded generator (splitmix64). Named substreams derive from
// the root seed so parallel checks draw independent, reproducible values.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed0_(seed), state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Vec point_in_box(const Vec& lo, const Vec& hi) {
        Vec p(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) p[i] = uniform(lo[i], hi[i]);
        return p;
    }

    Rng stream(std::string_view name) const { return Rng(seed0_ ^ fnv1a(name)); }

    std::uint64_t seed() const { return seed0_; }

private:
    std::uint64_t seed0_;
    std::uint64_t state_;
};

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_slope: need >= 2 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= x.size(); my /= y.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    if (den == 0) throw std::invalid_argument("fit_slope: degenerate abscissae");
    return num / den;
}

// Log-log slope; points with nonpositive entries are skipped.
inline double fit_loglog_exponent(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > 0 && y[i] > 0) { lx.push_back(std::log(x[i])); ly.push_back(std::log(y[i])); }
    return fit_slope(lx, ly);
}

}  // namespace wsteiner
