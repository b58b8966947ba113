#pragma once

#include <cmath>
#include <stdexcept>

namespace subriem {

/// Truncated first-order expansion a + eps*b with eps^2 = 0. Nesting Dual<Dual<...>>
/// introduces one fresh nilpotent slot per level; depth three is all the gamma
/// machinery ever needs (second-order operators inside one bilinear form).
template <class T>
struct Dual {
    T re{};
    T du{};

    Dual() = default;
    Dual(T r, T d) : re(r), du(d) {}
    explicit Dual(double c) : re(c), du() {}
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual1>;
using Dual3 = Dual<Dual2>;

template <class T>
struct jet_depth {
    static constexpr int value = 0;
};
template <class T>
struct jet_depth<Dual<T>> {
    static constexpr int value = jet_depth<T>::value + 1;
};
template <class T>
inline constexpr int jet_depth_v = jet_depth<T>::value;

constexpr int kMaxJetDepth = 3;

inline double jet_value(double x) { return x; }
template <class T>
double jet_value(const Dual<T>& x) {
    return jet_value(x.re);
}

// --- arithmetic -------------------------------------------------------------

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
    return {a.re + b.re, a.du + b.du};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
    return {a.re - b.re, a.du - b.du};
}
template <class T>
Dual<T> operator-(const Dual<T>& a) {
    return {-a.re, -a.du};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
    return {a.re * b.re, a.re * b.du + a.du * b.re};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    const T q = a.re / b.re;
    return {q, (a.du - q * b.du) / b.re};
}

template <class T>
Dual<T> operator+(const Dual<T>& a, double c) {
    Dual<T> r = a;
    r.re = r.re + T(c);
    return r;
}
template <class T>
Dual<T> operator+(double c, const Dual<T>& a) {
    return a + c;
}
template <class T>
Dual<T> operator-(const Dual<T>& a, double c) {
    return a + (-c);
}
template <class T>
Dual<T> operator-(double c, const Dual<T>& a) {
    return (-a) + c;
}
template <class T>
Dual<T> operator*(const Dual<T>& a, double c) {
    return {a.re * T(c), a.du * T(c)};
}
template <class T>
Dual<T> operator*(double c, const Dual<T>& a) {
    return a * c;
}
template <class T>
Dual<T> operator/(const Dual<T>& a, double c) {
    return a * (1.0 / c);
}
template <class T>
Dual<T> operator/(double c, const Dual<T>& a) {
    return Dual<T>(c) / a;
}

using std::exp;
using std::log;
using std::sqrt;

template <class T>
Dual<T> exp(const Dual<T>& x) {
    const T e = exp(x.re);
    return {e, x.du * e};
}
template <class T>
Dual<T> log(const Dual<T>& x) {
    return {log(x.re), x.du / x.re};
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
    const T s = sqrt(x.re);
    return {s, x.du / (s + s)};
}

inline double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}
template <class T>
Dual<T> ipow(const Dual<T>& x, int n) {
    Dual<T> r(1.0);
    for (int i = 0; i < n; ++i) r = r * x;
    return r;
}

}  // namespace subriem
