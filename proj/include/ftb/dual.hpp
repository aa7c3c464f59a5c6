#pragma once

#include <cmath>
#include <type_traits>

namespace ftb {

// Forward-mode dual number. Nesting Dual<Dual<...>> d levels deep propagates
// one independent infinitesimal direction per level, so a single evaluation
// of a generic functor yields an exact mixed partial of order d.
template <class T>
struct Dual {
    T a{}; // value
    T b{}; // derivative along this level's seeded direction

    Dual() = default;
    Dual(const T& value) : a(value) {} // NOLINT: implicit lift of a constant
    Dual(const T& value, const T& deriv) : a(value), b(deriv) {}

    Dual& operator+=(const Dual& r) { a += r.a; b += r.b; return *this; }
    Dual& operator-=(const Dual& r) { a -= r.a; b -= r.b; return *this; }
};

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

template <class T> struct dual_depth { static constexpr int value = 0; };
template <class T> struct dual_depth<Dual<T>> { static constexpr int value = 1 + dual_depth<T>::value; };

template <int D> struct nested_dual { using type = Dual<typename nested_dual<D - 1>::type>; };
template <> struct nested_dual<0> { using type = double; };
template <int D> using dual_t = typename nested_dual<D>::type;

inline double standard_part(double x) { return x; }
template <class T> double standard_part(const Dual<T>& x) { return standard_part(x.a); }

template <class T> struct constant_maker { static T make(double v) { return v; } };
template <class T> struct constant_maker<Dual<T>> {
    static Dual<T> make(double v) { return Dual<T>(constant_maker<T>::make(v)); }
};
// T-typed constant with zero derivative parts at every level.
template <class T> T constant_of(double v) { return constant_maker<T>::make(v); }

// --- arithmetic ---------------------------------------------------------

template <class T> Dual<T> operator+(const Dual<T>& l, const Dual<T>& r) { return {l.a + r.a, l.b + r.b}; }
template <class T> Dual<T> operator-(const Dual<T>& l, const Dual<T>& r) { return {l.a - r.a, l.b - r.b}; }
template <class T> Dual<T> operator-(const Dual<T>& x) { return {-x.a, -x.b}; }
template <class T> Dual<T> operator+(const Dual<T>& x) { return x; }

template <class T> Dual<T> operator*(const Dual<T>& l, const Dual<T>& r) {
    return {l.a * r.a, l.a * r.b + l.b * r.a};
}
template <class T> Dual<T> operator/(const Dual<T>& l, const Dual<T>& r) {
    T inv = constant_of<T>(1.0) / r.a;
    T q = l.a * inv;
    return {q, (l.b - q * r.b) * inv};
}

// Mixed ops with plain arithmetic scalars (kept explicit so that overload
// resolution works at every nesting depth without user-side casts).
template <class T, class U> requires std::is_arithmetic_v<U>
Dual<T> operator+(const Dual<T>& l, U r) { return {l.a + constant_of<T>(double(r)), l.b}; }
template <class T, class U> requires std::is_arithmetic_v<U>
Dual<T> operator+(U l, const Dual<T>& r) { return r + l; }
template <class T, class U> requires std::is_arithmetic_v<U>
Dual<T> operator-(const Dual<T>& l, U r) { return {l.a - constant_of<T>(double(r)), l.b}; }
template <class T, class U> requires std::is_arithmetic_v<U>
Dual<T> operator-(U l, const Dual<T>& r) { return {constant_of<T>(double(l)) - r.a, -r.b}; }
template <class T, class U> requires std::is_arithmetic_v<U>
Dual<T> operator*(const Dual<T>& l, U r) { T c = constant_of<T>(double(r)); return {l.a * c, l.b * c}; }
template <class T, class U> requires std::is_arithmetic_v<U>
Dual<T> operator*(U l, const Dual<T>& r) { return r * l; }
template <class T, class U> requires std::is_arithmetic_v<U>
Dual<T> operator/(const Dual<T>& l, U r) { T c = constant_of<T>(1.0 / double(r)); return {l.a * c, l.b * c}; }
template <class T, class U> requires std::is_arithmetic_v<U>
Dual<T> operator/(U l, const Dual<T>& r) { return Dual<T>(constant_of<T>(double(l))) / r; }

// --- elementary functions -----------------------------------------------

using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;

template <class T> Dual<T> sqrt(const Dual<T>& x) {
    T s = sqrt(x.a);
    return {s, x.b / (2.0 * s)};
}
template <class T> Dual<T> exp(const Dual<T>& x) {
    T e = exp(x.a);
    return {e, x.b * e};
}
template <class T> Dual<T> log(const Dual<T>& x) { return {log(x.a), x.b / x.a}; }
template <class T> Dual<T> sin(const Dual<T>& x) { return {sin(x.a), x.b * cos(x.a)}; }
template <class T> Dual<T> cos(const Dual<T>& x) { return {cos(x.a), -x.b * sin(x.a)}; }

template <class T> Dual<T> pow(const Dual<T>& x, double p) {
    using ftb::exp;
    using ftb::log;
    return exp(log(x) * p);
}

} // namespace ftb
