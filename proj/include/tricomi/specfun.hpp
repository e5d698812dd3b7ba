#pragma once

// Confluent hypergeometric function M(a,b;z), the radial eigenfunction of the
// Laplacian and a log-gamma wrapper. Only real arguments are supported.

namespace tricomi::specfun {

enum class KummerRegime {
    Identity,     // closed form (a == b, a == 0 or z == 0)
    Series,       // Taylor series at z
    KummerSeries, // e^z * Taylor series of M(b-a, b; -z)
    Asymptotic,   // large-|z| expansion
};

const char* to_string(KummerRegime regime);

struct KummerValue {
    double value = 0.0;
    KummerRegime regime = KummerRegime::Identity;
    /// Relative error estimate reported by the regime that produced value.
    double rel_error = 0.0;
};

/// M(a,b;z) together with the evaluation regime used.
/// Throws DomainError if b is a non-positive integer and a != b.
KummerValue kummer_m_eval(double a, double b, double z);

inline double kummer_m(double a, double b, double z) { return kummer_m_eval(a, b, z).value; }

/// dM/dz = (a/b) M(a+1, b+1; z).
double kummer_m_deriv(double a, double b, double z);

/// The spatial test kernel: e^r + e^-r for n = 1, the sphere integral
/// of e^{x.w} over S^{n-1} at |x| = r for n >= 2.
double varphi(int n, double r);

/// e^{-r} * varphi(n, r); bounded for all r, used inside quadratures.
double varphi_scaled(int n, double r);

/// Surface measure of the unit sphere S^{n-1} (2 for n = 1).
double sphere_measure(int n);

double log_gamma(double x);

namespace detail {

// Individual evaluation regimes, exposed so that tests can compare them
// against one another on overlapping bands.
KummerValue taylor_series(double a, double b, double z);
KummerValue kummer_series(double a, double b, double z);
KummerValue asymptotic_negative(double a, double b, double z);
KummerValue asymptotic_positive(double a, double b, double z);

/// Gamma(x) / Gamma(y), finite for large arguments. Returns 0 when y is a
/// pole of Gamma.
double gamma_ratio(double x, double y);

bool is_nonpositive_integer(double x);

} // namespace detail

} // namespace tricomi::specfun
