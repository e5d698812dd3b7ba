#include "tricomi/specfun.hpp"

#include "tricomi/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace tricomi::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Regime boundaries on |z| for z < 0.
constexpr double kSeriesLimit = 30.0;
constexpr double kAsymptoticLimit = 40.0;
// Largest |z| for which the Taylor sums stay below DBL_MAX.
constexpr double kSeriesOverflow = 690.0;
constexpr int kMaxTerms = 40000;

double lgamma_signed(double x, int& sign)
{
    return ::lgamma_r(x, &sign);
}

} // namespace

const char* to_string(KummerRegime regime)
{
    switch (regime) {
    case KummerRegime::Identity: return "identity";
    case KummerRegime::Series: return "series";
    case KummerRegime::KummerSeries: return "kummer-series";
    case KummerRegime::Asymptotic: return "asymptotic";
    }
    return "unknown";
}

namespace detail {

bool is_nonpositive_integer(double x)
{
    return x <= 0.0 && std::floor(x) == x;
}

double gamma_ratio(double x, double y)
{
    if (is_nonpositive_integer(y)) {
        return 0.0;
    }
    if (is_nonpositive_integer(x)) {
        return kInf;
    }
    if (std::abs(x) < 160.0 && std::abs(y) < 160.0) {
        return std::tgamma(x) / std::tgamma(y);
    }
    int sx = 1;
    int sy = 1;
    const double lx = lgamma_signed(x, sx);
    const double ly = lgamma_signed(y, sy);
    return static_cast<double>(sx * sy) * std::exp(lx - ly);
}

KummerValue taylor_series(double a, double b, double z)
{
    double term = 1.0;
    double sum = 1.0;
    double abs_sum = 1.0;
    for (int k = 0; k < kMaxTerms; ++k) {
        const double ratio = (a + k) / (b + k) * z / (k + 1);
        term *= ratio;
        sum += term;
        abs_sum += std::abs(term);
        if (term == 0.0) {
            break;
        }
        if (std::abs(ratio) < 0.5 && std::abs(term) <= 1e-17 * std::abs(sum)) {
            break;
        }
        if (k == kMaxTerms - 1) {
            throw NumericalError("kummer_m: Taylor series did not converge at z = " + std::to_string(z));
        }
    }
    const double rel = sum == 0.0 ? kInf : 4.0 * kEps * abs_sum / std::abs(sum);
    return {sum, KummerRegime::Series, rel};
}

KummerValue kummer_series(double a, double b, double z)
{
    KummerValue inner = taylor_series(b - a, b, -z);
    inner.value *= std::exp(z);
    inner.rel_error += 2.0 * kEps;
    inner.regime = KummerRegime::KummerSeries;
    return inner;
}

KummerValue asymptotic_negative(double a, double b, double z)
{
    const double x = -z;
    const double lead_ratio = gamma_ratio(b, b - a);
    if (lead_ratio == 0.0 || x <= 0.0) {
        return {0.0, KummerRegime::Asymptotic, kInf};
    }
    double term = 1.0;
    double sum = 1.0;
    double omitted = 0.0;
    for (int s = 0; s < 400; ++s) {
        const double next = term * (a + s) * (a - b + 1.0 + s) / ((s + 1.0) * x);
        if (next == 0.0) {
            omitted = 0.0;
            break;
        }
        if (std::abs(next) >= std::abs(term)) {
            omitted = std::abs(next);
            break;
        }
        term = next;
        sum += term;
        omitted = std::abs(term);
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            break;
        }
    }
    const double lead = lead_ratio * std::pow(x, -a);
    const double value = lead * sum;
    // Recessive part Gamma(b)/Gamma(a) e^{-x} x^{a-b}, dropped from the sum.
    double recessive = 0.0;
    if (!is_nonpositive_integer(a)) {
        recessive = std::abs(gamma_ratio(b, a)) * std::exp(-x + (a - b) * std::log(x));
    }
    const double rel = omitted / std::abs(sum) + recessive / std::abs(value) + 8.0 * kEps;
    return {value, KummerRegime::Asymptotic, rel};
}

KummerValue asymptotic_positive(double a, double b, double z)
{
    if (is_nonpositive_integer(a) || z <= 0.0) {
        return {0.0, KummerRegime::Asymptotic, kInf};
    }
    double term = 1.0;
    double sum = 1.0;
    double omitted = 0.0;
    for (int s = 0; s < 400; ++s) {
        const double next = term * (1.0 - a + s) * (b - a + s) / ((s + 1.0) * z);
        if (next == 0.0) {
            omitted = 0.0;
            break;
        }
        if (std::abs(next) >= std::abs(term)) {
            omitted = std::abs(next);
            break;
        }
        term = next;
        sum += term;
        omitted = std::abs(term);
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            break;
        }
    }
    int sb = 1;
    int sa = 1;
    const double log_pref = lgamma_signed(b, sb) - lgamma_signed(a, sa) + z + (a - b) * std::log(z);
    const double value = static_cast<double>(sa * sb) * std::exp(log_pref) * sum;
    return {value, KummerRegime::Asymptotic, omitted / std::abs(sum) + 8.0 * kEps};
}

} // namespace detail

KummerValue kummer_m_eval(double a, double b, double z)
{
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(z)) {
        throw DomainError("kummer_m: non-finite argument");
    }
    if (a == b) {
        return {std::exp(z), KummerRegime::Identity, kEps};
    }
    if (detail::is_nonpositive_integer(b)) {
        throw DomainError("kummer_m: b = " + std::to_string(b) + " is a non-positive integer and a != b");
    }
    if (z == 0.0 || a == 0.0) {
        return {1.0, KummerRegime::Identity, 0.0};
    }
    if (z > 0.0) {
        if (z <= 600.0) {
            return detail::taylor_series(a, b, z);
        }
        return detail::asymptotic_positive(a, b, z);
    }

    const double x = -z;
    if (detail::is_nonpositive_integer(b - a) || x <= kSeriesLimit) {
        return detail::kummer_series(a, b, z);
    }
    const KummerValue asy = detail::asymptotic_negative(a, b, z);
    if (x >= kAsymptoticLimit && (asy.rel_error <= 1e-14 || x > kSeriesOverflow)) {
        return asy;
    }
    const KummerValue ser = detail::kummer_series(a, b, z);
    return ser.rel_error <= asy.rel_error ? ser : asy;
}

double kummer_m_deriv(double a, double b, double z)
{
    if (a == b) {
        return kummer_m_eval(a, b, z).value;
    }
    if (detail::is_nonpositive_integer(b)) {
        throw DomainError("kummer_m_deriv: b = " + std::to_string(b) + " is a non-positive integer and a != b");
    }
    if (a == 0.0) {
        return 0.0;
    }
    return a / b * kummer_m(a + 1.0, b + 1.0, z);
}

double sphere_measure(int n)
{
    if (n < 1) {
        throw DomainError("sphere_measure: dimension must be positive");
    }
    const double half = 0.5 * n;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double varphi_scaled(int n, double r)
{
    if (n < 1) {
        throw DomainError("varphi: dimension must be positive, got " + std::to_string(n));
    }
    if (!(r >= 0.0)) {
        throw DomainError("varphi: radius must be nonnegative");
    }
    if (n == 1) {
        return 1.0 + std::exp(-2.0 * r);
    }
    if (n == 3) {
        // 4 pi e^{-r} sinh(r) / r
        const double tail = r < 1e-8 ? 1.0 - r : -std::expm1(-2.0 * r) / (2.0 * r);
        return 4.0 * std::numbers::pi * tail;
    }
    // e^{-r} varphi(r) = |S^{n-1}| M(nu + 1/2, 2 nu + 1; -2r), nu = n/2 - 1.
    const double nu = 0.5 * n - 1.0;
    return sphere_measure(n) * kummer_m(nu + 0.5, 2.0 * nu + 1.0, -2.0 * r);
}

double varphi(int n, double r)
{
    if (n == 1 && r >= 0.0) {
        return 2.0 * std::cosh(r);
    }
    if (n == 3 && r >= 0.0 && r < 1e-4) {
        return 4.0 * std::numbers::pi * (1.0 + r * r / 6.0);
    }
    if (n == 3 && r >= 0.0 && r < 700.0) {
        return 4.0 * std::numbers::pi * std::sinh(r) / r;
    }
    return std::exp(r) * varphi_scaled(n, r);
}

double log_gamma(double x)
{
    if (!(x > 0.0)) {
        throw DomainError("log_gamma: argument must be positive");
    }
    int sign = 1;
    return lgamma_signed(x, sign);
}

} // namespace tricomi::specfun
