#include "tricomi/tricomi_ode.hpp"

#include "tricomi/errors.hpp"
#include "tricomi/quadrature.hpp"
#include "tricomi/specfun.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace tricomi::ode {

namespace {

// Below this separation phi2_ratio switches to its Taylor expansion.
constexpr double kRatioSwitch = 1e-6;
// exp(-kCutExponent) is negligible against any mantissa we carry.
constexpr double kCutExponent = 745.0;
// Closed-form decay integral loses about log10(1/(1 - e^{-d})) digits; below
// this d = 2 lambda (phi(t) - phi(s)) quadrature takes over.
constexpr double kClosedFormMinDecay = 0.05;
// Past this argument K_nu is taken from its large-x expansion.
constexpr double kBesselAsymptotic = 600.0;

void check_params(const OdeParams& p)
{
    if (!(p.m >= 0.0) || !std::isfinite(p.m)) {
        throw DomainError("ode: m must be nonnegative, got " + std::to_string(p.m));
    }
    if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
        throw DomainError("ode: lambda must be positive, got " + std::to_string(p.lambda));
    }
}

void check_order(double t, double s)
{
    if (!(s >= 0.0)) {
        throw DomainError("ode: s must be nonnegative");
    }
    if (!(t >= s)) {
        throw DomainError("ode: argument order requires t >= s (t = " + std::to_string(t) +
                          ", s = " + std::to_string(s) + ")");
    }
}

struct KummerParams {
    double alpha;   // m / (2(m+2))
    double gamma_k; // m / (m+2)
};

KummerParams kummer_params(double m)
{
    return {m / (2.0 * (m + 2.0)), m / (m + 2.0)};
}

// dz/dt = -2 lambda t^{m/2}
double dz_dt(const OdeParams& p, double t)
{
    return -2.0 * p.lambda * std::pow(t, 0.5 * p.m);
}

// e^x K_nu(x), x > 0.
double bessel_k_scaled(double nu, double x)
{
    if (x < kBesselAsymptotic) {
        return boost::math::cyl_bessel_k(nu, x) * std::exp(x);
    }
    const double mu4 = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 30; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu4 - odd * odd) / (8.0 * k * x);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) {
            break;
        }
    }
    return std::sqrt(M_PI / (2.0 * x)) * sum;
}

// U(t) e^{lambda phi(t)} with U(t) = sqrt(t) K_nu(lambda phi(t)), nu = 1/(m+2),
// the solution that decays as t -> infinity.
double decaying_scaled(const OdeParams& p, double t)
{
    const double nu = 1.0 / (p.m + 2.0);
    if (t == 0.0) {
        return 0.5 * boost::math::tgamma(nu) * std::pow(p.lambda / (p.m + 2.0), -nu);
    }
    return std::sqrt(t) * bessel_k_scaled(nu, p.lambda * phi_of_t(p.m, t));
}

// |W(V1, U)| = c_V (m+2)/2 with V1 = c_V sqrt(t) I_{-nu}(lambda phi(t)).
double decaying_wronskian(const OdeParams& p)
{
    const double nu = 1.0 / (p.m + 2.0);
    const double c_v = boost::math::tgamma(1.0 - nu) * std::pow(p.lambda / (p.m + 2.0), nu);
    return 0.5 * c_v * (p.m + 2.0);
}

} // namespace

// J(s,t) = int_s^t exp(-2 lambda (phi(tau) - phi(s))) g(tau)^{-2} d tau, so that
// int_s^t V1^{-2} = exp(-2 lambda phi(s)) J.
double decay_integral_quadrature(double t, double s, const OdeParams& p)
{
    if (t == s) {
        return 0.0;
    }
    const double phi_s = phi_of_t(p.m, s);
    const double t_cut = phi_inverse(p.m, phi_s + kCutExponent / (2.0 * p.lambda));
    const double upper = std::min(t, t_cut);
    auto integrand = [&](double tau) {
        const GrowingSolution v = growing_solution(p, tau);
        const double decay = std::exp(-2.0 * (v.log_scale - p.lambda * phi_s));
        return decay / (v.g * v.g);
    };
    const double width = upper - s;
    const std::array<double, 4> cuts{s + 1e-3 * width, s + 1e-2 * width, s + 0.1 * width, s + 0.4 * width};
    return quad::integrate(integrand, s, upper, 1e-13, 0.0, 4000, cuts).value;
}

// Same integral from U/V1: int_s^t V1^{-2} = (U(s)/V1(s) - U(t)/V1(t)) / |W|.
double decay_integral_closed(double t, double s, const OdeParams& p)
{
    const GrowingSolution vs = growing_solution(p, s);
    const GrowingSolution vt = growing_solution(p, t);
    const double decay = std::exp(-2.0 * (vt.log_scale - vs.log_scale));
    const double head = decaying_scaled(p, s) / vs.g;
    const double tail = decay == 0.0 ? 0.0 : decaying_scaled(p, t) / vt.g * decay;
    return (head - tail) / decaying_wronskian(p);
}

double decay_integral(double t, double s, const OdeParams& p)
{
    if (t == s) {
        return 0.0;
    }
    const double d = 2.0 * p.lambda * (phi_of_t(p.m, t) - phi_of_t(p.m, s));
    if (d < kClosedFormMinDecay) {
        return decay_integral_quadrature(t, s, p);
    }
    return decay_integral_closed(t, s, p);
}

double Scaled::value() const
{
    if (mantissa == 0.0) {
        return 0.0;
    }
    return mantissa * std::exp(log_scale);
}

double phi_of_t(double m, double t)
{
    if (!(t >= 0.0)) {
        throw DomainError("phi_of_t: t must be nonnegative, got " + std::to_string(t));
    }
    return 2.0 / (m + 2.0) * std::pow(t, 0.5 * (m + 2.0));
}

double phi_inverse(double m, double phi)
{
    if (!(phi >= 0.0)) {
        throw DomainError("phi_inverse: argument must be nonnegative");
    }
    return std::pow(0.5 * (m + 2.0) * phi, 2.0 / (m + 2.0));
}

double z_of_t(const OdeParams& params, double t)
{
    return -2.0 * params.lambda * phi_of_t(params.m, t);
}

GrowingSolution growing_solution(const OdeParams& p, double t)
{
    check_params(p);
    const double lphi = p.lambda * phi_of_t(p.m, t);
    if (p.m == 0.0) {
        // V1 = cosh(lambda t) = e^{lambda t} (1 + e^{-2 lambda t}) / 2
        const double e2 = std::exp(-2.0 * lphi);
        return {lphi, 0.5 * (1.0 + e2), p.lambda * std::tanh(lphi)};
    }
    const KummerParams k = kummer_params(p.m);
    const double z = -2.0 * lphi;
    const double g = specfun::kummer_m(k.alpha, k.gamma_k, z);
    const double dg = specfun::kummer_m_deriv(k.alpha, k.gamma_k, z);
    return {lphi, g, (dg / g - 0.5) * dz_dt(p, t)};
}

FundamentalEval fundamental_pair(const OdeParams& p, double t)
{
    check_params(p);
    if (!(t >= 0.0)) {
        throw DomainError("fundamental_pair: t must be nonnegative");
    }
    FundamentalEval out;
    out.t = t;
    if (t == 0.0) {
        return out;
    }
    const double z = z_of_t(p, t);
    const double growth = std::exp(-0.5 * z);
    const double zt = dz_dt(p, t);
    const KummerParams k = kummer_params(p.m);

    if (p.m == 0.0) {
        // M(alpha, 2 alpha; z) -> e^{z/2} cosh(z/2) as m -> 0.
        out.v1 = std::cosh(p.lambda * t);
        out.dv1 = p.lambda * std::sinh(p.lambda * t);
    } else {
        const double mv = specfun::kummer_m(k.alpha, k.gamma_k, z);
        const double dmv = specfun::kummer_m_deriv(k.alpha, k.gamma_k, z);
        out.v1 = growth * mv;
        out.dv1 = growth * (dmv - 0.5 * mv) * zt;
    }

    // V2 = e^{-z/2} c_m z^{1-gamma_K} M(...) with c_m z^{1-gamma_K} = t.
    const double a2 = 1.0 + k.alpha - k.gamma_k;
    const double b2 = 2.0 - k.gamma_k;
    const double nv = specfun::kummer_m(a2, b2, z);
    const double dnv = specfun::kummer_m_deriv(a2, b2, z);
    out.v2 = growth * t * nv;
    out.dv2 = growth * (nv + t * (dnv - 0.5 * nv) * zt);
    return out;
}

Scaled phi2_ratio_scaled(double t, double s, const OdeParams& p)
{
    check_params(p);
    check_order(t, s);
    const double h = t - s;
    if (h < kRatioSwitch * std::max(1.0, t)) {
        return {1.0 + p.lambda * p.lambda * std::pow(s, p.m) * h * h / 6.0, 0.0};
    }
    const GrowingSolution vt = growing_solution(p, t);
    const GrowingSolution vs = growing_solution(p, s);
    const double j = decay_integral(t, s, p);
    return {vt.g * vs.g * j / h, vt.log_scale - vs.log_scale};
}

Scaled phi1_scaled(double t, double s, const OdeParams& p)
{
    check_params(p);
    check_order(t, s);
    if (t == s) {
        return {1.0, 0.0};
    }
    const GrowingSolution vt = growing_solution(p, t);
    const GrowingSolution vs = growing_solution(p, s);
    const double j = decay_integral(t, s, p);
    // Phi1 = V1(t)/V1(s) - (V1'(s)/V1(s)) V1(s) V1(t) int_s^t V1^{-2}
    const double mant = vt.g / vs.g - vs.log_deriv * vt.g * vs.g * j;
    return {mant, vt.log_scale - vs.log_scale};
}

double phi1(double t, double s, const OdeParams& params)
{
    return phi1_scaled(t, s, params).value();
}

double phi2(double t, double s, const OdeParams& params)
{
    check_order(t, s);
    if (t == s) {
        return 0.0;
    }
    const Scaled r = phi2_ratio_scaled(t, s, params);
    return r.mantissa * (t - s) * std::exp(r.log_scale);
}

double phi2_ratio(double t, double s, const OdeParams& params)
{
    return phi2_ratio_scaled(t, s, params).value();
}

double phi1_determinant(double t, double s, const OdeParams& params)
{
    check_order(t, s);
    const FundamentalEval ft = fundamental_pair(params, t);
    const FundamentalEval fs = fundamental_pair(params, s);
    return ft.v1 * fs.dv2 - ft.v2 * fs.dv1;
}

double phi2_determinant(double t, double s, const OdeParams& params)
{
    check_order(t, s);
    const FundamentalEval ft = fundamental_pair(params, t);
    const FundamentalEval fs = fundamental_pair(params, s);
    return fs.v1 * ft.v2 - fs.v2 * ft.v1;
}

std::pair<double, double> ode_oracle(const OdeParams& p, double t_end, std::pair<double, double> ic, double tol,
                                     double t_start)
{
    check_params(p);
    if (!(t_end >= t_start) || !(t_start >= 0.0)) {
        throw DomainError("ode_oracle: requires 0 <= t_start <= t_end");
    }
    using State = std::array<double, 2>;
    namespace odeint = boost::numeric::odeint;

    State x{ic.first, ic.second};
    if (t_end == t_start) {
        return ic;
    }
    double t = t_start;
    if (t_start == 0.0) {
        // t^m is not smooth at 0 for fractional m; step off the origin with
        // the Frobenius series sum_k c_k t^{k(m+2)+sigma}, sigma = 0, 1.
        t = std::min(t_end, 0.5 * std::pow(p.lambda, -2.0 / (p.m + 2.0)));
        State y{0.0, 0.0};
        for (int sigma = 0; sigma < 2; ++sigma) {
            const double weight = sigma == 0 ? ic.first : ic.second;
            double c = 1.0;
            double val = 0.0;
            double der = 0.0;
            for (int k = 0; k < 200; ++k) {
                const double e = k * (p.m + 2.0) + sigma;
                if (k > 0) {
                    c *= p.lambda * p.lambda / (e * (e - 1.0));
                }
                const double term = c * std::pow(t, e);
                val += term;
                der += e == 0.0 ? 0.0 : c * e * std::pow(t, e - 1.0);
                if (k > 0 && term < 1e-18 * val) {
                    break;
                }
            }
            y[0] += weight * val;
            y[1] += weight * der;
        }
        x = y;
        if (t == t_end) {
            return {x[0], x[1]};
        }
    }
    const double lam2 = p.lambda * p.lambda;
    auto rhs = [&](const State& y, State& dy, double t) {
        dy[0] = y[1];
        dy[1] = lam2 * std::pow(t, p.m) * y[0];
    };

    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(tol, tol);
    double dt = std::min(1e-3, t_end - t);
    long steps = 0;
    while (t < t_end) {
        if (t + dt > t_end) {
            dt = t_end - t;
        }
        const double t_before = t;
        const auto result = stepper.try_step(rhs, x, t, dt);
        if (result == odeint::fail) {
            if (dt < 1e-14 * std::max(1.0, t_before)) {
                throw StiffnessError("ode_oracle: step size underflow at t = " + std::to_string(t_before));
            }
            continue;
        }
        if (++steps > 50'000'000) {
            throw StiffnessError("ode_oracle: step budget exhausted at t = " + std::to_string(t));
        }
    }
    return {x[0], x[1]};
}

} // namespace tricomi::ode
