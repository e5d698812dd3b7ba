#pragma once

#include <utility>

// Fundamental system of y'' - lambda^2 t^m y = 0 and the two-point
// solutions Phi1(t,s), Phi2(t,s) normalized at t = s.

namespace tricomi::ode {

struct OdeParams {
    double m = 1.0;      // degeneracy exponent, m >= 0 (m = 0 is the wave case)
    double lambda = 1.0; // frequency, lambda > 0
};

struct FundamentalEval {
    double t = 0.0;
    double v1 = 1.0;
    double dv1 = 0.0;
    double v2 = 0.0;
    double dv2 = 1.0;

    double wronskian() const { return v1 * dv2 - dv1 * v2; }
};

/// A value stored as mantissa * exp(log_scale). Solutions of the ODE grow
/// like exp(lambda phi(t)), which overflows long before the test-function
/// integrands that multiply them by exp(-lambda phi(t)).
struct Scaled {
    double mantissa = 0.0;
    double log_scale = 0.0;

    double value() const;
};

/// phi(t) = 2/(m+2) t^{(m+2)/2}, the radius of the propagation cone.
double phi_of_t(double m, double t);

/// Inverse of phi_of_t on [0, inf).
double phi_inverse(double m, double phi);

/// z(t) = -2 lambda phi(t) <= 0.
double z_of_t(const OdeParams& params, double t);

/// V1, V2 and their time derivatives at t. Entries overflow to inf once
/// lambda * phi(t) exceeds ~700; use the scaled forms beyond that.
FundamentalEval fundamental_pair(const OdeParams& params, double t);

/// V1 = exp(lambda phi(t)) * g with g = M(alpha, gamma_K; z(t)).
struct GrowingSolution {
    double log_scale = 0.0; // lambda phi(t)
    double g = 1.0;
    double log_deriv = 0.0; // V1'(t) / V1(t)
};

GrowingSolution growing_solution(const OdeParams& params, double t);

Scaled phi1_scaled(double t, double s, const OdeParams& params);
Scaled phi2_ratio_scaled(double t, double s, const OdeParams& params);

/// Phi1(t,s): Phi1(s,s) = 1, d/dt Phi1(s,s) = 0. Requires t >= s >= 0.
double phi1(double t, double s, const OdeParams& params);

/// Phi2(t,s): Phi2(s,s) = 0, d/dt Phi2(s,s) = 1. Requires t >= s >= 0.
double phi2(double t, double s, const OdeParams& params);

/// Phi2(t,s) / (t - s), continuous up to and including s = t where it is 1.
double phi2_ratio(double t, double s, const OdeParams& params);

/// J(t,s) = int_s^t exp(-2 lambda (phi(tau) - phi(s))) M(alpha, gamma_K; z(tau))^{-2} d tau,
/// the normalized integral of V1^{-2} behind both two-point solutions.
/// decay_integral picks the closed form unless t - s is tiny.
double decay_integral(double t, double s, const OdeParams& params);
double decay_integral_quadrature(double t, double s, const OdeParams& params);
/// Via the decaying solution sqrt(t) K_{1/(m+2)}(lambda phi(t)).
double decay_integral_closed(double t, double s, const OdeParams& params);

/// Phi1/Phi2 straight from the 2x2 determinants of fundamental_pair values.
/// Loses accuracy like exp(2 lambda phi(s)) * machine epsilon.
double phi1_determinant(double t, double s, const OdeParams& params);
double phi2_determinant(double t, double s, const OdeParams& params);

/// (y, y') at t_end from adaptive Runge-Kutta-Fehlberg 7(8) integration of
/// y'' = lambda^2 t^m y starting at t_start with the given initial values.
/// Throws StiffnessError if the step size underflows.
std::pair<double, double> ode_oracle(const OdeParams& params, double t_end, std::pair<double, double> ic,
                                     double tol = 1e-10, double t_start = 0.0);

} // namespace tricomi::ode
