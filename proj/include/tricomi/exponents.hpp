#pragma once

// Exponent algebra for u_tt - t^m Lap u = |u|^p.

namespace tricomi::exponents {

struct ExponentContext {
    double m = 1.0; // m >= 0
    int n = 1;      // spatial dimension
    double p = 2.0; // p > 1
};

/// gamma(m,n,p) = -((m+2)n/2 - 1) p^2 - ((m+2)(1 - n/2) - 3) p + (m+2).
double gamma_mnp(const ExponentContext& ctx);

/// Positive root of gamma(m,n,.) = 0. Throws DomainError when the leading
/// coefficient vanishes (m = 0, n = 1: no finite critical exponent).
double p_crit(double m, int n);

/// Strauss exponent (n+1+sqrt(n^2+10n-7)) / (2(n-1)), n >= 2.
double strauss_exponent(int n);

struct IterationExponents {
    double mu = 0.0;         // mn/2
    double a1 = 0.0;         // mu + (n+mu-1) p/2
    double b1 = 0.0;         // (m+2)(n-1)/2 + mu + 2
    double alpha_it = 0.0;   // a1 + (m+2)n/2 + mu/(p-1)
    double beta_it = 0.0;    // b1 + (mu+2)/(p-1)
};

IterationExponents iteration_exponents(const ExponentContext& ctx);

/// Test-function exponent q = (n-1)/2 - 1/p used by the critical frame.
double frame_q(const ExponentContext& ctx);

struct CriticalResiduals {
    double frame = 0.0;    // m p/4 + [1 - 1/p + (n-1)(p-1)/2 - (m+4)/(2(m+2))](m+2)/2 - 1
    double initiate = 0.0; // -p/2 + [q + np/2 - (n-1) + 1 - (m+4)/(2(m+2))](m+2)/2 - 1
};

/// Both exponent identities that close the critical-case estimates; each
/// vanishes exactly when gamma(m,n,p) = 0.
CriticalResiduals critical_identities(const ExponentContext& ctx);

enum class Regime { Subcritical, Critical, Supercritical };

/// |gamma| <= tol is treated as critical.
Regime classify(const ExponentContext& ctx, double tol = 1e-9);

const char* to_string(Regime regime);

/// Lifespan exponent 2p(p-1)/gamma of the subcritical law.
double subcritical_lifespan_exponent(const ExponentContext& ctx);

/// C eps^{-2p(p-1)/gamma} (subcritical) or exp(C eps^{-p(p-1)}) (critical).
/// Throws ScopeError for supercritical p.
double lifespan_prediction(const ExponentContext& ctx, double eps, double constant);

} // namespace tricomi::exponents
