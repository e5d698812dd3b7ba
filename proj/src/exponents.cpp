#include "tricomi/exponents.hpp"

#include "tricomi/errors.hpp"

#include <cmath>
#include <string>

namespace tricomi::exponents {

namespace {

void check(const ExponentContext& ctx)
{
    if (!(ctx.m >= 0.0) || !std::isfinite(ctx.m)) {
        throw DomainError("exponents: m must be nonnegative");
    }
    if (ctx.n < 1) {
        throw DomainError("exponents: n must be a positive integer");
    }
    if (!(ctx.p > 1.0) || !std::isfinite(ctx.p)) {
        throw DomainError("exponents: p must exceed 1, got " + std::to_string(ctx.p));
    }
}

struct Quadratic {
    double a; // p^2 coefficient
    double b;
    double c;
};

Quadratic gamma_coefficients(double m, int n)
{
    const double h = 0.5 * n;
    return {-((m + 2.0) * h - 1.0), -((m + 2.0) * (1.0 - h) - 3.0), m + 2.0};
}

} // namespace

double gamma_mnp(const ExponentContext& ctx)
{
    check(ctx);
    const Quadratic q = gamma_coefficients(ctx.m, ctx.n);
    return (q.a * ctx.p + q.b) * ctx.p + q.c;
}

double p_crit(double m, int n)
{
    if (!(m >= 0.0) || n < 1) {
        throw DomainError("p_crit: requires m >= 0 and n >= 1");
    }
    const Quadratic q = gamma_coefficients(m, n);
    if (q.a == 0.0) {
        throw DomainError("p_crit: leading coefficient vanishes (m = 0, n = 1); no finite critical exponent");
    }
    // a < 0 and c > 0, so the roots have opposite signs. Pick the
    // cancellation-free pair: r1 = -(b + sgn(b) sqrt(D)) / (2a), r2 = c / (a r1).
    const double disc = q.b * q.b - 4.0 * q.a * q.c;
    const double sq = std::sqrt(disc);
    const double w = -0.5 * (q.b + std::copysign(sq, q.b));
    const double r1 = w / q.a;
    const double r2 = q.c / w;
    return r1 > 0.0 ? r1 : r2;
}

double strauss_exponent(int n)
{
    if (n < 2) {
        throw DomainError("strauss_exponent: requires n >= 2");
    }
    const double nn = n;
    return (nn + 1.0 + std::sqrt(nn * nn + 10.0 * nn - 7.0)) / (2.0 * (nn - 1.0));
}

IterationExponents iteration_exponents(const ExponentContext& ctx)
{
    check(ctx);
    const double m = ctx.m;
    const double n = ctx.n;
    const double p = ctx.p;
    IterationExponents e;
    e.mu = 0.5 * m * n;
    e.a1 = e.mu + (n + e.mu - 1.0) * 0.5 * p;
    e.b1 = 0.5 * (m + 2.0) * (n - 1.0) + e.mu + 2.0;
    e.alpha_it = e.a1 + 0.5 * (m + 2.0) * n + e.mu / (p - 1.0);
    e.beta_it = e.b1 + (e.mu + 2.0) / (p - 1.0);
    return e;
}

double frame_q(const ExponentContext& ctx)
{
    check(ctx);
    return 0.5 * (ctx.n - 1.0) - 1.0 / ctx.p;
}

CriticalResiduals critical_identities(const ExponentContext& ctx)
{
    check(ctx);
    const double m = ctx.m;
    const double n = ctx.n;
    const double p = ctx.p;
    const double k = (m + 4.0) / (2.0 * (m + 2.0));
    const double q = frame_q(ctx);
    CriticalResiduals r;
    r.frame = 0.25 * m * p + (1.0 - 1.0 / p + 0.5 * (n - 1.0) * (p - 1.0) - k) * 0.5 * (m + 2.0) - 1.0;
    r.initiate = -0.5 * p + (q + 0.5 * n * p - (n - 1.0) + 1.0 - k) * 0.5 * (m + 2.0) - 1.0;
    return r;
}

Regime classify(const ExponentContext& ctx, double tol)
{
    const double g = gamma_mnp(ctx);
    if (std::abs(g) <= tol) {
        return Regime::Critical;
    }
    return g > 0.0 ? Regime::Subcritical : Regime::Supercritical;
}

const char* to_string(Regime regime)
{
    switch (regime) {
    case Regime::Subcritical: return "subcritical";
    case Regime::Critical: return "critical";
    case Regime::Supercritical: return "supercritical";
    }
    return "unknown";
}

double subcritical_lifespan_exponent(const ExponentContext& ctx)
{
    return 2.0 * ctx.p * (ctx.p - 1.0) / gamma_mnp(ctx);
}

double lifespan_prediction(const ExponentContext& ctx, double eps, double constant)
{
    if (!(eps > 0.0) || !(constant > 0.0)) {
        throw DomainError("lifespan_prediction: eps and constant must be positive");
    }
    switch (classify(ctx)) {
    case Regime::Subcritical: return constant * std::pow(eps, -subcritical_lifespan_exponent(ctx));
    case Regime::Critical: return std::exp(constant * std::pow(eps, -ctx.p * (ctx.p - 1.0)));
    case Regime::Supercritical: break;
    }
    throw ScopeError("lifespan_prediction: p exceeds p_crit(m,n); no blow-up theorem applies");
}

} // namespace tricomi::exponents
