#include "tricomi/tricomi.h"

#include "tricomi/errors.hpp"
#include "tricomi/exponents.hpp"
#include "tricomi/iteration.hpp"
#include "tricomi/lifespan.hpp"
#include "tricomi/pde_solver.hpp"
#include "tricomi/specfun.hpp"
#include "tricomi/testfun.hpp"
#include "tricomi/tricomi_ode.hpp"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <sstream>
#include <string>
#include <vector>

using namespace tricomi;

struct tricomi_bound_report {
    testfun::BoundReport report;
};

struct tricomi_subcritical {
    iteration::SubcriticalSequences seq;
};

struct tricomi_critical {
    iteration::CriticalSequences seq;
};

struct tricomi_solver {
    pde::RunConfig cfg;
    pde::SolverState state;
};

struct tricomi_run {
    pde::RunConfig cfg;
    pde::RunResult result;
};

struct tricomi_scan {
    lifespan::ScanResult scan;
};

namespace {

thread_local std::string g_last_error;

tricomi_status fail(tricomi_status status, const std::string& message)
{
    g_last_error = message;
    return status;
}

template <typename F>
tricomi_status guarded(F&& body)
{
    g_last_error.clear();
    try {
        body();
        return TRICOMI_OK;
    } catch (const DomainError& e) {
        return fail(TRICOMI_ERR_DOMAIN, e.what());
    } catch (const ScopeError& e) {
        return fail(TRICOMI_ERR_SCOPE, e.what());
    } catch (const ConfigError& e) {
        return fail(TRICOMI_ERR_CONFIG, e.what());
    } catch (const NumericalError& e) {
        return fail(TRICOMI_ERR_NUMERICAL, e.what());
    } catch (const FitError& e) {
        return fail(TRICOMI_ERR_FIT, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(TRICOMI_ERR_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(TRICOMI_ERR_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(TRICOMI_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(TRICOMI_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(TRICOMI_ERR_INTERNAL, "unknown exception");
    }
}

template <typename T>
void need(const T* ptr, const char* name)
{
    if (ptr == nullptr) {
        throw std::invalid_argument(std::string(name) + " must not be null");
    }
}

void copy_name(char (&dst)[8], const char* src)
{
    std::strncpy(dst, src, sizeof dst - 1);
    dst[sizeof dst - 1] = '\0';
}

ode::OdeParams ode_params(double m, double lambda)
{
    return ode::OdeParams{m, lambda};
}

exponents::ExponentContext context(const tricomi_context* ctx)
{
    need(ctx, "ctx");
    return exponents::ExponentContext{ctx->m, ctx->n, ctx->p};
}

testfun::TestFnParams testfn(const tricomi_testfn_params* p)
{
    need(p, "params");
    testfun::TestFnParams out;
    out.q = p->q;
    out.lambda0 = p->lambda0;
    out.R = p->R;
    out.n = p->n;
    out.m = p->m;
    return out;
}

testfun::GridSpec grid_spec(const tricomi_grid_spec* g)
{
    need(g, "grid");
    testfun::GridSpec out;
    out.t_min = g->t_min;
    out.t_max = g->t_max;
    out.t_first = g->t_first;
    out.t_points = g->t_points;
    out.x_points = g->x_points;
    out.s_points = g->s_points;
    return out;
}

std::vector<testfun::Part> parse_parts(const char* parts)
{
    std::vector<testfun::Part> out;
    if (parts == nullptr || *parts == '\0') {
        return {testfun::Part::XiLower, testfun::Part::EtaLower, testfun::Part::EtaSlice,
                testfun::Part::EtaDiagonal};
    }
    std::stringstream ss(parts);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) {
            continue;
        }
        out.push_back(testfun::part_from_string(item.substr(b, e - b + 1)));
    }
    if (out.empty()) {
        throw ConfigError("empty part list");
    }
    return out;
}

void fill_summary(const testfun::PartSummary& s, tricomi_part_summary* out)
{
    copy_name(out->part, testfun::to_string(s.part));
    out->lower = s.lower ? 1 : 0;
    out->constant = s.constant;
    out->points = s.points;
    out->excluded = s.excluded;
    out->ok = s.ok ? 1 : 0;
}

iteration::CriticalConstants critical_constants(const tricomi_critical_constants* c)
{
    iteration::CriticalConstants out;
    if (c != nullptr) {
        out.C = c->C;
        out.C0 = c->C0;
        out.B1 = c->B1;
        out.N_denominator = c->N_denominator;
    }
    return out;
}

pde::RunConfig run_config(const tricomi_run_config* c)
{
    need(c, "cfg");
    pde::RunConfig out;
    out.model = pde::ModelParams{c->m, c->n, c->p, c->R, c->eps};
    out.dx = c->dx;
    out.domain_radius = c->domain_radius;
    out.t_max = c->t_max;
    out.cfl = c->cfl;
    out.blowup_threshold = c->blowup_threshold;
    out.confirm_threshold = c->confirm_threshold;
    if (c->profile != TRICOMI_PROFILE_BUMP4 && c->profile != TRICOMI_PROFILE_SMOOTH) {
        throw ConfigError("unknown profile id " + std::to_string(c->profile));
    }
    out.profile = c->profile == TRICOMI_PROFILE_SMOOTH ? pde::Profile::Smooth : pde::Profile::Bump4;
    out.u1_scale = c->u1_scale;
    out.nonlinear = c->nonlinear != 0;
    out.support_tol = c->support_tol;
    out.f_interval = c->f_interval;
    out.q = c->q;
    out.q_auto = c->q_auto != 0;
    out.lambda0 = c->lambda0;
    out.record_stride = c->record_stride;
    return out;
}

void fill_record(const pde::LifespanRecord& r, tricomi_record* out)
{
    out->eps = r.eps;
    out->T_blowup = r.T_blowup;
    out->T_confirm = r.T_confirm;
    out->censored = r.censored ? 1 : 0;
    out->threshold_consistent = r.threshold_consistent ? 1 : 0;
    out->peak = r.peak;
    out->t_end = r.t_end;
    out->steps = r.steps;
}

void fill_scaling(const iteration::ScalingExtraction& ex, tricomi_scaling_point* points, double* slope,
                  double* theory)
{
    for (size_t k = 0; k < ex.points.size(); ++k) {
        points[k].eps = ex.points[k].eps;
        points[k].log_T = ex.points[k].log_T;
        points[k].log_log_T = ex.points[k].log_log_T;
        points[k].j = ex.points[k].j;
    }
    if (slope != nullptr) {
        *slope = ex.slope;
    }
    if (theory != nullptr) {
        *theory = ex.theory_slope;
    }
}

void fill_crossing(const iteration::ThresholdCrossing& c, tricomi_crossing* out)
{
    out->found = c.found ? 1 : 0;
    out->j = c.j;
    out->t = c.t;
    out->log_t = c.log_t;
}

} // namespace

extern "C" {

const char* tricomi_last_error(void)
{
    return g_last_error.c_str();
}

const char* tricomi_version(void)
{
    return "1.0.0";
}

const char* tricomi_status_name(tricomi_status status)
{
    switch (status) {
    case TRICOMI_OK:
        return "ok";
    case TRICOMI_ERR_DOMAIN:
        return "domain error";
    case TRICOMI_ERR_SCOPE:
        return "scope error";
    case TRICOMI_ERR_CONFIG:
        return "config error";
    case TRICOMI_ERR_NUMERICAL:
        return "numerical error";
    case TRICOMI_ERR_FIT:
        return "fit error";
    case TRICOMI_ERR_ARGUMENT:
        return "invalid argument";
    case TRICOMI_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

// ------------------------------------------------------------------ specfun

tricomi_status tricomi_kummer_m(double a, double b, double z, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = specfun::kummer_m(a, b, z);
    });
}

tricomi_status tricomi_kummer_m_eval(double a, double b, double z, double* value, int* regime, double* rel_error)
{
    return guarded([&] {
        need(value, "value");
        const specfun::KummerValue kv = specfun::kummer_m_eval(a, b, z);
        *value = kv.value;
        if (regime != nullptr) {
            *regime = static_cast<int>(kv.regime);
        }
        if (rel_error != nullptr) {
            *rel_error = kv.rel_error;
        }
    });
}

tricomi_status tricomi_kummer_m_deriv(double a, double b, double z, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = specfun::kummer_m_deriv(a, b, z);
    });
}

const char* tricomi_kummer_regime_name(int regime)
{
    if (regime < 0 || regime > 3) {
        return "unknown";
    }
    return specfun::to_string(static_cast<specfun::KummerRegime>(regime));
}

tricomi_status tricomi_varphi(int n, double r, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = specfun::varphi(n, r);
    });
}

tricomi_status tricomi_varphi_scaled(int n, double r, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = specfun::varphi_scaled(n, r);
    });
}

tricomi_status tricomi_sphere_measure(int n, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = specfun::sphere_measure(n);
    });
}

// ---------------------------------------------------------------------- ode

tricomi_status tricomi_phi_of_t(double m, double t, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = ode::phi_of_t(m, t);
    });
}

tricomi_status tricomi_fundamental_pair(double m, double lambda, double t, tricomi_fundamental* out)
{
    return guarded([&] {
        need(out, "out");
        const ode::FundamentalEval f = ode::fundamental_pair(ode_params(m, lambda), t);
        out->t = f.t;
        out->v1 = f.v1;
        out->dv1 = f.dv1;
        out->v2 = f.v2;
        out->dv2 = f.dv2;
        out->wronskian = f.wronskian();
    });
}

tricomi_status tricomi_phi1(double t, double s, double m, double lambda, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = ode::phi1(t, s, ode_params(m, lambda));
    });
}

tricomi_status tricomi_phi2(double t, double s, double m, double lambda, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = ode::phi2(t, s, ode_params(m, lambda));
    });
}

tricomi_status tricomi_phi2_ratio(double t, double s, double m, double lambda, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = ode::phi2_ratio(t, s, ode_params(m, lambda));
    });
}

tricomi_status tricomi_ode_oracle(double m, double lambda, double t_end, double y0, double dy0, double tol, double* y,
                                  double* dy)
{
    return guarded([&] {
        need(y, "y");
        const auto r = ode::ode_oracle(ode_params(m, lambda), t_end, {y0, dy0}, tol);
        *y = r.first;
        if (dy != nullptr) {
            *dy = r.second;
        }
    });
}

// ------------------------------------------------------------------ testfun

void tricomi_testfn_params_default(tricomi_testfn_params* params)
{
    if (params == nullptr) {
        return;
    }
    const testfun::TestFnParams d;
    params->q = d.q;
    params->lambda0 = d.lambda0;
    params->R = d.R;
    params->n = d.n;
    params->m = d.m;
}

void tricomi_grid_spec_default(tricomi_grid_spec* grid)
{
    if (grid == nullptr) {
        return;
    }
    const testfun::GridSpec d;
    grid->t_min = d.t_min;
    grid->t_max = d.t_max;
    grid->t_first = d.t_first;
    grid->t_points = d.t_points;
    grid->x_points = d.x_points;
    grid->s_points = d.s_points;
}

tricomi_status tricomi_xi_q(double x_norm, double t, double s, const tricomi_testfn_params* params, double* value,
                            double* abs_error)
{
    return guarded([&] {
        need(value, "value");
        const testfun::Quadrature q = testfun::xi_q_eval(x_norm, t, s, testfn(params));
        *value = q.value;
        if (abs_error != nullptr) {
            *abs_error = q.abs_error;
        }
    });
}

tricomi_status tricomi_eta_q(double x_norm, double t, double s, const tricomi_testfn_params* params, double* value,
                             double* abs_error)
{
    return guarded([&] {
        need(value, "value");
        const testfun::Quadrature q = testfun::eta_q_eval(x_norm, t, s, testfn(params));
        *value = q.value;
        if (abs_error != nullptr) {
            *abs_error = q.abs_error;
        }
    });
}

tricomi_status tricomi_envelope_report(const tricomi_testfn_params* params, const tricomi_grid_spec* grid,
                                      const char* parts, tricomi_bound_report** out)
{
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        auto report = testfun::envelope_report(testfn(params), grid_spec(grid), parse_parts(parts));
        *out = new tricomi_bound_report{std::move(report)};
    });
}

size_t tricomi_bound_report_row_count(const tricomi_bound_report* report)
{
    return report == nullptr ? 0 : report->report.rows.size();
}

tricomi_status tricomi_bound_report_row(const tricomi_bound_report* report, size_t index, tricomi_bound_row* row)
{
    return guarded([&] {
        need(report, "report");
        need(row, "row");
        const testfun::BoundRow& r = report->report.rows.at(index);
        copy_name(row->part, testfun::to_string(r.part));
        row->t = r.t;
        row->s = r.s;
        row->x_norm = r.x_norm;
        row->value = r.value;
        row->envelope = r.envelope;
        row->ratio = r.ratio;
    });
}

size_t tricomi_bound_report_part_count(const tricomi_bound_report* report)
{
    return report == nullptr ? 0 : report->report.parts.size();
}

tricomi_status tricomi_bound_report_part(const tricomi_bound_report* report, size_t index,
                                         tricomi_part_summary* summary)
{
    return guarded([&] {
        need(report, "report");
        need(summary, "summary");
        fill_summary(report->report.parts.at(index), summary);
    });
}

void tricomi_bound_report_free(tricomi_bound_report* report)
{
    delete report;
}

tricomi_status tricomi_refinement_check(const tricomi_testfn_params* params, const tricomi_grid_spec* grid,
                                        const char* part, double tol, tricomi_stability* out)
{
    return guarded([&] {
        need(part, "part");
        need(out, "out");
        const testfun::StabilityCheck c =
            testfun::refinement_check(testfn(params), grid_spec(grid), testfun::part_from_string(part), tol);
        fill_summary(c.coarse, &out->coarse);
        fill_summary(c.fine, &out->fine);
        out->relative_change = c.relative_change;
        out->stable = c.stable ? 1 : 0;
    });
}

// ---------------------------------------------------------------- exponents

tricomi_status tricomi_gamma(const tricomi_context* ctx, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = exponents::gamma_mnp(context(ctx));
    });
}

tricomi_status tricomi_p_crit(double m, int n, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = exponents::p_crit(m, n);
    });
}

tricomi_status tricomi_strauss_exponent(int n, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = exponents::strauss_exponent(n);
    });
}

tricomi_status tricomi_exponents_of(const tricomi_context* ctx, tricomi_iteration_exponents* out)
{
    return guarded([&] {
        need(out, "out");
        const exponents::IterationExponents e = exponents::iteration_exponents(context(ctx));
        out->mu = e.mu;
        out->a1 = e.a1;
        out->b1 = e.b1;
        out->alpha_it = e.alpha_it;
        out->beta_it = e.beta_it;
    });
}

tricomi_status tricomi_frame_q(const tricomi_context* ctx, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = exponents::frame_q(context(ctx));
    });
}

tricomi_status tricomi_critical_identities(const tricomi_context* ctx, double* frame, double* initiate)
{
    return guarded([&] {
        const exponents::CriticalResiduals r = exponents::critical_identities(context(ctx));
        if (frame != nullptr) {
            *frame = r.frame;
        }
        if (initiate != nullptr) {
            *initiate = r.initiate;
        }
    });
}

tricomi_status tricomi_classify(const tricomi_context* ctx, double tol, int* regime)
{
    return guarded([&] {
        need(regime, "regime");
        *regime = static_cast<int>(exponents::classify(context(ctx), tol));
    });
}

const char* tricomi_regime_name(int regime)
{
    if (regime < 0 || regime > 2) {
        return "unknown";
    }
    return exponents::to_string(static_cast<exponents::Regime>(regime));
}

tricomi_status tricomi_lifespan_exponent(const tricomi_context* ctx, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = exponents::subcritical_lifespan_exponent(context(ctx));
    });
}

tricomi_status tricomi_lifespan_prediction(const tricomi_context* ctx, double eps, double constant, double* value)
{
    return guarded([&] {
        need(value, "value");
        *value = exponents::lifespan_prediction(context(ctx), eps, constant);
    });
}

// ---------------------------------------------------------------- iteration

tricomi_status tricomi_subcritical_run(const tricomi_context* ctx, double D1, double T0, int jmax, double C0,
                                       tricomi_subcritical** out)
{
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        auto seq = iteration::subcritical_run(context(ctx), D1, T0, jmax, C0);
        *out = new tricomi_subcritical{std::move(seq)};
    });
}

tricomi_status tricomi_subcritical_get_info(const tricomi_subcritical* seq, tricomi_subcritical_info* out)
{
    return guarded([&] {
        need(seq, "seq");
        need(out, "out");
        const auto& s = seq->seq;
        out->T0 = s.T0;
        out->C0 = s.C0;
        out->log_D1 = s.log_D1;
        out->log_C3 = s.log_C3;
        out->Sp_inf = s.Sp_inf;
        out->threshold_index = s.threshold_index;
        out->alpha_it = s.exps.alpha_it;
        out->beta_it = s.exps.beta_it;
        out->size = s.size();
    });
}

tricomi_status tricomi_subcritical_row_at(const tricomi_subcritical* seq, int j, tricomi_subcritical_row* out)
{
    return guarded([&] {
        need(seq, "seq");
        need(out, "out");
        const auto& s = seq->seq;
        if (j < 1 || j > s.size()) {
            throw std::out_of_range("index j = " + std::to_string(j) + " outside 1.." + std::to_string(s.size()));
        }
        const size_t k = static_cast<size_t>(j - 1);
        out->j = j;
        out->a = s.a[k];
        out->b = s.b[k];
        out->a_closed = s.a_closed[k];
        out->b_closed = s.b_closed[k];
        out->log_D = s.log_D[k];
        out->log_D_lower = s.log_D_lower[k];
        out->log_D_lower_closed = s.log_D_lower_closed[k];
        out->log_D_bound = s.log_D_bound[k];
    });
}

tricomi_status tricomi_j_function(const tricomi_subcritical* seq, double t, double* value)
{
    return guarded([&] {
        need(seq, "seq");
        need(value, "value");
        *value = iteration::j_function(t, seq->seq);
    });
}

tricomi_status tricomi_j_threshold_closed_form(const tricomi_subcritical* seq, double* value)
{
    return guarded([&] {
        need(seq, "seq");
        need(value, "value");
        *value = iteration::j_threshold_closed_form(seq->seq);
    });
}

tricomi_status tricomi_j_first_crossing(const tricomi_subcritical* seq, double level, double t_hi, double* value)
{
    return guarded([&] {
        need(seq, "seq");
        need(value, "value");
        *value = iteration::j_first_crossing(seq->seq, level, t_hi);
    });
}

tricomi_status tricomi_log_lower_bound(const tricomi_subcritical* seq, int j, double t, double* value)
{
    return guarded([&] {
        need(seq, "seq");
        need(value, "value");
        *value = iteration::log_lower_bound(seq->seq, j, t);
    });
}

tricomi_status tricomi_subcritical_threshold(const tricomi_subcritical* seq, double log_ceiling, double t_hi,
                                             tricomi_crossing* out)
{
    return guarded([&] {
        need(seq, "seq");
        need(out, "out");
        fill_crossing(iteration::subcritical_threshold(seq->seq, log_ceiling, t_hi), out);
    });
}

void tricomi_subcritical_free(tricomi_subcritical* seq)
{
    delete seq;
}

tricomi_status tricomi_blowup_time_estimate(const tricomi_context* ctx, double eps, double C2, double T0, double C0,
                                            tricomi_blowup_estimate* out)
{
    return guarded([&] {
        need(out, "out");
        const iteration::BlowupEstimate e = iteration::blowup_time_estimate(context(ctx), eps, C2, T0, C0);
        out->C4 = e.C4;
        out->exponent = e.exponent;
        out->bound = e.bound;
    });
}

void tricomi_critical_constants_default(tricomi_critical_constants* constants)
{
    if (constants == nullptr) {
        return;
    }
    const iteration::CriticalConstants d;
    constants->C = d.C;
    constants->C0 = d.C0;
    constants->B1 = d.B1;
    constants->N_denominator = d.N_denominator;
}

tricomi_status tricomi_critical_run(const tricomi_context* ctx, double eps, const tricomi_critical_constants* constants,
                                    int jmax, tricomi_critical** out)
{
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        auto seq = iteration::critical_run(context(ctx), eps, critical_constants(constants), jmax);
        *out = new tricomi_critical{std::move(seq)};
    });
}

tricomi_status tricomi_critical_get_info(const tricomi_critical* seq, tricomi_critical_info* out)
{
    return guarded([&] {
        need(seq, "seq");
        need(out, "out");
        const auto& s = seq->seq;
        out->eps = s.eps;
        out->M = s.M;
        out->log_N = s.log_N;
        out->log_E = s.log_E;
        out->log_C1 = s.log_C1;
        out->size = s.size();
    });
}

tricomi_status tricomi_critical_row_at(const tricomi_critical* seq, int j, tricomi_critical_row* out)
{
    return guarded([&] {
        need(seq, "seq");
        need(out, "out");
        const auto& s = seq->seq;
        if (j < 0 || j >= s.size()) {
            throw std::out_of_range("index j = " + std::to_string(j) + " outside 0.." +
                                    std::to_string(s.size() - 1));
        }
        const size_t k = static_cast<size_t>(j);
        out->j = j;
        out->a = s.a[k];
        out->b = s.b[k];
        out->a_rec = s.a_rec[k];
        out->b_rec = s.b_rec[k];
        out->l = s.l[k];
        out->S = s.S[k];
        out->log_C = s.log_C[k];
        out->log_C_rec = s.log_C_rec[k];
    });
}

tricomi_status tricomi_log_slicing_bound(const tricomi_critical* seq, int j, double log_t, double* value)
{
    return guarded([&] {
        need(seq, "seq");
        need(value, "value");
        *value = iteration::log_slicing_bound(seq->seq, j, log_t);
    });
}

tricomi_status tricomi_log_initiation_bound(const tricomi_critical* seq, double t, double* value)
{
    return guarded([&] {
        need(seq, "seq");
        need(value, "value");
        *value = iteration::log_initiation_bound(seq->seq, t);
    });
}

tricomi_status tricomi_critical_threshold(const tricomi_critical* seq, double log_ceiling, double log_t_hi,
                                          tricomi_crossing* out)
{
    return guarded([&] {
        need(seq, "seq");
        need(out, "out");
        fill_crossing(iteration::critical_threshold(seq->seq, log_ceiling, log_t_hi), out);
    });
}

void tricomi_critical_free(tricomi_critical* seq)
{
    delete seq;
}

tricomi_status tricomi_subcritical_scaling(const tricomi_context* ctx, const double* eps, size_t count, double C2,
                                           double T0, int jmax, double log_ceiling, tricomi_scaling_point* points,
                                           double* slope, double* theory_slope)
{
    return guarded([&] {
        need(eps, "eps");
        need(points, "points");
        const std::vector<double> e(eps, eps + count);
        fill_scaling(iteration::subcritical_scaling(context(ctx), e, C2, T0, jmax, log_ceiling), points, slope,
                     theory_slope);
    });
}

tricomi_status tricomi_critical_scaling(const tricomi_context* ctx, const double* eps, size_t count,
                                        const tricomi_critical_constants* constants, int jmax, double log_ceiling,
                                        tricomi_scaling_point* points, double* slope, double* theory_slope)
{
    return guarded([&] {
        need(eps, "eps");
        need(points, "points");
        const std::vector<double> e(eps, eps + count);
        fill_scaling(
            iteration::critical_scaling(context(ctx), e, critical_constants(constants), jmax, log_ceiling),
            points, slope, theory_slope);
    });
}

// ---------------------------------------------------------------------- pde

void tricomi_run_config_default(tricomi_run_config* cfg)
{
    if (cfg == nullptr) {
        return;
    }
    const pde::RunConfig d;
    cfg->m = d.model.m;
    cfg->n = d.model.n;
    cfg->p = d.model.p;
    cfg->R = d.model.R;
    cfg->eps = d.model.eps;
    cfg->dx = d.dx;
    cfg->domain_radius = d.domain_radius;
    cfg->t_max = d.t_max;
    cfg->cfl = d.cfl;
    cfg->blowup_threshold = d.blowup_threshold;
    cfg->confirm_threshold = d.confirm_threshold;
    cfg->profile = d.profile == pde::Profile::Smooth ? TRICOMI_PROFILE_SMOOTH : TRICOMI_PROFILE_BUMP4;
    cfg->u1_scale = d.u1_scale;
    cfg->nonlinear = d.nonlinear ? 1 : 0;
    cfg->support_tol = d.support_tol;
    cfg->f_interval = d.f_interval;
    cfg->q = d.q;
    cfg->q_auto = d.q_auto ? 1 : 0;
    cfg->lambda0 = d.lambda0;
    cfg->record_stride = d.record_stride;
}

tricomi_status tricomi_run_config_validate(const tricomi_run_config* cfg)
{
    return guarded([&] { pde::validate(run_config(cfg)); });
}

const char* tricomi_profile_name(int profile)
{
    if (profile == TRICOMI_PROFILE_BUMP4) {
        return pde::to_string(pde::Profile::Bump4);
    }
    if (profile == TRICOMI_PROFILE_SMOOTH) {
        return pde::to_string(pde::Profile::Smooth);
    }
    return "unknown";
}

tricomi_status tricomi_profile_from_name(const char* name, int* profile)
{
    return guarded([&] {
        need(name, "name");
        need(profile, "profile");
        *profile = pde::profile_from_string(name) == pde::Profile::Smooth ? TRICOMI_PROFILE_SMOOTH
                                                                          : TRICOMI_PROFILE_BUMP4;
    });
}

tricomi_status tricomi_solver_create(const tricomi_run_config* cfg, tricomi_solver** out)
{
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        pde::RunConfig c = run_config(cfg);
        pde::validate(c);
        pde::SolverState st = pde::initialize(c);
        *out = new tricomi_solver{std::move(c), std::move(st)};
    });
}

tricomi_status tricomi_solver_step(tricomi_solver* solver)
{
    return guarded([&] {
        need(solver, "solver");
        pde::step(solver->state, solver->cfg);
        if (solver->state.nonfinite) {
            throw NumericalError("solution became non-finite at t = " + std::to_string(solver->state.t));
        }
    });
}

double tricomi_solver_time(const tricomi_solver* solver)
{
    return solver == nullptr ? std::numeric_limits<double>::quiet_NaN() : solver->state.t;
}

size_t tricomi_solver_size(const tricomi_solver* solver)
{
    return solver == nullptr ? 0 : solver->state.u.size();
}

tricomi_status tricomi_solver_field(const tricomi_solver* solver, double* r, double* u, size_t capacity)
{
    return guarded([&] {
        need(solver, "solver");
        const auto& st = solver->state;
        const size_t count = std::min(capacity, st.u.size());
        for (size_t i = 0; i < count; ++i) {
            if (r != nullptr) {
                r[i] = st.grid->r[i];
            }
            if (u != nullptr) {
                u[i] = st.u[i];
            }
        }
    });
}

tricomi_status tricomi_solver_functionals(const tricomi_solver* solver, double* G, double* Lp, double* max_u,
                                          double* support)
{
    return guarded([&] {
        need(solver, "solver");
        const auto& st = solver->state;
        if (G != nullptr) {
            *G = pde::functional_G(st);
        }
        if (Lp != nullptr) {
            *Lp = pde::functional_Lp(st, solver->cfg.model.p);
        }
        if (max_u != nullptr) {
            *max_u = st.max_abs;
        }
        if (support != nullptr) {
            *support = pde::support_radius(st, pde::resolved_support_tol(solver->cfg));
        }
    });
}

tricomi_status tricomi_solver_functional_F(const tricomi_solver* solver, double* F)
{
    return guarded([&] {
        need(solver, "solver");
        need(F, "F");
        *F = pde::functional_F(solver->state, solver->cfg.test_function());
    });
}

void tricomi_solver_free(tricomi_solver* solver)
{
    delete solver;
}

tricomi_status tricomi_run_until_blowup(const tricomi_run_config* cfg, tricomi_run** out)
{
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        pde::RunConfig c = run_config(cfg);
        pde::RunResult r = pde::run_until_blowup(c);
        *out = new tricomi_run{std::move(c), std::move(r)};
    });
}

tricomi_status tricomi_run_get_record(const tricomi_run* run, tricomi_record* out)
{
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        fill_record(run->result.record, out);
    });
}

size_t tricomi_run_series_count(const tricomi_run* run)
{
    return run == nullptr ? 0 : run->result.series.size();
}

tricomi_status tricomi_run_series_row(const tricomi_run* run, size_t index, tricomi_series_row* out)
{
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        const pde::SeriesRow& r = run->result.series.at(index);
        out->t = r.t;
        out->max_u = r.max_u;
        out->G = r.G;
        out->F = r.F;
        out->support = r.support;
        out->Lp = r.Lp;
    });
}

double tricomi_run_max_support_excess(const tricomi_run* run)
{
    return run == nullptr ? std::numeric_limits<double>::quiet_NaN() : run->result.max_support_excess;
}

tricomi_status tricomi_run_lp_lower_bound(const tricomi_run* run, double T0, tricomi_window* out)
{
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        const lifespan::LowerBoundWindow w = lifespan::lp_lower_bound(run->result, run->cfg.model, T0);
        out->eps = w.eps;
        out->t_lo = w.t_lo;
        out->t_hi = w.t_hi;
        out->min_ratio = w.min_ratio;
        out->max_ratio = w.max_ratio;
        out->points = w.points;
    });
}

tricomi_status tricomi_run_second_difference(const tricomi_run* run, double t_stop, double* max_relative,
                                             int* points)
{
    return guarded([&] {
        need(run, "run");
        need(max_relative, "max_relative");
        const lifespan::SecondDifferenceCheck c = lifespan::second_difference_check(run->result, t_stop);
        *max_relative = c.max_relative;
        if (points != nullptr) {
            *points = c.points;
        }
    });
}

tricomi_status tricomi_run_frame_check(const tricomi_run* run, double t_stop, double* min_ratio_ball,
                                       double* min_ratio_bare)
{
    return guarded([&] {
        need(run, "run");
        const lifespan::FrameCheck c = lifespan::frame_check(run->result, run->cfg.model, t_stop);
        if (min_ratio_ball != nullptr) {
            *min_ratio_ball = c.min_ratio_ball;
        }
        if (min_ratio_bare != nullptr) {
            *min_ratio_bare = c.min_ratio_bare;
        }
    });
}

void tricomi_run_free(tricomi_run* run)
{
    delete run;
}

tricomi_status tricomi_lifespan_scan(const tricomi_run_config* templ, const double* eps, size_t count, int threads,
                                     tricomi_scan** out)
{
    return guarded([&] {
        need(out, "out");
        need(eps, "eps");
        *out = nullptr;
        const std::vector<double> e(eps, eps + count);
        auto scan = lifespan::lifespan_scan(run_config(templ), e, threads);
        *out = new tricomi_scan{std::move(scan)};
    });
}

size_t tricomi_scan_count(const tricomi_scan* scan)
{
    return scan == nullptr ? 0 : scan->scan.records.size();
}

tricomi_status tricomi_scan_record(const tricomi_scan* scan, size_t index, tricomi_record* out)
{
    return guarded([&] {
        need(scan, "scan");
        need(out, "out");
        fill_record(scan->scan.records.at(index), out);
    });
}

int tricomi_scan_monotone(const tricomi_scan* scan)
{
    return scan != nullptr && scan->scan.monotone ? 1 : 0;
}

int tricomi_scan_censored(const tricomi_scan* scan)
{
    return scan == nullptr ? 0 : scan->scan.censored;
}

void tricomi_scan_free(tricomi_scan* scan)
{
    delete scan;
}

tricomi_status tricomi_fit_scaling(const tricomi_record* records, size_t count, int mode, tricomi_fit* out)
{
    return guarded([&] {
        need(records, "records");
        need(out, "out");
        if (mode != 0 && mode != 1) {
            throw ConfigError("unknown fit mode id " + std::to_string(mode));
        }
        std::vector<pde::LifespanRecord> recs(count);
        for (size_t k = 0; k < count; ++k) {
            recs[k].eps = records[k].eps;
            recs[k].T_blowup = records[k].T_blowup;
            recs[k].T_confirm = records[k].T_confirm;
            recs[k].censored = records[k].censored != 0;
            recs[k].threshold_consistent = records[k].threshold_consistent != 0;
            recs[k].peak = records[k].peak;
            recs[k].t_end = records[k].t_end;
            recs[k].steps = records[k].steps;
        }
        const auto fm = mode == 0 ? lifespan::FitMode::Subcritical : lifespan::FitMode::Critical;
        const lifespan::ScalingFit f = lifespan::fit_scaling(recs, fm);
        out->mode = mode;
        out->slope = f.slope;
        out->intercept = f.intercept;
        out->residual = f.residual;
        out->slope_stderr = f.slope_stderr;
        out->used = f.used;
        out->excluded = f.excluded;
    });
}

} // extern "C"
