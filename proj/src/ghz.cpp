#include "qcc/ghz.hpp"

#include <cmath>
#include <string>

#include "qcc/quadrature.hpp"

namespace qcc {
namespace {

// Clamp a probability whose excursion outside [0, 1] is numerical noise;
// anything beyond 1e-12 is a genuine modeling violation.
double clamp_prob(double p, const char* what) {
    if (p < 0.0) {
        if (p > -1e-12) return 0.0;
        throw analysis_error(std::string(what) + ": probability below zero");
    }
    if (p > 1.0) {
        if (p < 1.0 + 1e-12) return 1.0;
        throw analysis_error(std::string(what) + ": probability above one");
    }
    return p;
}

}  // namespace

PathDamping path_damping(const PulseModel& pulse) {
    const double g = pulse.gamma;
    auto damp = [g](double dt, double domega) {
        return std::exp(-0.5 * g * dt * dt - domega * domega / (8.0 * g));
    };
    PathDamping d;
    d.ab = damp(pulse.dt_ab, pulse.domega_ab);
    d.bc = damp(pulse.dt_bc, pulse.domega_bc);
    d.ca = damp(pulse.dt_ac, pulse.domega_ca);
    return d;
}

ClickProbs click_probabilities(double mu, double nu, double kappa,
                               const PulseModel& pulse,
                               double phi_ab, double phi_bc, double phi_ca,
                               const AnalyzerPhase& phase) {
    if (mu < 0.0 || nu < 0.0 || kappa < 0.0)
        throw validation_error("click_probabilities: intensities must be >= 0");
    const PathDamping xi = path_damping(pulse);

    auto pair_probs = [](double ia, double ib, double xi_p, double delta,
                         double* ph, double* pv) {
        const double base = 0.25 * (ia + ib);
        const double cross = 0.5 * std::sqrt(ia * ib) * xi_p * std::cos(delta);
        *ph = base + cross;
        *pv = base - cross;
    };

    ClickProbs c;
    pair_probs(mu, nu, xi.ab, phi_ab + phase.gamma1, &c.d1h, &c.d1v);
    pair_probs(nu, kappa, xi.bc, phi_bc + phase.gamma2, &c.d2h, &c.d2v);
    pair_probs(kappa, mu, xi.ca, phi_ca + phase.gamma3, &c.d3h, &c.d3v);

    c.d1h = clamp_prob(c.d1h, "d1h");
    c.d1v = clamp_prob(c.d1v, "d1v");
    c.d2h = clamp_prob(c.d2h, "d2h");
    c.d2v = clamp_prob(c.d2v, "d2v");
    c.d3h = clamp_prob(c.d3h, "d3h");
    c.d3v = clamp_prob(c.d3v, "d3v");
    return c;
}

std::pair<double, double> projection_probabilities(double mu,
                                                   const PulseModel& pulse,
                                                   const AnalyzerPhase& phase,
                                                   int quadrature_points) {
    if (mu < 0.0)
        throw validation_error("projection_probabilities: mu must be >= 0");
    if (quadrature_points < 8)
        throw validation_error(
            "projection_probabilities: quadrature_points must be >= 8");

    const PhaseGrid& grid = phase_grid(quadrature_points);
    const double two_pi = 2.0 * std::acos(-1.0);
    double p_plus = 0.0, p_minus = 0.0;

    // Average the coincidence-class probabilities over the two independent
    // relative phases; the third is fixed by phi_ab + phi_bc + phi_ca = 0.
    for (size_t i = 0; i < grid.node.size(); ++i) {
        const double phi_ab = grid.node[i];
        for (size_t j = 0; j < grid.node.size(); ++j) {
            const double phi_ca = grid.node[j];
            const double phi_bc = -phi_ab - phi_ca;
            ClickProbs c = click_probabilities(mu, mu, mu, pulse,
                                               phi_ab, phi_bc, phi_ca, phase);
            // Even parity (even number of V-port detectors) is accepted as
            // the "+" class, odd parity as the "-" class.
            const double plus = c.d1h * c.d2h * c.d3h + c.d1h * c.d2v * c.d3v +
                                c.d1v * c.d2h * c.d3v + c.d1v * c.d2v * c.d3h;
            const double minus = c.d1v * c.d2v * c.d3v + c.d1v * c.d2h * c.d3h +
                                 c.d1h * c.d2v * c.d3h + c.d1h * c.d2h * c.d3v;
            const double w = grid.weight[i] * grid.weight[j];
            p_plus += w * plus;
            p_minus += w * minus;
        }
    }
    const double norm = two_pi * two_pi;
    return {p_plus / norm, p_minus / norm};
}

double qber_x(const PulseModel& pulse, double visibility) {
    if (visibility < 0.0 || visibility > 0.25)
        throw validation_error("qber_x: visibility must be in [0, 0.25]");
    const double s = pulse.dt_ab * pulse.dt_ab + pulse.dt_ac * pulse.dt_ac +
                     pulse.dt_bc * pulse.dt_bc;
    return 0.5 * (1.0 - visibility * std::exp(-0.5 * pulse.gamma * s));
}

double visibility_from_phases(const AnalyzerPhase& phase) {
    return 0.25 * std::cos(phase.gamma1 + phase.gamma2 + phase.gamma3);
}

}  // namespace qcc
