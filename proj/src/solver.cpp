#include "nlchns/solver.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace nlchns {

namespace {

SpectrumField maybe_dealias(SpectrumField f, bool on) { return on ? dealias(f) : f; }

/// Pointwise product a*b, transformed and optionally 2/3-filtered.
SpectrumField product_spectrum(const RealArray& product, const Grid& grid, bool dealias_on) {
    return maybe_dealias(transform(ScalarField(grid, product)), dealias_on);
}

bool is_zero(const VectorField& v) { return (v.x().values() == 0.0).all() && (v.y().values() == 0.0).all(); }

}  // namespace

ScalarField chemical_potential(const ScalarField& phi, const KernelOnGrid& kernel, const PotentialSpec& potential,
                               bool dealias_on) {
    require_same_grid(phi.grid(), kernel.grid(), "chemical_potential");
    const SpectrumField phi_hat = transform(phi);
    SpectrumField mu_hat = maybe_dealias(transform(eval_dF(potential, phi)), dealias_on);
    mu_hat.coefficients() += (kernel.a - kernel.symbol.coefficients()) * phi_hat.coefficients();
    return inverse_transform(mu_hat);
}

ScalarField auxiliary_rho(const ScalarField& phi, const KernelOnGrid& kernel, const PotentialSpec& potential,
                          bool dealias_on) {
    require_same_grid(phi.grid(), kernel.grid(), "auxiliary_rho");
    SpectrumField rho_hat = maybe_dealias(transform(eval_dF(potential, phi)), dealias_on);
    rho_hat.coefficients() += kernel.a * transform(phi).coefficients();
    return inverse_transform(rho_hat);
}

VectorField korteweg_force(const ScalarField& phi, const ScalarField& mu, ForceForm form, bool dealias_on) {
    require_same_grid(phi.grid(), mu.grid(), "korteweg_force");
    const Grid& grid = phi.grid();
    const bool grad_mu = form == ForceForm::phi_grad_mu;
    const VectorField g = gradient(grad_mu ? mu : phi);
    const RealArray& weight = grad_mu ? phi.values() : mu.values();
    const double sign = grad_mu ? -1.0 : 1.0;
    return VectorField(inverse_transform(product_spectrum(sign * weight * g.x().values(), grid, dealias_on)),
                       inverse_transform(product_spectrum(sign * weight * g.y().values(), grid, dealias_on)));
}

VectorField evaluate_forcing(const ForcingSpec& forcing, const Grid& grid, double t) {
    switch (forcing.family) {
        case ForcingFamily::zero:
            return VectorField(grid);
        case ForcingFamily::body: {
            const double envelope = std::exp(-forcing.decay * t);
            return VectorField(ScalarField::constant(grid, forcing.amplitude[0] * envelope),
                               ScalarField::constant(grid, forcing.amplitude[1] * envelope));
        }
        case ForcingFamily::single_mode: {
            const double kx = 2.0 * std::numbers::pi * forcing.mode[0] / grid.l();
            const double ky = 2.0 * std::numbers::pi * forcing.mode[1] / grid.l();
            const double kk = std::hypot(kx, ky);
            const double scale = kk > 0.0 ? forcing.amplitude[0] * std::exp(-forcing.decay * t) / kk : 0.0;
            auto wave = [&](double x, double y) { return std::sin(kx * x + ky * y); };
            ScalarField s = ScalarField::sample(grid, wave);
            return VectorField((-ky * scale) * s, (kx * scale) * s);
        }
    }
    return VectorField(grid);
}

double forcing_dual_norm_sq(const ForcingSpec& forcing, const Grid& grid) {
    const auto h_hat = leray_project(transform(evaluate_forcing(forcing, grid, 0.0)));
    // A mean velocity forcing has no H^{-1} dual norm; roundoff in the mean of a zero-mean mode does not count.
    const double peak = std::max(h_hat[0].coefficients().abs().maxCoeff(), h_hat[1].coefficients().abs().maxCoeff());
    if (std::abs(h_hat[0](0, 0)) > 1e-12 * peak || std::abs(h_hat[1](0, 0)) > 1e-12 * peak) {
        return std::numeric_limits<double>::infinity();
    }
    double sum = 0.0;
    for (int i = 0; i < grid.n(); ++i) {
        for (int j = 0; j < grid.spectral_cols(); ++j) {
            const double k2 = grid.k_squared(i, j);
            if (k2 > 0.0) {
                sum += h_hat[0].column_weight(j) * (std::norm(h_hat[0](i, j)) + std::norm(h_hat[1](i, j))) / k2;
            }
        }
    }
    return grid.measure() * sum;
}

double forcing_time_integral(const ForcingSpec& forcing, const Grid& grid) {
    const double h0 = forcing_dual_norm_sq(forcing, grid);
    if (h0 == 0.0) {
        return 0.0;
    }
    if (!(forcing.decay > 0.0) || !std::isfinite(h0)) {
        return std::numeric_limits<double>::infinity();
    }
    return h0 / (2.0 * forcing.decay);
}

bool ForcingSpec::square_integrable() const {
    const bool silent = amplitude[0] == 0.0 && amplitude[1] == 0.0;
    switch (family) {
        case ForcingFamily::zero: return true;
        case ForcingFamily::body: return silent;
        case ForcingFamily::single_mode: return silent || decay > 0.0;
    }
    return false;
}

ScalarField step_ch(const SimState& state, const SimParams& params, const KernelOnGrid& kernel,
                    const PotentialSpec& potential) {
    const ScalarField& phi = state.phi;
    const Grid& grid = phi.grid();
    require_same_grid(grid, kernel.grid(), "step_ch");
    const double dt = params.dt;
    const double S = params.stabilizer;
    const double a = kernel.a;

    const SpectrumField phi_hat = transform(phi);
    SpectrumField adv_hat(grid);
    if (!is_zero(state.u)) {
        const VectorField g = inverse_transform(gradient(phi_hat));
        adv_hat = product_spectrum(state.u.x().values() * g.x().values() + state.u.y().values() * g.y().values(),
                                   grid, params.dealias);
        // u . grad phi = div(u phi) is mean free; drop the round-off in its mean so mass is exact.
        adv_hat(0, 0) = 0.0;
    }
    const SpectrumField dF_hat = maybe_dealias(transform(eval_dF(potential, phi)), params.dealias);

    SpectrumField next(grid);
    for (int i = 0; i < grid.n(); ++i) {
        for (int j = 0; j < grid.spectral_cols(); ++j) {
            const double k2 = grid.k_squared(i, j);
            const Complex p = phi_hat(i, j);
            const Complex explicit_part = S * p - dF_hat(i, j) + kernel.symbol(i, j) * p;
            next(i, j) = (p + dt * (k2 * explicit_part - adv_hat(i, j))) / (1.0 + dt * k2 * (a + S));
        }
    }
    return inverse_transform(next);
}

VectorField step_ns(const SimState& state, const ScalarField& mu, const SimParams& params, const ForcingSpec& forcing) {
    const Grid& grid = state.phi.grid();
    const double dt = params.dt;
    const VectorField& u = state.u;
    const auto u_hat = transform(u);

    VectorField f = korteweg_force(state.phi, mu, params.force_form, params.dealias);
    if (forcing.family != ForcingFamily::zero) {
        f += evaluate_forcing(forcing, grid, state.t);
    }
    auto rhs = transform(f);
    if (!is_zero(u)) {
        for (int c = 0; c < 2; ++c) {
            const VectorField g = inverse_transform(gradient(u_hat[c]));
            const SpectrumField adv = product_spectrum(
                u.x().values() * g.x().values() + u.y().values() * g.y().values(), grid, params.dealias);
            rhs[c].coefficients() -= adv.coefficients();
        }
    }
    rhs = leray_project(rhs);

    std::array<SpectrumField, 2> next = u_hat;
    for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < grid.n(); ++i) {
            for (int j = 0; j < grid.spectral_cols(); ++j) {
                const double k2 = grid.k_squared(i, j);
                next[c](i, j) = (u_hat[c](i, j) + dt * rhs[c](i, j)) / (1.0 + dt * params.nu * k2);
            }
        }
    }
    return inverse_transform(leray_project(next));
}

SimState step(const SimState& state, const SimParams& params, const KernelOnGrid& kernel,
              const PotentialSpec& potential, const ForcingSpec& forcing, ScalarField* step_mu) {
    const ScalarField mu = chemical_potential(state.phi, kernel, potential, params.dealias);
    SimState next{step_ch(state, params, kernel, potential), step_ns(state, mu, params, forcing), state.t + params.dt};
    if (!next.phi.all_finite() || !next.u.all_finite()) {
        throw BlowUpError("non-finite values at t = " + std::to_string(next.t), -1);
    }
    if (step_mu) {
        *step_mu = mu + (kernel.a + params.stabilizer) * (next.phi - state.phi);
    }
    return next;
}

double scaled_divergence(const VectorField& u) {
    const double umax = u.max_abs();
    if (umax == 0.0) {
        return 0.0;
    }
    const Grid& grid = u.grid();
    const double scale = umax * 2.0 * std::numbers::pi * grid.n() / grid.l();
    return divergence(u).values().abs().maxCoeff() / scale;
}

}  // namespace nlchns
