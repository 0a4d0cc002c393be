#pragma once

#include <stdexcept>
#include <string>

#include "nlchns/config.hpp"
#include "nlchns/kernel.hpp"
#include "nlchns/potential.hpp"
#include "nlchns/spectral.hpp"

namespace nlchns {

/// Non-finite values appeared in the solution.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
    long step() const { return step_; }

private:
    long step_;
};

struct SimState {
    ScalarField phi;
    VectorField u;
    double t = 0.0;
};

/// mu = a phi - J * phi + F'(phi). With `dealias` the pointwise F'(phi) is 2/3-filtered.
ScalarField chemical_potential(const ScalarField& phi, const KernelOnGrid& kernel, const PotentialSpec& potential,
                               bool dealias = true);

/// rho = a phi + F'(phi) (= mu + J * phi).
ScalarField auxiliary_rho(const ScalarField& phi, const KernelOnGrid& kernel, const PotentialSpec& potential,
                          bool dealias = true);

/// Capillary force: -phi grad mu (default) or mu grad phi.
VectorField korteweg_force(const ScalarField& phi, const ScalarField& mu, ForceForm form, bool dealias = true);

VectorField evaluate_forcing(const ForcingSpec& forcing, const Grid& grid, double t);

/// ||h(0)||^2 in V_div' (norm of V_div taken as ||grad v||); infinite for a nonzero mean force.
double forcing_dual_norm_sq(const ForcingSpec& forcing, const Grid& grid);
/// int_0^inf ||h(t)||^2_{V_div'} dt; infinite unless the force decays or vanishes.
double forcing_time_integral(const ForcingSpec& forcing, const Grid& grid);

/// One linearly implicit stabilized step of the convective nonlocal Cahn-Hilliard equation:
///   (1/dt + |k|^2 (a+S)) phi^{n+1} = phi^n/dt + |k|^2 (S phi^n - F'(phi^n) + J phi^n) - (u^n . grad phi^n)
/// mode by mode.
ScalarField step_ch(const SimState& state, const SimParams& params, const KernelOnGrid& kernel,
                    const PotentialSpec& potential);

/// One semi-implicit step of Navier-Stokes with the capillary force evaluated at (phi^n, mu^n):
///   u* = [u^n/dt + P(-(u^n . grad) u^n + f^n)] / (1/dt + nu |k|^2),  u^{n+1} = P u*.
VectorField step_ns(const SimState& state, const ScalarField& mu, const SimParams& params, const ForcingSpec& forcing);

/// Full coupled step: mu^n from phi^n, then step_ch with u^n, then step_ns with (phi^n, mu^n).
/// If `step_mu` is given it receives the chemical potential the Cahn-Hilliard solve applied,
///   mu^{n+1} = mu^n + (a + S)(phi^{n+1} - phi^n),  so that phi^{n+1} - phi^n = dt (lap mu^{n+1} - u^n . grad phi^n).
SimState step(const SimState& state, const SimParams& params, const KernelOnGrid& kernel,
              const PotentialSpec& potential, const ForcingSpec& forcing, ScalarField* step_mu = nullptr);

/// Scaled divergence: max |div u| / (||u||_inf 2 pi n / l), zero for a zero field.
double scaled_divergence(const VectorField& u);

}  // namespace nlchns
