#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bellctx/rng.hpp"

namespace bellctx::nelson {

// A point of two-particle configuration space.
struct Configuration {
    double x1 = 0.0;
    double x2 = 0.0;
};

// Entangled two-particle Gaussian with zero phase: relative coordinate
// x1 - x2 has width sigma, center-of-mass coordinate x1 + x2 has width
// big_sigma, and nu is the diffusion coefficient. Entangled whenever
// sigma != big_sigma.
struct GaussianTwoParticleState {
    double sigma;
    double big_sigma;
    double nu;
    double norm;  // amplitude normalization, fixed by sigma and big_sigma

    GaussianTwoParticleState(double sigma, double big_sigma, double nu);
};

// Current velocity v, osmotic velocity u, and the derived forward/backward
// drifts b = v + u and b* = v - u (identities held by construction).
class VelocityField {
public:
    using Field = std::function<Configuration(const Configuration&)>;

    VelocityField(Field current, Field osmotic);

    Configuration current(const Configuration& q) const;        // v
    Configuration osmotic(const Configuration& q) const;        // u
    Configuration forward_drift(const Configuration& q) const;  // b  = v + u
    Configuration backward_drift(const Configuration& q) const; // b* = v - u

private:
    Field current_;
    Field osmotic_;
};

// Wavefunction in polar form: a nonnegative amplitude field, a phase field
// (action units), the diffusion coefficient nu, and the mass. Velocities for
// general fields come from central finite differences.
struct PolarWavefunction {
    std::function<double(const Configuration&)> amplitude;
    std::function<double(const Configuration&)> phase;
    double nu = 0.5;
    double mass = 1.0;
};

// Closed-form fields of the Gaussian state: v == 0 and
//   u1 = nu [ -(x1-x2)/sigma^2 - (x1+x2)/Sigma^2 ]
//   u2 = nu [  (x1-x2)/sigma^2 - (x1+x2)/Sigma^2 ]
VelocityField velocity_field(const GaussianTwoParticleState& state);

// v = grad(S)/m and u = nu grad(ln R^2) by central differences of step h.
VelocityField velocity_field(const PolarWavefunction& psi, double h = 1e-5);

PolarWavefunction to_polar(const GaussianTwoParticleState& state, double mass = 1.0);

// Normalized joint density rho(x1, x2) = |psi|^2.
double joint_density(const GaussianTwoParticleState& state, double x1, double x2);

// A population of configuration points evolved by the forward diffusion,
// with the metadata needed to reproduce it.
struct Ensemble {
    std::vector<Configuration> points;
    double time = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t steps = 0;
};

// Exact draw from the joint density: u ~ N(0, sigma^2) and s ~ N(0, Sigma^2)
// independently, then x1 = (s+u)/2, x2 = (s-u)/2. Fixed seed -> bit-identical
// ensemble.
Ensemble sample_initial(const GaussianTwoParticleState& state, std::size_t n,
                        std::uint64_t seed);

// One Euler-Maruyama step of  dX = b(X) dt + sqrt(2 nu) dW  for every point,
// with per-point noise streams keyed on (step, point) so the update is
// independent of iteration order. Throws numerical_error (naming the point)
// if a drift evaluation is non-finite.
Ensemble em_step(const Ensemble& ensemble, const VelocityField& field, double dt,
                 double nu, const rng::StreamFactory& noise);

// The conditional Gaussian law of x2 given a measured x1 = y:
//   mean = y (Sigma^2 - sigma^2) / (sigma^2 + Sigma^2)
//   variance = sigma^2 Sigma^2 / (sigma^2 + Sigma^2)
struct ConditionalLaw {
    double y;
    double mean;
    double variance;
};

ConditionalLaw condition_analytic(const GaussianTwoParticleState& state, double y);

// Osmotic velocity of particle 2 after conditioning on x1 = y:
//   u2(y; x2) = nu [ (y - x2)/sigma^2 - (y + x2)/Sigma^2 ]
// which equals nu (mean - x2)/variance of the conditional law.
double conditional_velocity(const GaussianTwoParticleState& state, double y, double x2);

// Sub-ensemble with |x1 - y| <= delta, the window realization of
// conditioning on a position measurement of particle 1. Throws
// empty_selection (with a suggested wider delta) when nothing survives.
Ensemble condition_ensemble(const Ensemble& ensemble, double y, double delta);

struct Moments1d {
    double mean;
    double variance;
};

// Marginal law of x2: mean 0, variance (sigma^2 + Sigma^2)/4. Independent of
// any conditioning performed on particle 1.
Moments1d marginal_x2(const GaussianTwoParticleState& state);

}  // namespace bellctx::nelson
