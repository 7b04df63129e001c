#include "bellctx/nelson.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bellctx/errors.hpp"

namespace bellctx::nelson {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw input_error(std::string(name) + " must be a positive finite real");
    }
}

}  // namespace

GaussianTwoParticleState::GaussianTwoParticleState(double sigma, double big_sigma, double nu)
    : sigma(sigma), big_sigma(big_sigma), nu(nu) {
    require_positive(sigma, "sigma");
    require_positive(big_sigma, "Sigma");
    require_positive(nu, "nu");
    // |psi|^2 integrates to 1: rho = norm^2 exp(...) with norm^2 = 1/(pi sigma Sigma).
    norm = 1.0 / std::sqrt(kPi * sigma * big_sigma);
}

VelocityField::VelocityField(Field current, Field osmotic)
    : current_(std::move(current)), osmotic_(std::move(osmotic)) {}

Configuration VelocityField::current(const Configuration& q) const { return current_(q); }
Configuration VelocityField::osmotic(const Configuration& q) const { return osmotic_(q); }

Configuration VelocityField::forward_drift(const Configuration& q) const {
    const auto v = current_(q);
    const auto u = osmotic_(q);
    return {v.x1 + u.x1, v.x2 + u.x2};
}

Configuration VelocityField::backward_drift(const Configuration& q) const {
    const auto v = current_(q);
    const auto u = osmotic_(q);
    return {v.x1 - u.x1, v.x2 - u.x2};
}

VelocityField velocity_field(const GaussianTwoParticleState& state) {
    const double inv_s2 = 1.0 / (state.sigma * state.sigma);
    const double inv_S2 = 1.0 / (state.big_sigma * state.big_sigma);
    const double nu = state.nu;
    return VelocityField(
        [](const Configuration&) { return Configuration{0.0, 0.0}; },
        [=](const Configuration& q) {
            const double rel = (q.x1 - q.x2) * inv_s2;
            const double com = (q.x1 + q.x2) * inv_S2;
            return Configuration{nu * (-rel - com), nu * (rel - com)};
        });
}

VelocityField velocity_field(const PolarWavefunction& psi, double h) {
    require_positive(h, "finite-difference step");
    const auto grad = [h](const std::function<double(const Configuration&)>& f,
                          const Configuration& q) {
        const double d1 = (f({q.x1 + h, q.x2}) - f({q.x1 - h, q.x2})) / (2.0 * h);
        const double d2 = (f({q.x1, q.x2 + h}) - f({q.x1, q.x2 - h})) / (2.0 * h);
        return Configuration{d1, d2};
    };
    const auto amplitude = psi.amplitude;
    const auto phase = psi.phase;
    const double nu = psi.nu;
    const double mass = psi.mass;
    return VelocityField(
        [=](const Configuration& q) {
            const auto g = grad(phase, q);
            return Configuration{g.x1 / mass, g.x2 / mass};
        },
        [=](const Configuration& q) {
            // u = nu grad ln R^2 = 2 nu grad ln R
            const auto log_amplitude = [&](const Configuration& p) {
                return std::log(amplitude(p));
            };
            const auto g = grad(log_amplitude, q);
            return Configuration{2.0 * nu * g.x1, 2.0 * nu * g.x2};
        });
}

PolarWavefunction to_polar(const GaussianTwoParticleState& state, double mass) {
    require_positive(mass, "mass");
    const double s2 = state.sigma * state.sigma;
    const double S2 = state.big_sigma * state.big_sigma;
    const double norm = state.norm;
    return PolarWavefunction{
        [=](const Configuration& q) {
            const double rel = q.x1 - q.x2;
            const double com = q.x1 + q.x2;
            return norm * std::exp(-rel * rel / (4.0 * s2) - com * com / (4.0 * S2));
        },
        [](const Configuration&) { return 0.0; },
        state.nu,
        mass,
    };
}

double joint_density(const GaussianTwoParticleState& state, double x1, double x2) {
    const double rel = x1 - x2;
    const double com = x1 + x2;
    const double s2 = state.sigma * state.sigma;
    const double S2 = state.big_sigma * state.big_sigma;
    return state.norm * state.norm *
           std::exp(-rel * rel / (2.0 * s2) - com * com / (2.0 * S2));
}

Ensemble sample_initial(const GaussianTwoParticleState& state, std::size_t n,
                        std::uint64_t seed) {
    if (n == 0) throw input_error("ensemble size must be positive");
    Ensemble ensemble;
    ensemble.seed = seed;
    ensemble.points.resize(n);
    const rng::StreamFactory noise(seed);
    for (std::size_t i = 0; i < n; ++i) {
        auto stream = noise.stream(0, i);
        const auto [g_rel, g_com] = rng::standard_normal_pair(stream);
        const double rel = state.sigma * g_rel;
        const double com = state.big_sigma * g_com;
        ensemble.points[i] = {(com + rel) / 2.0, (com - rel) / 2.0};
    }
    return ensemble;
}

Ensemble em_step(const Ensemble& ensemble, const VelocityField& field, double dt, double nu,
                 const rng::StreamFactory& noise) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw input_error("dt must be positive");
    if (nu < 0.0 || !std::isfinite(nu)) throw input_error("nu must be nonnegative");

    Ensemble next;
    next.points.resize(ensemble.points.size());
    next.time = ensemble.time + dt;
    next.seed = ensemble.seed;
    next.steps = ensemble.steps + 1;

    const double diffusion = std::sqrt(2.0 * nu * dt);
    for (std::size_t i = 0; i < ensemble.points.size(); ++i) {
        const auto& q = ensemble.points[i];
        const auto b = field.forward_drift(q);
        if (!std::isfinite(b.x1) || !std::isfinite(b.x2)) {
            std::ostringstream msg;
            msg << "non-finite drift at point " << i << " (" << q.x1 << ", " << q.x2 << ")";
            throw numerical_error(msg.str());
        }
        auto stream = noise.stream(ensemble.steps + 1, i);
        const auto [w1, w2] = rng::standard_normal_pair(stream);
        next.points[i] = {q.x1 + b.x1 * dt + diffusion * w1,
                          q.x2 + b.x2 * dt + diffusion * w2};
    }
    return next;
}

ConditionalLaw condition_analytic(const GaussianTwoParticleState& state, double y) {
    const double s2 = state.sigma * state.sigma;
    const double S2 = state.big_sigma * state.big_sigma;
    return {y, y * (S2 - s2) / (s2 + S2), s2 * S2 / (s2 + S2)};
}

double conditional_velocity(const GaussianTwoParticleState& state, double y, double x2) {
    const double s2 = state.sigma * state.sigma;
    const double S2 = state.big_sigma * state.big_sigma;
    return state.nu * ((y - x2) / s2 - (y + x2) / S2);
}

Ensemble condition_ensemble(const Ensemble& ensemble, double y, double delta) {
    if (!(delta > 0.0)) throw input_error("conditioning window delta must be positive");
    Ensemble selected;
    selected.time = ensemble.time;
    selected.seed = ensemble.seed;
    selected.steps = ensemble.steps;
    for (const auto& q : ensemble.points) {
        if (std::abs(q.x1 - y) <= delta) selected.points.push_back(q);
    }
    if (selected.points.empty()) {
        const double suggested = delta * 4.0;
        std::ostringstream msg;
        msg << "no ensemble point satisfies |x1 - " << y << "| <= " << delta
            << "; widen the window (try delta >= " << suggested << ") or enlarge the ensemble";
        throw empty_selection(msg.str(), suggested);
    }
    return selected;
}

Moments1d marginal_x2(const GaussianTwoParticleState& state) {
    const double s2 = state.sigma * state.sigma;
    const double S2 = state.big_sigma * state.big_sigma;
    return {0.0, (s2 + S2) / 4.0};
}

}  // namespace bellctx::nelson
