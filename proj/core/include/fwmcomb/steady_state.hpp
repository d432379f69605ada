#pragma once

#include "fwmcomb/params.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <stdexcept>

namespace fwm {

struct SteadyState {
    std::array<cplx, 3> alpha_c{};
    std::array<cplx, 3> alpha_a{};
    cplx rho_ge{};
    double rho_ee = 0.0;
    double residual_norm = 0.0;
    int iterations = 0;
    bool multistable = false;

    double y() const { return 2.0 * rho_ee - 1.0; }
};

class SolverError : public std::runtime_error {
public:
    enum class Kind { nonconvergence, divergence, singular, underflow };
    SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

using Residual = Eigen::Matrix<cplx, 8, 1>;

// Rotating-frame right-hand sides of the mean-field equations.
// Components: c1, c2, c3, a1, a2, a3, rho_ge, rho_ee.
Residual residual(const SteadyState& s, const SystemParams& p);

struct SolveOptions {
    double tolerance = 1e-12;
    int max_iterations = 100;
    bool check_multistability = true;
};

// Drive-only solution with chi_fwm = 0 and f = 0.
SteadyState linear_solution(const SystemParams& p);

SteadyState solve_steady_state(const SystemParams& p,
                               const std::optional<SteadyState>& guess = std::nullopt,
                               const SolveOptions& opts = {});

// Closed-form FWM amplitude of the plasmon at omega3, neglecting the
// cavity feedback term g3 * alpha_c3.
cplx analytic_alpha_a3(const SystemParams& p, cplx alpha_a1, cplx alpha_a2, double y);

// |alpha_a3|^2 of the f = 0 device.
double reference_intensity(const SystemParams& p, const SolveOptions& opts = {});

double enhancement_factor(const SystemParams& p, const SolveOptions& opts = {});
double enhancement_factor(const SteadyState& s, double reference);

}  // namespace fwm
