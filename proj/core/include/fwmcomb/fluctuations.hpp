#pragma once

#include "fwmcomb/params.hpp"
#include "fwmcomb/steady_state.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace fwm {

// Quadrature order: (q,p) of c1, c2, c3, a1, a2, a3 with q = (o + o^dag)/sqrt2.
using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat6c = Eigen::Matrix<cplx, 6, 6>;

struct DriftDiffusion {
    Mat12 A;
    Mat12 D;
    bool hurwitz = false;
};

// Vacuum variance is 1/2 per quadrature.
struct CovarianceMatrix {
    Eigen::MatrixXd V;
    std::vector<std::string> labels;
};

struct StabilityReport {
    Eigen::VectorXcd eigenvalues;
    double max_real = 0.0;
    bool hurwitz = false;
};

class UnstableError : public std::runtime_error {
public:
    UnstableError(const std::string& what, cplx eigenvalue)
        : std::runtime_error(what), eigenvalue_(eigenvalue) {}
    cplx eigenvalue() const { return eigenvalue_; }

private:
    cplx eigenvalue_;
};

// Complex-form coefficients: d(do)/dt = M do + N do^dag + noise.
struct DriftCoefficients {
    Mat6c M;
    Mat6c N;
};

DriftCoefficients drift_coefficients(const SystemParams& p, const SteadyState& s);
Mat12 build_drift(const SystemParams& p, const SteadyState& s);
Mat12 build_diffusion(const SystemParams& p);
DriftDiffusion build_drift_diffusion(const SystemParams& p, const SteadyState& s);

StabilityReport stability(const Eigen::MatrixXd& A);

// Bartels-Stewart on a complex Schur form of A. Throws UnstableError if A is not Hurwitz.
CovarianceMatrix solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D);
double lyapunov_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& V, const Eigen::MatrixXd& D);

std::vector<std::string> mode_labels();

}  // namespace fwm
