#pragma once

#include "fwmcomb/fluctuations.hpp"
#include "fwmcomb/params.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace fwm {

class UnphysicalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Block-diagonal [[0,1],[-1,0]] per mode.
Eigen::MatrixXd symplectic_form(int modes);

// Ascending symplectic eigenvalues, one per mode.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& V);

// Smallest eigenvalue of V + (i/2) Omega.
double uncertainty_margin(const Eigen::MatrixXd& V);
bool is_physical(const Eigen::MatrixXd& V, double tol = 1e-10);

// Modes are 0-based indices into V.
double logneg(const Eigen::MatrixXd& V, int mode_a, int mode_b, LogBase base = LogBase::natural);

double entanglement_potential(const Eigen::Matrix2d& V1, LogBase base = LogBase::natural);

// Zero-frequency covariance of the three cavity output fields,
// c_out = r c + c_in. Needs a Hurwitz drift.
CovarianceMatrix output_covariance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D, const SystemParams& p);

// Input noise matrix with B (1/2) B^T = D.
Mat12 input_matrix(const SystemParams& p);

Eigen::Matrix4d two_mode_block(const Eigen::MatrixXd& V, int mode_a, int mode_b);

}  // namespace fwm
