#include "fwmcomb/measures.hpp"
#include "fwmcomb/sweep.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace fwm;

namespace {

Eigen::MatrixXd block_diag(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
}

}  // namespace

TEST_SUITE("quantum-measures") {

TEST_CASE("symplectic form")
{
    const Eigen::MatrixXd W = symplectic_form(3);
    CHECK((W.transpose() + W).cwiseAbs().maxCoeff() == 0.0);
    CHECK((W * W + Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-mode squeezed vacuum")
{
    for (double r : {0.1, 0.5, 1.0, 1.7}) {
        const Eigen::Matrix4d V = oracle::tmsv(r);
        CHECK(std::abs(logneg(V, 0, 1) - 2.0 * r) <= 1e-9);
        CHECK(std::abs(logneg(V, 1, 0) - 2.0 * r) <= 1e-9);
        CHECK(logneg(V, 0, 1, LogBase::two) == doctest::Approx(logneg(V, 0, 1) / std::numbers::ln2).epsilon(1e-15));
    }
}

TEST_CASE("separable states give exactly zero")
{
    const Eigen::Matrix4d vac = 0.5 * Eigen::Matrix4d::Identity();
    CHECK(logneg(vac, 0, 1) == 0.0);
    const Eigen::Matrix4d thermal = Eigen::Matrix4d::Identity();
    CHECK(logneg(thermal, 0, 1) == 0.0);

    Eigen::Matrix2d sq;
    sq << 0.5 * std::exp(-1.0), 0, 0, 0.5 * std::exp(1.0);
    CHECK(logneg(block_diag(sq, sq), 0, 1) == 0.0);
}

TEST_CASE("invariance under local symplectic maps")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.05, 1.2);
    for (int t = 0; t < 100; ++t) {
        const double r = u(rng);
        const Eigen::Matrix4d V = oracle::tmsv(r);
        const Eigen::MatrixXd L = block_diag(oracle::random_symplectic(1, rng), oracle::random_symplectic(1, rng));
        const Eigen::MatrixXd W = L * V * L.transpose();
        CHECK(std::abs(logneg(W, 0, 1) - logneg(V, 0, 1)) <= 1e-9);
    }
}

TEST_CASE("unphysical input is rejected")
{
    CHECK_THROWS_AS(logneg(0.1 * Eigen::Matrix4d::Identity(), 0, 1), UnphysicalError);
    Eigen::Matrix4d asym = 0.5 * Eigen::Matrix4d::Identity();
    asym(0, 2) = 0.3;
    CHECK_THROWS_AS(logneg(asym, 0, 1), UnphysicalError);
    CHECK_THROWS_AS(logneg(oracle::tmsv(0.3), 0, 0), std::invalid_argument);
    CHECK_FALSE(is_physical(0.4 * Eigen::Matrix2d::Identity()));
    CHECK(is_physical(0.5 * Eigen::Matrix2d::Identity()));
    CHECK_THROWS_AS(entanglement_potential(0.2 * Eigen::Matrix2d::Identity()), UnphysicalError);
}

TEST_CASE("symplectic eigenvalues agree with the Williamson construction")
{
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> nu(0.5, 3.0);
    for (int t = 0; t < 30; ++t) {
        Eigen::VectorXd d(3);
        for (int k = 0; k < 3; ++k) d[k] = nu(rng);
        Eigen::VectorXd dd(6);
        for (int k = 0; k < 3; ++k) dd[2 * k] = dd[2 * k + 1] = d[k];
        const Eigen::MatrixXd S = oracle::random_symplectic(3, rng);
        const Eigen::MatrixXd V = S * dd.asDiagonal() * S.transpose();
        const Eigen::VectorXd got = symplectic_eigenvalues(V);
        std::sort(d.data(), d.data() + 3);
        CHECK((got - d).cwiseAbs().maxCoeff() <= 1e-9 * d.maxCoeff());
        CHECK((got - oracle::williamson_eigenvalues(V)).cwiseAbs().maxCoeff() <= 1e-9 * d.maxCoeff());
        CHECK(uncertainty_margin(V) >= -1e-10);
    }
}

TEST_CASE("entanglement potential")
{
    CHECK(entanglement_potential(0.5 * Eigen::Matrix2d::Identity()) <= 1e-15);
    CHECK(entanglement_potential(Eigen::Matrix2d::Identity()) == 0.0);
    double last = 0.0;
    for (double r : {0.1, 0.4, 0.8, 1.5}) {
        Eigen::Matrix2d V;
        V << 0.5 * std::exp(-2.0 * r), 0, 0, 0.5 * std::exp(2.0 * r);
        const double ep = entanglement_potential(V);
        CHECK(std::abs(ep - r) <= 1e-9);
        CHECK(std::abs(ep - static_cast<double>(oracle::ep_squeezed_ld(r))) <= 1e-9);
        CHECK(ep > last);
        last = ep;
    }
}

TEST_CASE("output covariance normalization")
{
    SystemParams p = default_params();
    p.chi_fwm = 0.0;
    p.g = {cplx(0.0), cplx(0.0), cplx(0.0)};
    const DriftDiffusion dd = build_drift_diffusion(p, solve_steady_state(p));
    const CovarianceMatrix out = output_covariance(dd.A, dd.D, p);
    CHECK(out.V.rows() == 6);
    CHECK((out.V - 0.5 * Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(out.labels.front() == "q_out1");

    // One detuned cavity mode, any decay rate.
    for (double kappa : {1e-3, 0.07, 2.0}) {
        SystemParams q = p;
        q.kappa[1] = kappa;
        q.r[1] = std::sqrt(2.0 * kappa);
        q.omega_c[1] = q.omega2 + 0.3;
        const DriftDiffusion e = build_drift_diffusion(q, SteadyState{});
        const CovarianceMatrix o = output_covariance(e.A, e.D, q);
        CHECK(o.V(2, 2) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(o.V(3, 3) == doctest::Approx(0.5).epsilon(1e-12));
    }

    Mat12 bad = dd.A;
    bad(0, 0) = 1.0;
    CHECK_THROWS_AS(output_covariance(bad, dd.D, p), UnstableError);
    CHECK_THROWS_AS(output_covariance(dd.A, 2.0 * dd.D, p), std::invalid_argument);
}

TEST_CASE("default operating point is entangled at the output")
{
    const SystemParams p = default_params();
    const DriftDiffusion dd = build_drift_diffusion(p, solve_steady_state(p));
    const CovarianceMatrix out = output_covariance(dd.A, dd.D, p);
    CHECK(is_physical(out.V));
    const double e12 = logneg(out.V, 0, 1), e13 = logneg(out.V, 0, 2), e23 = logneg(out.V, 1, 2);
    CHECK(std::isfinite(e12));
    CHECK(e13 >= 0.0);
    CHECK(std::max({e12, e13, e23}) > 0.0);
    CHECK(logneg(out.V, 0, 1, LogBase::two) == doctest::Approx(e12 / std::numbers::ln2).epsilon(1e-12));
}

}
