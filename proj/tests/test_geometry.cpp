#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "penrose/geometry.hpp"
#include "penrose/graph.hpp"

using namespace penrose;

namespace {

Jet random_jet(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Jet jet;
    jet.dim = n;
    jet.grad = Eigen::VectorXd::NullaryExpr(n, [&](int) { return gauss(rng); });
    Eigen::MatrixXd h = Eigen::MatrixXd::NullaryExpr(n, n, [&](int, int) { return gauss(rng); });
    jet.hess = 0.5 * (h + h.transpose());
    return jet;
}

Eigen::MatrixXd random_rotation(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(n, n, [&](int, int) { return gauss(rng); });
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
}

// Schwarzschild n=3, m=1/2 jet at x = (2,0,0), from u(r) = 2 sqrt(r-1).
Jet schwarzschild_point_jet() {
    Jet jet = Jet::zero(3);
    jet.grad << 1.0, 0.0, 0.0;
    jet.hess.diagonal() << -0.5, 0.5, 0.5;
    return jet;
}

}  // namespace

TEST_CASE("elementary symmetric functions of known matrices") {
    Eigen::MatrixXd d = Eigen::Vector3d(1, 2, 3).asDiagonal();
    CHECK(elementary_symmetric(d, 1) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(elementary_symmetric(d, 2) == doctest::Approx(11.0).epsilon(1e-14));
    CHECK(elementary_symmetric(d, 3) == doctest::Approx(6.0).epsilon(1e-14));

    for (int n = 2; n <= 7; ++n) {
        Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
        double binom = 1.0;
        for (int k = 1; k <= n; ++k) {
            binom = binom * (n - k + 1) / k;
            CHECK(elementary_symmetric(id, k) == doctest::Approx(binom).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(elementary_symmetric(d, 0), std::invalid_argument);
    CHECK_THROWS_AS(elementary_symmetric(d, 4), std::invalid_argument);
}

TEST_CASE("conjugation invariance: rotated diag(1,1,-1/2) keeps S_2 = 0, S_3 = -0.5") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd q = random_rotation(rng, 3);
        const Eigen::MatrixXd a = q * Eigen::Vector3d(1.0, 1.0, -0.5).asDiagonal() * q.transpose();
        CHECK(elementary_symmetric(a, 2) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(std::abs(elementary_symmetric(a, 2)) < 1e-12);
        CHECK(elementary_symmetric(a, 3) == doctest::Approx(-0.5).epsilon(1e-12));
    }
}

TEST_CASE("minor-sum recursion agrees with eigenvalue symmetric functions") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int n = 2; n <= 7; ++n) {
        for (int trial = 0; trial < 50; ++trial) {
            Eigen::MatrixXd raw =
                Eigen::MatrixXd::NullaryExpr(n, n, [&](int, int) { return gauss(rng); });
            const Eigen::MatrixXd h = 0.5 * (raw + raw.transpose());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
            const Eigen::VectorXd ev = es.eigenvalues();
            const auto sk = elementary_symmetric_all(h);
            // brute-force e_k of the eigenvalues
            for (int k = 1; k <= n; ++k) {
                double expected = 0.0;
                std::vector<int> comb(k);
                std::function<void(int, int, double)> rec = [&](int start, int depth, double prod) {
                    if (depth == k) {
                        expected += prod;
                        return;
                    }
                    for (int i = start; i < n; ++i) rec(i + 1, depth + 1, prod * ev(i));
                };
                rec(0, 0, 1.0);
                CHECK(sk[k - 1] ==
                      doctest::Approx(expected).epsilon(1e-8).scale(std::abs(expected) + 1.0));
            }
        }
    }
}

TEST_CASE("flat jet gives the flat hyperplane") {
    const ShapeData sd = shape_data(Jet::zero(3));
    CHECK(sd.w == 1.0);
    CHECK(sd.theta == 1.0);
    CHECK(sd.shape.norm() == 0.0);
    CHECK(sd.sym_funcs.norm() == 0.0);
    CHECK(sd.ellipticity == Ellipticity::degenerate);

    const TangentialField tf = tangential_field(Jet::zero(3), sd);
    CHECK(tf.x_components.norm() == 0.0);
    CHECK(tf.norm_g == 0.0);

    const JacobiCoefficients jc = jacobi_coefficients(sd);
    CHECK(jc.newton.norm() == 0.0);
    CHECK(jc.zeroth == 0.0);
}

TEST_CASE("Schwarzschild point: shape data matches the hand-evaluated profile") {
    const Jet jet = schwarzschild_point_jet();
    const ShapeData sd = shape_data(jet);

    CHECK(sd.w == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(sd.theta == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

    // eigenvalues {u'/(rW), u'/(rW), u''/W^3} = {1/(2 sqrt2), 1/(2 sqrt2), -1/(4 sqrt2)}
    CHECK(sd.eigenvalues(0) == doctest::Approx(-0.17677669529663687).epsilon(1e-12));
    CHECK(sd.eigenvalues(1) == doctest::Approx(0.35355339059327373).epsilon(1e-12));
    CHECK(sd.eigenvalues(2) == doctest::Approx(0.35355339059327373).epsilon(1e-12));

    CHECK(sd.s(1) == doctest::Approx(0.53033008588991071).epsilon(1e-12));
    CHECK(std::abs(sd.s(2)) < 1e-12);
    CHECK(sd.s(3) == doctest::Approx(-0.022097086912079608).epsilon(1e-12));
    CHECK(sd.scalar_curvature() == doctest::Approx(0.0).epsilon(1e-12));

    const EllipticityReport rep = ellipticity_classify(sd, 1e-10);
    CHECK(rep.classification == Ellipticity::elliptic_positive);
    CHECK(rep.rank == 3);
    // Newton operator eigenvalues S_1 - lambda_i
    Eigen::VectorXd ge = rep.newton_eigenvalues;
    std::sort(ge.data(), ge.data() + ge.size());
    CHECK(ge(0) == doctest::Approx(0.17677669529663687).epsilon(1e-12));
    CHECK(ge(1) == doctest::Approx(0.17677669529663687).epsilon(1e-12));
    CHECK(ge(2) == doctest::Approx(0.70710678118654746).epsilon(1e-12));

    const JacobiCoefficients jc = jacobi_coefficients(sd);
    CHECK(jc.zeroth == doctest::Approx(0.066291260736238831).epsilon(1e-12));

    const TangentialField tf = tangential_field(jet, sd);
    CHECK(tf.x_components(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(tf.x_components.tail(2).norm() == 0.0);
    CHECK(tf.norm_g == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("hemisphere apex: A = -I, S = (-3, 3, -1), Jacobi coefficient +3") {
    SphereCapGraph cap(3, 1.0);
    const Jet jet = cap.jet(Eigen::Vector3d::Zero());
    const ShapeData sd = shape_data(jet);
    CHECK((sd.shape + Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-14);
    CHECK(sd.s(1) == doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(sd.s(2) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(sd.s(3) == doctest::Approx(-1.0).epsilon(1e-14));

    const JacobiCoefficients jc = jacobi_coefficients(sd);
    CHECK((jc.newton + 2.0 * Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-13);
    CHECK(jc.zeroth == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("ellipticity classification edge cases") {
    // normal-flipped Schwarzschild point: eigenvalues (-1,-1,1/2) pattern
    Jet jet = Jet::zero(3);
    jet.hess.diagonal() << -1.0, -1.0, 0.5;
    const ShapeData sd = shape_data(jet);
    const EllipticityReport rep = ellipticity_classify(sd, 1e-10);
    CHECK(rep.classification == Ellipticity::elliptic_negative);
    Eigen::VectorXd ge = rep.newton_eigenvalues;
    std::sort(ge.data(), ge.data() + ge.size());
    CHECK(ge(0) == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(ge(1) == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(ge(2) == doctest::Approx(-0.5).epsilon(1e-13));

    // rank-1: degenerate
    Jet rank1 = Jet::zero(3);
    rank1.hess.diagonal() << 5.0, 0.0, 0.0;
    const ShapeData sd1 = shape_data(rank1);
    CHECK(ellipticity_classify(sd1, 1e-10).classification == Ellipticity::degenerate);
    CHECK(sd1.rank == 1);
    CHECK(std::abs(sd1.s(3)) < 1e-12);
}

TEST_CASE("invalid jets are rejected") {
    Jet jet = Jet::zero(3);
    jet.grad(0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(shape_data(jet), std::invalid_argument);
    Jet tiny = Jet::zero(1);
    CHECK_THROWS_AS(shape_data(tiny), std::invalid_argument);
}

TEST_CASE("randomized jets: real eigenvalues, Newton trace, decomposition") {
    std::mt19937_64 rng(7);
    for (int n = 2; n <= 6; ++n) {
        for (int trial = 0; trial < 40; ++trial) {
            const Jet jet = random_jet(rng, n);
            const ShapeData sd = shape_data(jet);

            // A is self-adjoint w.r.t. g: imaginary parts vanish
            Eigen::EigenSolver<Eigen::MatrixXd> es(sd.shape);
            CHECK(es.eigenvalues().imag().cwiseAbs().maxCoeff() < 1e-10);

            // trace(G) = (n-1) S_1 exactly
            CHECK(sd.newton.trace() ==
                  doctest::Approx((n - 1) * sd.s(1)).epsilon(1e-12).scale(1.0 + std::abs(sd.s(1))));

            // metric_inv * metric = I
            CHECK((sd.metric_inv * sd.metric - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-12);

            // |X|_g^2 + Theta^2 = 1
            const TangentialField tf = tangential_field(jet, sd);
            CHECK(tf.norm_g * tf.norm_g + sd.theta * sd.theta ==
                  doctest::Approx(1.0).epsilon(1e-12));

            // X = g^{ij} f_j, against an explicit inverse-metric solve
            const Eigen::VectorXd x_ref = sd.metric.ldlt().solve(jet.grad);
            CHECK((tf.x_components - x_ref).norm() < 1e-12 * (1.0 + x_ref.norm()));

            // W^2 = 1 + |grad|^2 from inputs
            CHECK(sd.w * sd.w == doctest::Approx(1.0 + jet.grad.squaredNorm()).epsilon(1e-14));
        }
    }
}

TEST_CASE("ellipticity equivalences on random S_2 = 0 samples") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double guard = 1e-12;
    for (int n = 3; n <= 7; ++n) {
        int checked = 0;
        while (checked < 1000) {
            // eigenvalues with e_2 = 0: solve the last one from the linear condition
            Eigen::VectorXd lam(n);
            for (int i = 0; i < n - 1; ++i) lam(i) = gauss(rng);
            double e1 = 0.0, e2 = 0.0;
            for (int i = 0; i < n - 1; ++i) {
                for (int j = i + 1; j < n - 1; ++j) e2 += lam(i) * lam(j);
                e1 += lam(i);
            }
            if (std::abs(e1) < 1e-3) continue;
            lam(n - 1) = -e2 / e1;

            const bool make_rank1 = (checked % 13 == 0);
            if (make_rank1) {
                lam.setZero();
                lam(0) = 1.0 + std::abs(gauss(rng));
            }

            const Eigen::MatrixXd q = random_rotation(rng, n);
            const Eigen::MatrixXd a = q * lam.asDiagonal() * q.transpose();

            const auto sk = elementary_symmetric_all(a);
            REQUIRE(std::abs(sk[1]) < 1e-8);  // the sample construction itself

            Jet jet = Jet::zero(n);
            jet.hess = 0.5 * (a + a.transpose());
            const ShapeData sd = shape_data(jet);
            const EllipticityReport rep = ellipticity_classify(sd, guard);

            const bool s3_nonzero = std::abs(sk[2]) > guard;
            const bool rank_ge_2 = sd.rank >= 2;
            const bool uniform_sign = rep.classification != Ellipticity::degenerate;
            CHECK(s3_nonzero == rank_ge_2);
            CHECK(s3_nonzero == uniform_sign);
            ++checked;
        }
    }
}
