#include "oracles.hpp"

#include "rsfem/cq.hpp"
#include "rsfem/errors.hpp"
#include "rsfem/fem.hpp"
#include "rsfem/modal_solution.hpp"
#include "rsfem/stepper.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace rsfem;

namespace {

SchemeConfig config(Scheme s, double alpha, double tau, int N, bool origin = false)
{
    SchemeConfig c;
    c.scheme = s;
    c.alpha = alpha;
    c.gamma = 1.0;
    c.tau = tau;
    c.N = N;
    c.include_history_origin = origin;
    return c;
}

std::vector<double> oracle_scalar(const SchemeConfig& c, double lambda)
{
    if (c.scheme == Scheme::BE) {
        return oracle::scalar_be(lambda, c.alpha, c.gamma, c.tau, c.N, c.include_history_origin,
                                 oracle::weights_be(c.alpha, c.N));
    }
    // (3/2)^mu (1 - xi)^mu (1 - xi/3)^mu
    std::vector<double> w(static_cast<std::size_t>(c.N) + 1, 0.0);
    for (int n = 0; n <= c.N; ++n) {
        for (int j = 0; j <= n; ++j) {
            w[static_cast<std::size_t>(n)] += oracle::binomial(c.alpha, j) * std::pow(-1.0, j) *
                                              oracle::binomial(c.alpha, n - j) * std::pow(-1.0 / 3.0, n - j);
        }
        w[static_cast<std::size_t>(n)] *= std::pow(1.5, c.alpha);
    }
    return oracle::scalar_sbd(lambda, c.alpha, c.gamma, c.tau, c.N, w);
}

void check_mode_decoupling(const FemSpace& space, const SchemeConfig& cfg)
{
    oracle::Dense X;
    const auto ev = oracle::generalized_eigen(oracle::to_dense(space.stiffness), oracle::to_dense(space.mass), X);
    const std::size_t n = space.n_dof();
    for (std::size_t k = 0; k < n; ++k) {
        Vector v(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = X[i][k];
        }
        const double vmax = std::abs(v[static_cast<std::size_t>(
            std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }) -
            v.begin())]);
        const DiscreteTrajectory traj = run_scheme(space, cfg, v);
        const auto u = oracle_scalar(cfg, ev[k]);
        ASSERT_EQ(traj.snapshots.size(), u.size());
        double worst = 0.0;
        for (std::size_t s = 0; s < u.size(); ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                worst = std::max(worst, std::abs(traj.snapshots[s][i] - u[s] * v[i]) / vmax);
            }
        }
        EXPECT_LT(worst, 1e-10) << scheme_name(cfg.scheme) << " mode " << k << " lambda " << ev[k];
    }
}

} // namespace

TEST(ScalarRecurrence, BackwardEulerWithOriginHandValue)
{
    const SchemeConfig c = config(Scheme::BE, 0.5, 0.1, 1, true);
    const auto lib = scalar_recurrence(c, 1.0, 1.0, 1.0);
    // 10 (U - 1) + sqrt(10) (U - 1/2) + U = 0
    const double hand = (10.0 + std::sqrt(10.0) / 2.0) / (11.0 + std::sqrt(10.0));
    EXPECT_NEAR(lib[1], hand, 1e-14);
    EXPECT_NEAR(lib[1], 0.817746, 1e-6);
    EXPECT_NEAR(oracle_scalar(c, 1.0)[1], hand, 1e-14);
}

TEST(ScalarRecurrence, MatchesOracleRecurrences)
{
    for (Scheme s : {Scheme::BE, Scheme::SBD}) {
        for (bool origin : {false, true}) {
            if (s == Scheme::SBD && origin) {
                continue;
            }
            for (double alpha : {0.1, 0.5, 0.9}) {
                const SchemeConfig c = config(s, alpha, 0.02, 60, origin);
                for (double lambda : {1.0, std::numbers::pi * std::numbers::pi, 1e4}) {
                    const auto lib = scalar_recurrence(c, 1.0, lambda, 1.0);
                    const auto ref = oracle_scalar(c, lambda);
                    for (std::size_t n = 0; n < lib.size(); ++n) {
                        EXPECT_NEAR(lib[n], ref[n], 1e-12) << scheme_name(s) << " n=" << n;
                    }
                }
            }
        }
    }
}

TEST(ScalarRecurrence, MassScalingInvariant)
{
    const SchemeConfig c = config(Scheme::SBD, 0.5, 0.05, 20);
    const auto a = scalar_recurrence(c, 1.0, 30.0, 1.0);
    const auto b = scalar_recurrence(c, 0.25, 7.5, 1.0);
    for (std::size_t n = 0; n < a.size(); ++n) {
        EXPECT_NEAR(a[n], b[n], 1e-14);
    }
}

TEST(Stepper, DiscreteEigenvaluesOnInterval)
{
    const int K = 16;
    const FemSpace s = assemble(build_interval_mesh(K));
    oracle::Dense X;
    auto ev = oracle::generalized_eigen(oracle::to_dense(s.stiffness), oracle::to_dense(s.mass), X);
    std::sort(ev.begin(), ev.end());
    for (int k = 1; k < K; ++k) {
        EXPECT_NEAR(ev[static_cast<std::size_t>(k - 1)], oracle::discrete_eigenvalue_1d(k, 1.0 / K),
                    1e-9 * ev[static_cast<std::size_t>(k - 1)]);
    }
}

TEST(Stepper, SineVectorsAreDiscreteEigenvectors)
{
    const int K = 12;
    const double h = 1.0 / K;
    const FemSpace s = assemble(build_interval_mesh(K));
    for (int k : {1, 5, 11}) {
        const Vector v = interpolate(s, [&](const Point& p) { return std::sin(k * std::numbers::pi * p[0]); });
        const SchemeConfig c = config(Scheme::SBD, 0.7, 0.01, 25);
        const auto traj = run_scheme(s, c, v);
        const auto u = oracle_scalar(c, oracle::discrete_eigenvalue_1d(k, h));
        for (std::size_t n = 0; n < u.size(); ++n) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                EXPECT_NEAR(traj.snapshots[n][i], u[n] * v[i], 1e-10);
            }
        }
    }
}

TEST(Stepper, ModeDecouplingInterval)
{
    const FemSpace s = assemble(build_interval_mesh(16));
    ASSERT_EQ(s.n_dof(), 15u);
    for (double alpha : {0.2, 0.5, 0.9}) {
        check_mode_decoupling(s, config(Scheme::BE, alpha, 0.01, 30));
        check_mode_decoupling(s, config(Scheme::BE, alpha, 0.01, 30, true));
        check_mode_decoupling(s, config(Scheme::SBD, alpha, 0.01, 30));
    }
}

TEST(Stepper, ModeDecouplingSquare)
{
    const FemSpace s = assemble(build_square_mesh(4));
    ASSERT_EQ(s.n_dof(), 9u);
    check_mode_decoupling(s, config(Scheme::BE, 0.5, 0.02, 20));
    check_mode_decoupling(s, config(Scheme::SBD, 0.5, 0.02, 20));
}

TEST(Stepper, ZeroDatumStaysZero)
{
    const FemSpace s = assemble(build_interval_mesh(10));
    for (Scheme sc : {Scheme::BE, Scheme::SBD}) {
        const auto traj = run_scheme(s, config(sc, 0.5, 0.1, 5), Vector(s.n_dof(), 0.0));
        for (const Vector& u : traj.snapshots) {
            for (double x : u) {
                EXPECT_EQ(x, 0.0);
            }
        }
    }
}

TEST(Stepper, LinearInDatumAndForcing)
{
    const FemSpace s = assemble(build_interval_mesh(20));
    const Vector a = l2_project(s, Step{0.4});
    const Vector b = l2_project(s, SmoothSine{3});
    Vector ab(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab[i] = 2.0 * a[i] - 0.5 * b[i];
    }
    const Forcing f = [&](double t) {
        Vector r = load_vector(s, SmoothSine{1});
        for (double& x : r) {
            x *= std::cos(3.0 * t);
        }
        return r;
    };
    for (Scheme sc : {Scheme::BE, Scheme::SBD}) {
        const SchemeConfig c = config(sc, 0.4, 0.05, 12);
        const auto ta = run_scheme(s, c, a);
        const auto tb = run_scheme(s, c, b);
        const auto tab = run_scheme(s, c, ab);
        const auto tf = run_scheme(s, c, Vector(a.size(), 0.0), f);
        const auto taf = run_scheme(s, c, a, f);
        for (std::size_t n = 0; n < ta.snapshots.size(); ++n) {
            for (std::size_t i = 0; i < a.size(); ++i) {
                EXPECT_NEAR(tab.snapshots[n][i], 2.0 * ta.snapshots[n][i] - 0.5 * tb.snapshots[n][i], 1e-12);
                EXPECT_NEAR(taf.snapshots[n][i], ta.snapshots[n][i] + tf.snapshots[n][i], 1e-12);
            }
        }
        EXPECT_GT(norm2(tf.final()), 0.0);
    }
}

TEST(Stepper, SnapshotsAndTimes)
{
    const FemSpace s = assemble(build_interval_mesh(8));
    SchemeConfig c = config(Scheme::SBD, 0.5, 0.025, 4);
    const Vector v = l2_project(s, SmoothSine{2});
    const auto full = run_scheme(s, c, v);
    ASSERT_EQ(full.snapshots.size(), 5u);
    EXPECT_NEAR(full.final_time(), 0.1, 1e-15);
    EXPECT_EQ(full.initial(), v);
    c.keep_snapshots = false;
    const auto slim = run_scheme(s, c, v);
    ASSERT_EQ(slim.snapshots.size(), 2u);
    EXPECT_EQ(slim.final(), full.final());
    EXPECT_EQ(slim.times.back(), full.times.back());
}

TEST(Stepper, InvalidConfigurations)
{
    const FemSpace s = assemble(build_interval_mesh(8));
    const Vector v(s.n_dof(), 1.0);
    EXPECT_THROW((void)run_scheme(s, config(Scheme::BE, 0.5, 0.0, 4), v), InvalidArgument);
    EXPECT_THROW((void)run_scheme(s, config(Scheme::BE, 0.5, 0.1, 0), v), InvalidArgument);
    EXPECT_THROW((void)run_scheme(s, config(Scheme::SBD, 1.2, 0.1, 4), v), InvalidArgument);
    EXPECT_THROW((void)run_scheme(s, config(Scheme::SBD, 0.5, 0.1, 4), Vector(3, 0.0)), InvalidArgument);
    EXPECT_EQ(parse_projection("ritz"), Projection::Ritz);
    EXPECT_THROW((void)parse_projection("h1"), InvalidArgument);
}

TEST(Stepper, TemporalHalvingExampleA)
{
    const FemSpace s = assemble(build_interval_mesh(2048));
    const ModalSolution exact(SmoothSine{2}, 0.5, 1.0);
    const Vector v = l2_project(s, SmoothSine{2});
    const double norm = 1.0 / std::sqrt(2.0);
    auto err = [&](Scheme sc, int N) {
        SchemeConfig c = config(sc, 0.5, 0.1 / N, N);
        c.keep_snapshots = false;
        return error_norms(s, run_scheme(s, c, v).final(), exact, 0.1).l2 / norm;
    };
    const double be40 = err(Scheme::BE, 40);
    const double be80 = err(Scheme::BE, 80);
    EXPECT_NEAR(be40 / be80, 2.0, 0.15);
    EXPECT_NEAR(be80, 2.03e-4, 0.3e-4);
    const double sbd40 = err(Scheme::SBD, 40);
    const double sbd80 = err(Scheme::SBD, 80);
    EXPECT_NEAR(sbd40 / sbd80, 4.0, 0.4);
    EXPECT_NEAR(sbd80, 3.14e-6, 1.0e-6);
}

TEST(Stepper, HistoryOriginTermAndTemporalRate)
{
    // Single mode of example (a); rate over tau = t/40 -> t/320.
    const double lambda = 4.0 * std::numbers::pi * std::numbers::pi;
    for (double alpha : {0.3, 0.5, 0.7}) {
        const double exact = oracle::talbot_mode(lambda, 1.0, alpha, 0.1);
        auto rate = [&](bool origin) {
            std::vector<double> e;
            for (int N : {40, 80, 160, 320}) {
                e.push_back(std::abs(scalar_recurrence(config(Scheme::BE, alpha, 0.1 / N, N, origin), 1.0, lambda,
                                                       1.0)
                                         .back() -
                                     exact));
            }
            return std::log2(e[2] / e[3]);
        };
        // without the j = 0 term the scheme is first order
        EXPECT_NEAR(rate(false), 1.0, 0.05) << "alpha " << alpha;
        // keeping it limits the rate to 1 - alpha for this model
        EXPECT_NEAR(rate(true), 1.0 - alpha, 0.05) << "alpha " << alpha;
    }
}
