#include "oracles.hpp"

#include "rsfem/errors.hpp"
#include "rsfem/fem.hpp"
#include "rsfem/modal_solution.hpp"
#include "rsfem/mode_factor.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace rsfem;
using std::numbers::pi;

namespace {

SchemeConfig scheme(Scheme s, double tau, int N)
{
    SchemeConfig c;
    c.scheme = s;
    c.alpha = 0.5;
    c.gamma = 1.0;
    c.tau = tau;
    c.N = N;
    return c;
}

} // namespace

TEST(ModeFactor, ExactMatchesKernelIntegral)
{
    const ModeFactor f = ModeFactor::exact(0.5, 1.0, 0.1);
    EXPECT_TRUE(f.is_exact());
    EXPECT_TRUE(f.has_limit());
    for (double lambda : {pi * pi, 1e3, 1e7}) {
        EXPECT_NEAR(f.value(lambda), oracle::talbot_mode(lambda, 1.0, 0.5, 0.1), 1e-10);
    }
}

TEST(ModeFactor, DiscreteMatchesRecurrence)
{
    for (Scheme s : {Scheme::BE, Scheme::SBD}) {
        const SchemeConfig c = scheme(s, 0.01, 10);
        const ModeFactor f = ModeFactor::discrete(c);
        for (double lambda : {pi * pi, 250.0, 1e5, 1e9}) {
            const double want = scalar_recurrence(c, 1.0, lambda, 1.0).back();
            EXPECT_NEAR(f.value(lambda), want, 1e-13 + 1e-12 * std::abs(want)) << scheme_name(s) << " " << lambda;
        }
    }
    SchemeConfig origin = scheme(Scheme::BE, 0.01, 10);
    origin.include_history_origin = true;
    EXPECT_FALSE(ModeFactor::discrete(origin).has_limit());
    EXPECT_NEAR(ModeFactor::discrete(origin).value(1e4), scalar_recurrence(origin, 1.0, 1e4, 1.0).back(), 1e-13);
}

TEST(ModeFactorTable, InterpolantMatchesDirect)
{
    for (const ModeFactor& f : {ModeFactor::exact(0.5, 1.0, 0.01), ModeFactor::discrete(scheme(Scheme::SBD, 1e-4, 1000)),
                                ModeFactor::discrete(scheme(Scheme::BE, 0.02, 5))}) {
        const ModeFactorTable table(f);
        EXPECT_GT(table.lambda0(), 0.0);
        double scale = std::abs(table.limit());
        for (double lambda = table.lambda0(); lambda < 1e12; lambda *= 3.7) {
            scale = std::max(scale, std::abs(f.scaled(1.0 / lambda)));
        }
        for (double lambda = table.lambda0() * 1.01; lambda < 1e12; lambda *= 3.7) {
            EXPECT_NEAR(table.scaled(1.0 / lambda), f.scaled(1.0 / lambda), 1e-10 * scale) << f.describe();
        }
        for (double lambda : {1.0, 30.0}) {
            EXPECT_EQ(table.value(lambda), f.value(lambda));
        }
    }
}

TEST(ModalSolution, SingleModeExample)
{
    const ModalSolution ms(SmoothSine{2}, 0.5, 1.0);
    const ModalSnapshot snap = ms.exact_at(0.1);
    const double u2 = oracle::talbot_mode(4 * pi * pi, 1.0, 0.5, 0.1);
    for (double x : {0.1, 0.3, 0.77}) {
        const auto [val, grad] = snap.at({x, 0.0});
        EXPECT_NEAR(val, u2 * std::sin(2 * pi * x), 1e-10);
        EXPECT_NEAR(grad[0], u2 * 2 * pi * std::cos(2 * pi * x), 1e-9);
    }
    EXPECT_NEAR(snap.l2_norm(), u2 / std::sqrt(2.0), 1e-10);
}

TEST(ModalSolution, StepSeriesAgainstTalbotSum)
{
    const ModalSolution ms(Step{0.5}, 0.5, 1.0);
    const double t = 0.1;
    const ModalSnapshot snap = ms.exact_at(t);
    EXPECT_TRUE(snap.subtracted());
    for (double x : {0.2, 0.45, 0.5, 0.8}) {
        double s = 0.0;
        for (int j = 1; j <= 3000; ++j) {
            const double c = std::sqrt(2.0) * (1.0 - std::cos(j * pi * 0.5)) / (j * pi);
            s += c * oracle::talbot_mode(j * j * pi * pi, 1.0, 0.5, t) * std::sqrt(2.0) * std::sin(j * pi * x);
        }
        EXPECT_NEAR(snap.at({x, 0.0}).first, s, 1e-7) << "x " << x;
        EXPECT_NEAR(exact_solution(ms, {x, 0.0}, t).first, s, 1e-7);
    }
}

TEST(ModalSolution, ParsevalAgreesWithQuadrature)
{
    const ModalSolution ms(Step{0.5}, 0.5, 1.0);
    const ModalSnapshot snap = ms.exact_at(0.1);
    const FemSpace s = assemble(build_interval_mesh(512));
    const ErrorNorms e = error_norms(s, Vector(s.n_dof(), 0.0), snap);
    EXPECT_NEAR(e.l2, snap.l2_norm(), 1e-8);
    EXPECT_NEAR(ms.datum_norm(), std::sqrt(0.5), 1e-15);
}

TEST(ModalSolution, DiracMisalignedPointFinite)
{
    const ModalSolution ms(Dirac{0.5}, 0.5, 1.0);
    const ModalSnapshot snap = ms.exact_at(0.01);
    const double v = snap.at({0.5, 0.0}).first;
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0);
    // symmetric about the mass
    EXPECT_NEAR(snap.at({0.3, 0.0}).first, snap.at({0.7, 0.0}).first, 1e-10);
}

TEST(ModalSolution, DiscreteFactorSnapshot)
{
    const SchemeConfig c = scheme(Scheme::SBD, 0.01, 10);
    const ModalSolution ms(SmoothSine{2}, 0.5, 1.0);
    const ModalSnapshot snap = ms.at(ModeFactor::discrete(c));
    const double uN = scalar_recurrence(c, 1.0, 4 * pi * pi, 1.0).back();
    EXPECT_NEAR(snap.at({0.3, 0.0}).first, uN * std::sin(0.6 * pi), 1e-12);
}

TEST(ModalSolution, SquareStepAgainstDoubleSeries)
{
    const ModalSolution ms(Step2D{0.5}, 0.5, 1.0);
    EXPECT_EQ(ms.domain(), Domain::Square);
    const ModalSnapshot snap = ms.exact_at(0.1);
    const Point x{0.3, 0.4};
    const int J = 600;
    std::vector<double> cx(J + 1);
    std::vector<double> cy(J + 1);
    for (int j = 1; j <= J; ++j) {
        cx[j] = (1.0 - std::cos(j * pi * 0.5)) / (j * pi);
        cy[j] = (1.0 - std::cos(j * pi)) / (j * pi);
    }
    double s = 0.0;
    for (int j = 1; j <= J; ++j) {
        for (int k = 1; k <= J; k += 2) {
            const double lambda = pi * pi * (j * j + k * k);
            s += 4.0 * cx[j] * cy[k] * oracle::talbot_mode(lambda, 1.0, 0.5, 0.1) * std::sin(j * pi * x[0]) *
                 std::sin(k * pi * x[1]);
        }
    }
    EXPECT_NEAR(snap.at(x).first, s, 2e-5);
}

TEST(ModalSolution, FailuresReported)
{
    ModalOptions tight;
    tight.max_modes_1d = 10;
    tight.subtract_singular = false;
    const ModalSolution ms(Dirac{0.5}, 0.5, 1.0, tight);
    EXPECT_THROW((void)ms.exact_at(0.1), TruncationFailure);
    const ModalSolution ok(Step{0.5}, 0.5, 1.0);
    EXPECT_THROW((void)ok.exact_at(0.0), InvalidArgument);
    const FemSpace s = assemble(build_interval_mesh(8));
    EXPECT_THROW((void)error_norms(s, Vector(s.n_dof(), 0.0), ok, -1.0), InvalidArgument);
}

TEST(ModalSolution, SquareRelativeTailAcceptance)
{
    SchemeConfig c = scheme(Scheme::SBD, 1e-4, 100);
    const ModalSolution relaxed(Step2D{0.5}, 0.5, 1.0);
    const ModalSnapshot snap = relaxed.at(ModeFactor::discrete(c));
    EXPECT_LE(snap.truncation(), 2000);
    EXPECT_LE(snap.l2_bound(), 1e-4 * snap.l2_norm() + 1e-8);

    ModalOptions strict;
    strict.rel_tol_2d = 0.0;
    strict.max_modes_2d = 200;
    const ModalSolution tight(Step2D{0.5}, 0.5, 1.0, strict);
    EXPECT_THROW((void)tight.at(ModeFactor::discrete(c)), TruncationFailure);
}
