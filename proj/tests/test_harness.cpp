#include "rsfem/errors.hpp"
#include "rsfem/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rsfem;

namespace {

ExperimentConfig small_temporal(Scheme s)
{
    ExperimentConfig c;
    c.example = Example::A;
    c.scheme = s;
    c.alpha = {0.5};
    c.k = {8};
    c.N = {5, 10, 20, 40};
    c.t = {0.1};
    c.study = Study::Temporal;
    return c;
}

std::size_t count_lines_starting(const std::string& text, const std::string& prefix)
{
    std::istringstream is(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(is, line)) {
        if (line.rfind(prefix, 0) == 0) {
            ++n;
        }
    }
    return n;
}

} // namespace

TEST(Config, ParsesKeysListsAndRanges)
{
    ExperimentConfig c;
    apply_config_text(c, "# comment\n"
                         "example = b\n"
                         "scheme=BE\n"
                         "alpha=0.1, 0.5,0.9\n"
                         "k=3..5\n"
                         "N=5,10\n"
                         "t=0.1,1e-2  # trailing\n"
                         "include-history-origin=true\n"
                         "format=text\n"
                         "study=spatial\n"
                         "reference=time_discrete\n");
    EXPECT_EQ(c.example, Example::B);
    EXPECT_EQ(c.scheme, Scheme::BE);
    EXPECT_EQ(c.alpha, (std::vector<double>{0.1, 0.5, 0.9}));
    EXPECT_EQ(c.k, (std::vector<int>{3, 4, 5}));
    EXPECT_EQ(c.N, (std::vector<int>{5, 10}));
    EXPECT_EQ(c.t, (std::vector<double>{0.1, 0.01}));
    EXPECT_TRUE(c.include_history_origin);
    EXPECT_EQ(c.format, "text");
    EXPECT_EQ(c.study, Study::Spatial);
    EXPECT_EQ(c.reference, Reference::TimeDiscrete);
    apply_setting(c, "K", "9,17");
    EXPECT_EQ(c.K, (std::vector<int>{9, 17}));
    apply_setting(c, "k", "6");
    EXPECT_EQ(c.k, (std::vector<int>{6}));
}

TEST(Config, RejectsBadInput)
{
    ExperimentConfig c;
    EXPECT_THROW(apply_setting(c, "colour", "red"), InvalidArgument);
    EXPECT_THROW(apply_setting(c, "alpha", "half"), InvalidArgument);
    EXPECT_THROW(apply_setting(c, "k", "7..3"), InvalidArgument);
    EXPECT_THROW(apply_setting(c, "include-history-origin", "maybe"), InvalidArgument);
    EXPECT_THROW(apply_config_text(c, "example a\n"), InvalidArgument);
    EXPECT_THROW(apply_config_file(c, "/nonexistent/dir/cfg.txt"), IoError);
}

TEST(Config, LaterSettingsOverrideFile)
{
    const auto path = std::filesystem::temp_directory_path() / "rsfem_cfg_test.txt";
    {
        std::ofstream f(path);
        f << "example=c\nalpha=0.3\n";
    }
    ExperimentConfig c;
    apply_config_file(c, path.string());
    apply_setting(c, "alpha", "0.7");
    EXPECT_EQ(c.example, Example::C);
    EXPECT_EQ(c.alpha, (std::vector<double>{0.7}));
    std::filesystem::remove(path);
}

TEST(Config, DefaultsAndValidation)
{
    ExperimentConfig c;
    c.example = Example::D;
    c.study = Study::Spatial;
    const auto d = with_defaults(c);
    EXPECT_EQ(d.k, (std::vector<int>{3, 4, 5, 6}));
    EXPECT_FALSE(d.N.empty());
    EXPECT_EQ(d.t, (std::vector<double>{0.1}));

    ExperimentConfig r = with_defaults(small_temporal(Scheme::BE));
    r.example = Example::B;
    r.projection = Projection::Ritz;
    EXPECT_THROW(validate(r), InvalidArgument);
    ExperimentConfig a = with_defaults(small_temporal(Scheme::BE));
    a.alpha = {1.0};
    EXPECT_THROW(validate(a), InvalidArgument);
    ExperimentConfig f = with_defaults(small_temporal(Scheme::BE));
    f.study = Study::Spatial;
    f.reference = Reference::FineStep;
    EXPECT_THROW(validate(f), InvalidArgument);
    EXPECT_THROW((void)run_experiment(r), InvalidArgument);
}

TEST(FittedSlope, ExactPowerLaws)
{
    const std::vector<double> p{0.2, 0.1, 0.05, 0.025};
    std::vector<double> e;
    for (double x : p) {
        e.push_back(3.0 * x * x);
    }
    EXPECT_NEAR(fitted_slope(p, e), 2.0, 1e-13);
    // coarsest level is ignored with four or more levels
    e[0] *= 10.0;
    EXPECT_NEAR(fitted_slope(p, e), 2.0, 1e-13);
    EXPECT_NEAR(fitted_slope({1.0, 0.5}, {1.0, 0.5}), 1.0, 1e-14);
}

TEST(Experiment, TemporalRatesAndFamilies)
{
    const ErrorReport be = run_experiment(small_temporal(Scheme::BE));
    ASSERT_EQ(be.rows.size(), 4u);
    EXPECT_FALSE(be.rows[0].rate.has_value());
    for (std::size_t i = 1; i < be.rows.size(); ++i) {
        ASSERT_TRUE(be.rows[i].rate.has_value());
        const double expect =
            std::log(be.rows[i - 1].l2_error / be.rows[i].l2_error) / std::log(be.rows[i - 1].tau / be.rows[i].tau);
        EXPECT_NEAR(*be.rows[i].rate, expect, 1e-12);
        EXPECT_NEAR(be.rows[i].l2_error, be.rows[i].l2_raw * std::sqrt(2.0), 1e-15);
    }
    EXPECT_EQ(be.fits.size(), 1u);
    EXPECT_EQ(be.fit(0).varied, "tau");
    EXPECT_GT(be.fit(0).l2_rate, 0.8);
    EXPECT_LT(be.fit(0).l2_rate, 1.3);
    const ErrorReport sbd = run_experiment(small_temporal(Scheme::SBD));
    EXPECT_GT(sbd.fit(0).l2_rate, 1.8);
    EXPECT_THROW((void)sbd.fit(7), InvalidArgument);
}

TEST(Experiment, MultipleAlphasMakeFamilies)
{
    ExperimentConfig c = small_temporal(Scheme::BE);
    c.alpha = {0.3, 0.7};
    c.N = {5, 10};
    const ErrorReport r = run_experiment(c);
    ASSERT_EQ(r.rows.size(), 4u);
    EXPECT_EQ(r.fits.size(), 2u);
    EXPECT_NE(r.rows[0].family, r.rows[2].family);
    EXPECT_FALSE(r.rows[2].rate.has_value());
}

TEST(Experiment, ReproducibleBitForBit)
{
    ExperimentConfig c = small_temporal(Scheme::SBD);
    c.example = Example::B;
    const ErrorReport a = run_experiment(c);
    const ErrorReport b = run_experiment(c);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].l2_error, b.rows[i].l2_error);
        EXPECT_EQ(a.rows[i].h1_error, b.rows[i].h1_error);
    }
}

TEST(Experiment, SpatialStudySmall)
{
    ExperimentConfig c;
    c.example = Example::A;
    c.scheme = Scheme::BE;
    c.study = Study::Spatial;
    c.k = {3, 4, 5, 6};
    c.N = {50};
    c.t = {0.1};
    const ErrorReport r = run_experiment(c);
    ASSERT_EQ(r.rows.size(), 4u);
    EXPECT_EQ(r.fit(0).varied, "h");
    EXPECT_NEAR(r.fit(0).l2_rate, 2.0, 0.15);
    EXPECT_NEAR(r.fit(0).h1_rate, 1.0, 0.1);
}

TEST(Experiment, GridPointFailureNamesThePoint)
{
    ExperimentConfig c = small_temporal(Scheme::BE);
    c.example = Example::C;
    c.reference = Reference::Exact;
    c.N = {5};
    c.tolerances.max_modes_1d = 8;
    c.tolerances.subtract_singular = false;
    try {
        (void)run_experiment(c);
        FAIL() << "expected a failure";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("grid point (alpha=0.5"), std::string::npos) << e.what();
    }
}

TEST(Blowup, SmoothDataStaysFlat)
{
    ExperimentConfig c;
    c.example = Example::A;
    c.study = Study::Blowup;
    c.k = {5};
    c.N = {200};
    c.t = {1e-3, 1e-4, 1e-5, 1e-6};
    const ErrorReport r = blowup_study(c);
    ASSERT_EQ(r.rows.size(), 4u);
    EXPECT_EQ(r.fit(0).varied, "t");
    EXPECT_LT(std::abs(r.fit(0).l2_rate), 0.1);
}

TEST(Report, CsvLayoutAndRoundTrip)
{
    ExperimentConfig c = small_temporal(Scheme::BE);
    c.alpha = {0.3, 0.7};
    const ErrorReport r = run_experiment(c);
    std::ostringstream os;
    emit_report(r, ReportFormat::Csv, os);
    const std::string text = os.str();
    EXPECT_EQ(text.rfind("example,scheme,alpha,h,tau,t,l2_error,h1_error,rate\n", 0), 0u);
    EXPECT_EQ(count_lines_starting(text, "example,"), 1u);
    // first row of each family has a blank rate cell
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    EXPECT_EQ(line.back(), ',');

    std::istringstream is(text);
    const auto rows = parse_csv(is);
    ASSERT_EQ(rows.size(), r.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].example, r.rows[i].example);
        EXPECT_EQ(rows[i].scheme, r.rows[i].scheme);
        for (auto [x, y] : {std::pair{rows[i].alpha, r.rows[i].alpha}, std::pair{rows[i].h, r.rows[i].h},
                            std::pair{rows[i].tau, r.rows[i].tau}, std::pair{rows[i].t, r.rows[i].t},
                            std::pair{rows[i].l2_error, r.rows[i].l2_error},
                            std::pair{rows[i].h1_error, r.rows[i].h1_error}}) {
            EXPECT_LE(std::abs(x - y), 1e-15 * std::abs(y));
        }
        EXPECT_EQ(rows[i].rate.has_value(), r.rows[i].rate.has_value());
        if (rows[i].rate) {
            EXPECT_LE(std::abs(*rows[i].rate - *r.rows[i].rate), 1e-15 * std::abs(*r.rows[i].rate));
        }
        EXPECT_EQ(rows[i].family, r.rows[i].family);
    }
}

TEST(Report, TextAndFiles)
{
    const ErrorReport r = run_experiment(small_temporal(Scheme::SBD));
    std::ostringstream os;
    emit_report(r, ReportFormat::Text, os);
    EXPECT_NE(os.str().find("rate"), std::string::npos);
    EXPECT_NE(os.str().find("SBD"), std::string::npos);

    const auto path = std::filesystem::temp_directory_path() / "rsfem_report_test.csv";
    emit_report(r, ReportFormat::Csv, path.string());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(count_lines_starting(ss.str(), "example,"), 1u);
    std::filesystem::remove(path);

    EXPECT_THROW(emit_report(r, ReportFormat::Csv, "/nonexistent/dir/out.csv"), IoError);
    EXPECT_THROW((void)parse_format("xml"), InvalidArgument);
}

TEST(Report, ParseRejectsForeignHeader)
{
    std::istringstream is("a,b,c\n1,2,3\n");
    EXPECT_THROW((void)parse_csv(is), InvalidArgument);
}
