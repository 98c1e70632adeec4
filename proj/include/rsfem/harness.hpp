#pragma once

#include "rsfem/cq.hpp"
#include "rsfem/datum.hpp"
#include "rsfem/modal_solution.hpp"
#include "rsfem/stepper.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rsfem {

enum class Example { A, B, C, D };
enum class Study { Temporal, Spatial, Blowup };

/// What the discrete solution is compared against.
///  exact          the modal series with the exact time factor
///  time_discrete  the modal series with the scheme's own factor (exact in
///                 space, same tau), isolating the spatial error
///  fine_step      the same finite element discretization stepped with SBD
///                 and a much smaller step, isolating the temporal error
///  automatic      time_discrete for spatial studies, fine_step for 2D
///                 temporal studies, exact otherwise
enum class Reference { Automatic, Exact, TimeDiscrete, FineStep };

[[nodiscard]] std::string example_name(Example e);
[[nodiscard]] Example parse_example(const std::string& s);
[[nodiscard]] std::string study_name(Study s);
[[nodiscard]] Study parse_study(const std::string& s);
[[nodiscard]] std::string reference_name(Reference r);
[[nodiscard]] Reference parse_reference(const std::string& s);

/// Initial datum of each example: sin(2 pi x), the step at 1/2, the Dirac
/// mass at 1/2, and the step at x = 1/2 on the unit square.
[[nodiscard]] InitialDatum example_datum(Example e);

struct ExperimentConfig {
    Example example = Example::A;
    Scheme scheme = Scheme::SBD;
    std::vector<double> alpha{0.5};
    double gamma = 1.0;
    // Mesh exponents (K = 2^k); a nonempty K list takes precedence.
    std::vector<int> k;
    std::vector<int> K;
    std::vector<int> N;
    std::vector<double> t;
    Projection projection = Projection::L2;
    Study study = Study::Temporal;
    bool include_history_origin = false;
    Reference reference = Reference::Automatic;
    std::string out;
    std::string format = "csv";
    ModalOptions tolerances{};
    // Fine-step reference uses this many times the largest N.
    int fine_step_factor = 16;
};

/// Fills empty lists with the study's defaults:
///   temporal  k = 11 (1D) or 6 (2D), N = 5..80, t = 0.1
///   spatial   k = 3..7 (1D) or 3..6 (2D), N = 1000, t = 0.1
///   blowup    k = 6, N = 1000, t = 1e-3..1e-8
[[nodiscard]] ExperimentConfig with_defaults(ExperimentConfig cfg);
/// Throws InvalidArgument for inconsistent settings.
void validate(const ExperimentConfig& cfg);

/// Sets one key (flag name without dashes) from its textual value.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
/// Flat key=value lines; '#' starts a comment.
void apply_config_text(ExperimentConfig& cfg, const std::string& text);
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

struct ReportRow {
    std::string example;
    std::string scheme;
    double alpha = 0.0;
    double h = 0.0;
    double tau = 0.0;
    double t = 0.0;
    // Errors divided by ||v||_L2 (the Dirac datum uses 1).
    double l2_error = 0.0;
    double h1_error = 0.0;
    double l2_raw = 0.0;
    double h1_raw = 0.0;
    std::optional<double> rate;     // L2, against the previous row of the family
    std::optional<double> h1_rate;
    int family = 0;
};

struct FamilyFit {
    int family = 0;
    double alpha = 0.0;
    double t = 0.0;     // observation time, NaN for blowup families
    std::string varied; // "tau", "h" or "t"
    std::size_t levels = 0;
    double l2_rate = 0.0;
    double h1_rate = 0.0;
};

struct ErrorReport {
    ExperimentConfig config;
    std::vector<ReportRow> rows;
    std::vector<FamilyFit> fits;

    [[nodiscard]] const FamilyFit& fit(int family) const;
};

/// Least-squares slope of log e against log p. With four or more levels the
/// coarsest one is left out, since it is typically pre-asymptotic.
[[nodiscard]] double fitted_slope(const std::vector<double>& p, const std::vector<double>& e);

[[nodiscard]] ErrorReport run_experiment(const ExperimentConfig& cfg);
/// L2 error against t -> 0 at fixed h, SBD with tau = t / N.
[[nodiscard]] ErrorReport blowup_study(const ExperimentConfig& cfg);

enum class ReportFormat { Csv, Text };
[[nodiscard]] ReportFormat parse_format(const std::string& s);

void emit_report(const ErrorReport& report, ReportFormat format, std::ostream& os);
/// Writes to a file; throws IoError when it cannot be opened or written.
void emit_report(const ErrorReport& report, ReportFormat format, const std::string& path);

/// Parses the CSV layout written by emit_report.
[[nodiscard]] std::vector<ReportRow> parse_csv(std::istream& is);

} // namespace rsfem
