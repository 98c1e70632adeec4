#include "rsfem/errors.hpp"
#include "rsfem/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace rsfem {

namespace {

constexpr const char* kHeader = "example,scheme,alpha,h,tau,t,l2_error,h1_error,rate";

std::string g17(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

std::string fixed2(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

// 1/N for step sizes that divide t into whole steps, otherwise scientific.
std::string tau_label(double tau, double t)
{
    const double n = t / tau;
    if (std::abs(n - std::round(n)) < 1e-9 * n && std::abs(t - 0.1) < 1e-15) {
        return "t/" + std::to_string(static_cast<long>(std::round(n)));
    }
    return sci(tau);
}

std::string h_label(double h)
{
    const double K = 1.0 / h;
    const double k = std::log2(K);
    if (std::abs(k - std::round(k)) < 1e-12) {
        return "2^-" + std::to_string(static_cast<int>(std::round(k)));
    }
    return "1/" + std::to_string(static_cast<long>(std::round(K)));
}

void write_csv(const ErrorReport& report, std::ostream& os)
{
    os << kHeader << '\n';
    for (const ReportRow& r : report.rows) {
        os << r.example << ',' << r.scheme << ',' << g17(r.alpha) << ',' << g17(r.h) << ',' << g17(r.tau) << ','
           << g17(r.t) << ',' << g17(r.l2_error) << ',' << g17(r.h1_error) << ',';
        if (r.rate) {
            os << g17(*r.rate);
        }
        os << '\n';
    }
}

void write_text(const ErrorReport& report, std::ostream& os)
{
    const ExperimentConfig& cfg = report.config;
    std::map<int, std::vector<const ReportRow*>> fam;
    for (const ReportRow& r : report.rows) {
        fam[r.family].push_back(&r);
    }
    os << "example (" << example_name(cfg.example) << "), " << scheme_name(cfg.scheme) << ", "
       << study_name(cfg.study) << " study, gamma = " << cfg.gamma << '\n';
    os << "errors are normalized by ||v||_L2; rate = fitted log-log slope\n";

    std::string last_header;
    for (const auto& [id, rows] : fam) {
        const FamilyFit& fit = report.fit(id);
        const ReportRow& r0 = *rows.front();
        std::ostringstream head;
        std::ostringstream line1;
        std::ostringstream line2;
        char lab[96];
        if (fit.varied == "tau") {
            std::snprintf(lab, sizeof lab, "alpha=%-5g h=%s t=%g", r0.alpha, h_label(r0.h).c_str(), r0.t);
            head << "  tau:";
            for (const ReportRow* r : rows) {
                head << ' ' << tau_label(r->tau, r->t);
            }
        } else if (fit.varied == "h") {
            std::snprintf(lab, sizeof lab, "alpha=%-5g t=%g tau=%s", r0.alpha, r0.t, sci(r0.tau).c_str());
            head << "  h:";
            for (const ReportRow* r : rows) {
                head << ' ' << h_label(r->h);
            }
        } else {
            std::snprintf(lab, sizeof lab, "alpha=%-5g h=%s tau=t/%ld", r0.alpha, h_label(r0.h).c_str(),
                          static_cast<long>(std::round(r0.t / r0.tau)));
            head << "  t:";
            for (const ReportRow* r : rows) {
                head << ' ' << sci(r->t);
            }
        }
        if (head.str() != last_header) {
            os << '\n' << head.str() << '\n';
            last_header = head.str();
        }
        line1 << lab << "  L2:";
        line2 << lab << "  H1:";
        for (const ReportRow* r : rows) {
            line1 << ' ' << sci(r->l2_error);
            line2 << ' ' << sci(r->h1_error);
        }
        line1 << "  rate ~ " << fixed2(fit.l2_rate);
        line2 << "  rate ~ " << fixed2(fit.h1_rate);
        os << line1.str() << '\n';
        if (fit.varied == "h") {
            os << line2.str() << '\n';
        }
    }
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, int lineno)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (s.empty() || pos != s.size()) {
        throw InvalidArgument("csv line " + std::to_string(lineno) + ": bad number '" + s + "'");
    }
    return v;
}

} // namespace

void emit_report(const ErrorReport& report, ReportFormat format, std::ostream& os)
{
    if (report.rows.empty()) {
        throw InvalidArgument("emit_report: empty report");
    }
    if (format == ReportFormat::Csv) {
        write_csv(report, os);
    } else {
        write_text(report, os);
    }
}

void emit_report(const ErrorReport& report, ReportFormat format, const std::string& path)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    emit_report(report, format, out);
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

std::vector<ReportRow> parse_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) {
        throw InvalidArgument("csv: missing header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kHeader) {
        throw InvalidArgument("csv: unexpected header '" + line + "'");
    }
    std::vector<ReportRow> rows;
    int lineno = 1;
    int family = -1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 9) {
            throw InvalidArgument("csv line " + std::to_string(lineno) + ": expected 9 fields");
        }
        ReportRow r;
        r.example = f[0];
        r.scheme = f[1];
        r.alpha = parse_double(f[2], lineno);
        r.h = parse_double(f[3], lineno);
        r.tau = parse_double(f[4], lineno);
        r.t = parse_double(f[5], lineno);
        r.l2_error = parse_double(f[6], lineno);
        r.h1_error = parse_double(f[7], lineno);
        if (!f[8].empty()) {
            r.rate = parse_double(f[8], lineno);
        } else {
            ++family;
        }
        r.family = std::max(family, 0);
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace rsfem
