#include "rsfem/harness.hpp"

#include "rsfem/errors.hpp"
#include "rsfem/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

namespace rsfem {

InitialDatum example_datum(Example e)
{
    switch (e) {
    case Example::A: return SmoothSine{2};
    case Example::B: return Step{0.5};
    case Example::C: return Dirac{0.5};
    case Example::D: return Step2D{0.5};
    }
    throw InvalidArgument("unknown example");
}

ExperimentConfig with_defaults(ExperimentConfig cfg)
{
    const bool square = cfg.example == Example::D;
    if (cfg.k.empty() && cfg.K.empty()) {
        switch (cfg.study) {
        case Study::Temporal: cfg.k = {square ? 6 : 11}; break;
        case Study::Spatial: cfg.k = square ? std::vector<int>{3, 4, 5, 6} : std::vector<int>{3, 4, 5, 6, 7}; break;
        case Study::Blowup: cfg.k = {6}; break;
        }
    }
    if (cfg.N.empty()) {
        cfg.N = cfg.study == Study::Temporal ? std::vector<int>{5, 10, 20, 40, 80} : std::vector<int>{1000};
    }
    if (cfg.t.empty()) {
        cfg.t = cfg.study == Study::Blowup ? std::vector<double>{1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}
                                           : std::vector<double>{0.1};
    }
    return cfg;
}

void validate(const ExperimentConfig& cfg)
{
    if (cfg.alpha.empty() || cfg.N.empty() || cfg.t.empty() || (cfg.k.empty() && cfg.K.empty())) {
        throw InvalidArgument("experiment lists must be nonempty");
    }
    for (double a : cfg.alpha) {
        if (!(a > 0.0 && a < 1.0)) {
            throw InvalidArgument("alpha values must lie in (0,1)");
        }
    }
    if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) {
        throw InvalidArgument("gamma must be positive");
    }
    for (double t : cfg.t) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw InvalidArgument("observation times must be positive");
        }
    }
    for (int n : cfg.N) {
        if (n < 1) {
            throw InvalidArgument("step counts must be positive");
        }
    }
    for (int k : cfg.k) {
        if (k < 1 || k > 24) {
            throw InvalidArgument("mesh exponents must lie in 1..24");
        }
    }
    for (int K : cfg.K) {
        if (K < 2) {
            throw InvalidArgument("subdivision counts must be at least 2");
        }
    }
    if (cfg.projection == Projection::Ritz && cfg.example != Example::A) {
        throw InvalidArgument("the Ritz projection needs a datum with a gradient (example a only)");
    }
    if (cfg.reference == Reference::FineStep && cfg.study != Study::Temporal) {
        throw InvalidArgument("the fine_step reference only applies to temporal studies");
    }
    if (cfg.fine_step_factor < 2) {
        throw InvalidArgument("fine-step-factor must be at least 2");
    }
    (void)parse_format(cfg.format);
}

const FamilyFit& ErrorReport::fit(int family) const
{
    for (const auto& f : fits) {
        if (f.family == family) {
            return f;
        }
    }
    throw InvalidArgument("no family " + std::to_string(family) + " in report");
}

namespace {

// Runs f(i) for i < n on up to hardware_concurrency threads; rethrows the
// first failure after all workers stop.
template <class F>
void run_pool(std::size_t n, F&& f)
{
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t nthreads = std::min<std::size_t>(hw, n);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < nthreads; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

std::vector<int> subdivisions(const ExperimentConfig& cfg)
{
    if (!cfg.K.empty()) {
        return cfg.K;
    }
    std::vector<int> out;
    for (int k : cfg.k) {
        out.push_back(1 << k);
    }
    return out;
}

Mesh make_mesh(Example e, int K)
{
    return e == Example::D ? build_square_mesh(K) : build_interval_mesh(K);
}

std::string grid_point(double alpha, int K, double tau, double t)
{
    std::ostringstream os;
    os << "grid point (alpha=" << alpha << ", K=" << K << ", tau=" << tau << ", t=" << t << "): ";
    return os.str();
}

// One row to compute; the reference is shared within its family.
struct Task {
    int family = 0;
    double alpha = 0.0;
    double t = 0.0;
    int K = 0;
    int N = 0;
    std::size_t ref = 0;
};

struct FamilyReference {
    std::shared_ptr<const ModalSnapshot> snapshot;
    // fine-step reference: coefficient vector on the family's mesh
    Vector fine;
};

void finish_rates(ErrorReport& rep, const std::vector<double>& param, const std::string& varied)
{
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        members[rep.rows[i].family].push_back(i);
    }
    for (const auto& [fam, idx] : members) {
        std::vector<double> p;
        std::vector<double> e1;
        std::vector<double> e2;
        for (std::size_t m = 0; m < idx.size(); ++m) {
            ReportRow& r = rep.rows[idx[m]];
            p.push_back(param[idx[m]]);
            e1.push_back(r.l2_error);
            e2.push_back(r.h1_error);
            if (m > 0) {
                const double lp = std::log(p[m - 1] / p[m]);
                r.rate = std::log(e1[m - 1] / e1[m]) / lp;
                r.h1_rate = std::log(e2[m - 1] / e2[m]) / lp;
            }
        }
        FamilyFit f;
        f.family = fam;
        f.alpha = rep.rows[idx.front()].alpha;
        f.t = varied == "t" ? std::numeric_limits<double>::quiet_NaN() : rep.rows[idx.front()].t;
        f.varied = varied;
        f.levels = idx.size();
        f.l2_rate = fitted_slope(p, e1);
        f.h1_rate = fitted_slope(p, e2);
        rep.fits.push_back(f);
    }
}

Reference resolve_reference(const ExperimentConfig& cfg)
{
    if (cfg.reference != Reference::Automatic) {
        return cfg.reference;
    }
    switch (cfg.study) {
    case Study::Spatial: return Reference::TimeDiscrete;
    case Study::Temporal: return cfg.example == Example::D ? Reference::FineStep : Reference::Exact;
    case Study::Blowup: return Reference::Exact;
    }
    return Reference::Exact;
}

SchemeConfig scheme_for(const ExperimentConfig& cfg, double alpha, double t, int N, Scheme scheme)
{
    SchemeConfig sc;
    sc.scheme = scheme;
    sc.alpha = alpha;
    sc.gamma = cfg.gamma;
    sc.tau = t / N;
    sc.N = N;
    sc.include_history_origin = cfg.include_history_origin;
    sc.initial_projection = cfg.projection;
    sc.keep_snapshots = false;
    return sc;
}

ErrorReport execute(const ExperimentConfig& cfg)
{
    const InitialDatum v = example_datum(cfg.example);
    const Reference reference = resolve_reference(cfg);
    const std::vector<int> Ks = subdivisions(cfg);

    std::vector<Task> tasks;
    std::vector<FamilyReference> refs;
    // Reference construction per family is deferred into closures so that
    // the pool can run them too.
    struct RefJob {
        double alpha;
        double t;
        int K;     // fine-step only
        int N;     // time-discrete or fine-step
    };
    std::vector<RefJob> ref_jobs;
    std::string varied;
    int family = 0;

    std::vector<double> ts = cfg.t;
    if (cfg.study == Study::Blowup) {
        std::sort(ts.begin(), ts.end(), std::greater<>());
    }

    for (double alpha : cfg.alpha) {
        if (cfg.study == Study::Temporal) {
            varied = "tau";
            std::vector<int> Ns = cfg.N;
            std::sort(Ns.begin(), Ns.end());
            for (double t : cfg.t) {
                for (int K : Ks) {
                    const int nmax = Ns.back();
                    ref_jobs.push_back({alpha, t, K, reference == Reference::FineStep ? nmax * cfg.fine_step_factor : nmax});
                    for (int N : Ns) {
                        tasks.push_back({family, alpha, t, K, N, ref_jobs.size() - 1});
                    }
                    ++family;
                }
            }
        } else if (cfg.study == Study::Spatial) {
            varied = "h";
            std::vector<int> sorted = Ks;
            std::sort(sorted.begin(), sorted.end());
            for (double t : cfg.t) {
                for (int N : cfg.N) {
                    ref_jobs.push_back({alpha, t, 0, N});
                    for (int K : sorted) {
                        tasks.push_back({family, alpha, t, K, N, ref_jobs.size() - 1});
                    }
                    ++family;
                }
            }
        } else {
            varied = "t";
            for (int K : Ks) {
                for (int N : cfg.N) {
                    for (double t : ts) {
                        ref_jobs.push_back({alpha, t, K, N});
                        tasks.push_back({family, alpha, t, K, N, ref_jobs.size() - 1});
                    }
                    ++family;
                }
            }
        }
    }

    // A temporal family with an exact reference shares one snapshot across
    // all its rows, so these lists stay short.
    std::map<int, std::shared_ptr<const FemSpace>> spaces;
    for (const Task& task : tasks) {
        spaces.emplace(task.K, nullptr);
    }
    std::vector<int> space_keys;
    for (const auto& kv : spaces) {
        space_keys.push_back(kv.first);
    }
    std::vector<std::shared_ptr<const FemSpace>> built(space_keys.size());
    run_pool(space_keys.size(), [&](std::size_t i) {
        built[i] = std::make_shared<const FemSpace>(assemble(make_mesh(cfg.example, space_keys[i])));
    });
    for (std::size_t i = 0; i < space_keys.size(); ++i) {
        spaces[space_keys[i]] = built[i];
    }

    std::map<double, std::unique_ptr<ModalSolution>> modal;
    for (double alpha : cfg.alpha) {
        modal.emplace(alpha, std::make_unique<ModalSolution>(v, alpha, cfg.gamma, cfg.tolerances));
    }

    refs.resize(ref_jobs.size());
    run_pool(ref_jobs.size(), [&](std::size_t i) {
        const RefJob& job = ref_jobs[i];
        try {
            if (reference == Reference::FineStep) {
                const FemSpace& space = *spaces.at(job.K);
                const SchemeConfig sc = scheme_for(cfg, job.alpha, job.t, job.N, Scheme::SBD);
                const Vector u0 = initial_vector(space, v, cfg.projection);
                refs[i].fine = run_scheme(space, sc, u0).final();
            } else if (reference == Reference::TimeDiscrete) {
                const SchemeConfig sc = scheme_for(cfg, job.alpha, job.t, job.N, cfg.scheme);
                refs[i].snapshot =
                    std::make_shared<const ModalSnapshot>(modal.at(job.alpha)->at(ModeFactor::discrete(sc)));
            } else {
                refs[i].snapshot = std::make_shared<const ModalSnapshot>(modal.at(job.alpha)->exact_at(job.t));
            }
        } catch (const Error& e) {
            throw Error(grid_point(job.alpha, job.K, job.t / job.N, job.t) + "reference: " + e.what());
        }
    });

    ErrorReport rep;
    rep.config = cfg;
    rep.rows.resize(tasks.size());
    std::vector<double> param(tasks.size());
    run_pool(tasks.size(), [&](std::size_t i) {
        const Task& task = tasks[i];
        const double tau = task.t / task.N;
        try {
            const FemSpace& space = *spaces.at(task.K);
            const SchemeConfig sc = scheme_for(cfg, task.alpha, task.t, task.N, cfg.scheme);
            const Vector u0 = initial_vector(space, v, cfg.projection);
            const Vector u = run_scheme(space, sc, u0).final();
            const double norm = modal.at(task.alpha)->datum_norm();
            ErrorNorms e;
            const FamilyReference& ref = refs[task.ref];
            if (ref.snapshot) {
                e = error_norms(space, u, *ref.snapshot, norm);
            } else {
                Vector d = ref.fine;
                axpy(-1.0, u, d);
                e.l2 = fe_l2_norm(space, d);
                e.h1 = fe_h1_seminorm(space, d);
                e.l2_normalized = e.l2 / norm;
                e.h1_normalized = e.h1 / norm;
            }
            ReportRow& row = rep.rows[i];
            row.example = example_name(cfg.example);
            row.scheme = scheme_name(cfg.scheme);
            row.alpha = task.alpha;
            row.h = 1.0 / task.K;
            row.tau = tau;
            row.t = task.t;
            row.l2_error = e.l2_normalized;
            row.h1_error = e.h1_normalized;
            row.l2_raw = e.l2;
            row.h1_raw = e.h1;
            row.family = task.family;
            param[i] = varied == "tau" ? tau : (varied == "h" ? row.h : task.t);
        } catch (const Error& e) {
            throw Error(grid_point(task.alpha, task.K, tau, task.t) + e.what());
        }
    });
    finish_rates(rep, param, varied);
    return rep;
}

} // namespace

double fitted_slope(const std::vector<double>& p, const std::vector<double>& e)
{
    if (p.size() != e.size()) {
        throw InvalidArgument("fitted_slope: size mismatch");
    }
    const std::size_t first = p.size() >= 4 ? 1 : 0;
    const std::size_t n = p.size() - first;
    if (n < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = first; i < p.size(); ++i) {
        sx += std::log(p[i]);
        sy += std::log(e[i]);
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = first; i < p.size(); ++i) {
        const double dx = std::log(p[i]) - mx;
        sxy += dx * (std::log(e[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

ErrorReport run_experiment(const ExperimentConfig& in)
{
    const ExperimentConfig cfg = with_defaults(in);
    validate(cfg);
    return execute(cfg);
}

ErrorReport blowup_study(const ExperimentConfig& in)
{
    ExperimentConfig cfg = in;
    cfg.study = Study::Blowup;
    return run_experiment(cfg);
}

} // namespace rsfem
