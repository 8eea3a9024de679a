// greendens: dipole-field kernel density estimation, k-NN baseline, and
// likelihood-ratio classification. Every command is deterministic given its
// flags and seeds; --threads never changes results.

#include "greendens/csv.hpp"
#include "greendens/datagen.hpp"
#include "greendens/errors.hpp"
#include "greendens/knn.hpp"
#include "greendens/model_io.hpp"
#include "greendens/parallel.hpp"
#include "greendens/validation.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace greendens;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;   // validation failures, unexpected errors
constexpr int kExitUsage = 2;     // bad flags or parameter values
constexpr int kExitIo = 3;        // missing/unwritable files
constexpr int kExitFormat = 4;    // malformed CSV or model documents
constexpr int kExitDimension = 5; // dimension mismatches

std::vector<double> parse_center(const std::string& text, int dim) {
    if (text.empty()) return std::vector<double>(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> out;
    std::istringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            out.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw InvalidArgument("--center: not a number: '" + field + "'");
        }
    }
    if (out.size() != static_cast<std::size_t>(dim))
        throw DimensionError("--center needs " + std::to_string(dim) + " coordinates");
    return out;
}

RadialDensity parse_truth(const std::string& text, int dim) {
    if (text.empty()) return {};
    const std::string prefix = "gauss:";
    if (text.rfind(prefix, 0) == 0) {
        double sigma = 0.0;
        try {
            sigma = std::stod(text.substr(prefix.size()));
        } catch (const std::exception&) {
            throw InvalidArgument("--truth: bad sigma in '" + text + "'");
        }
        return gaussian_radial_density(dim, sigma);
    }
    throw InvalidArgument("--truth: unknown form '" + text + "' (expected gauss:<sigma>)");
}

void print_fit_report(const FitReport& r, std::size_t n, int dim, std::size_t n_discr) {
    std::cout << "fit: N=" << n << " dim=" << dim << " N_discr=" << n_discr << "\n";
    std::cout << "restart final energies:";
    for (double e : r.restart_energies) std::cout << " " << format_double(e);
    std::cout << "\n";
    std::cout << "best run: converged=" << (r.converged ? "yes" : "no")
              << " iterations=" << r.iterations_used
              << " energy " << format_double(r.energy_initial) << " -> "
              << format_double(r.energy_final)
              << " mean misalignment " << format_double(r.mean_misalignment) << " rad\n";
}

struct GenArgs {
    std::string dist = "gauss";
    std::size_t n = 1000;
    std::size_t n_signal = 0, n_background = 0;
    int dim = 2;
    double sigma = 1.0;
    std::uint64_t seed = 1;
    std::string out, out_signal, out_background;
};

int run_gen(const GenArgs& a) {
    if (a.dist == "gauss") {
        if (a.out.empty()) throw InvalidArgument("gen --dist gauss requires --out");
        SampleSet s = sample_gaussian(a.dim, a.n, a.sigma, a.seed);
        write_points_csv(a.out, PointMatrix(s.dim(), s.data()));
        std::cout << "wrote " << s.size() << " points to " << a.out << "\n";
        return kExitOk;
    }
    if (a.dist == "twelve") {
        if (a.out_signal.empty() || a.out_background.empty())
            throw InvalidArgument("gen --dist twelve requires --out-signal and --out-background");
        std::size_t ns = a.n_signal > 0 ? a.n_signal : a.n / 2;
        std::size_t nb = a.n_background > 0 ? a.n_background : a.n - a.n / 2;
        auto [sig, bkg] = sample_twelve_plus_flat(ns, nb, a.seed);
        write_points_csv(a.out_signal, PointMatrix(sig.dim(), sig.data()));
        write_points_csv(a.out_background, PointMatrix(bkg.dim(), bkg.data()));
        std::cout << "wrote " << sig.size() << " signal points to " << a.out_signal
                  << " and " << bkg.size() << " background points to " << a.out_background << "\n";
        return kExitOk;
    }
    throw InvalidArgument("gen: unknown --dist '" + a.dist + "' (gauss|twelve)");
}

struct FitArgs {
    std::string in, out;
    FitConfig cfg;
    int n_large_eval = 0;
};

int run_fit(const FitArgs& a) {
    SampleSet s(read_points_csv(a.in));
    DensityModel m = DensityModel::fit(std::move(s), a.cfg, a.n_large_eval);
    save_model(m, a.out);
    print_fit_report(m.report(), m.sample().size(), m.dim(),
                     m.fit_config().n_discr(m.dim()));
    std::cout << "wrote model to " << a.out << "\n";
    return kExitOk;
}

struct EvalArgs {
    std::string model, in, out;
    int n_large_eval = 0;
};

int run_eval(const EvalArgs& a) {
    DensityModel m = load_model(a.model);
    if (a.n_large_eval > 0 && a.n_large_eval != m.n_large_eval())
        m = DensityModel(m.sample(), m.field(), m.fit_config(), a.n_large_eval, m.report());
    PointMatrix q = read_points_csv(a.in);
    if (q.dim != m.dim())
        throw DimensionError("eval: query dimension " + std::to_string(q.dim) +
                             " does not match model dimension " + std::to_string(m.dim()));
    std::vector<double> dens = m.estimate_batch(q);
    write_values_csv(a.out, q, dens, "density");
    std::cout << "wrote " << dens.size() << " densities to " << a.out << "\n";
    return kExitOk;
}

struct ProfileArgs {
    std::string model, out, truth, center;
    int bins = 40;
    double rmax = 4.0;
    int n_large_eval = 0;
};

int run_profile(const ProfileArgs& a) {
    DensityModel m = load_model(a.model);
    if (a.n_large_eval > 0 && a.n_large_eval != m.n_large_eval())
        m = DensityModel(m.sample(), m.field(), m.fit_config(), a.n_large_eval, m.report());
    std::vector<double> center = parse_center(a.center, m.dim());
    RadialProfile p = radial_profile(m, center, a.bins, a.rmax, parse_truth(a.truth, m.dim()));
    write_profile_csv(a.out, p);
    std::cout << "wrote " << p.bins() << " profile bins to " << a.out << "\n";
    return kExitOk;
}

struct KnnArgs {
    std::string in, queries, out;
    std::size_t k = 0;
};

int run_knn(const KnnArgs& a) {
    SampleSet s(read_points_csv(a.in));
    NeighborIndex idx(s);
    PointMatrix q = read_points_csv(a.queries);
    if (q.dim != s.dim())
        throw DimensionError("knn: query dimension does not match sample dimension");
    std::vector<double> dens = knn_density_batch(s, idx, q, a.k);
    write_values_csv(a.out, q, dens, "density");
    std::cout << "wrote " << dens.size() << " densities to " << a.out << "\n";
    return kExitOk;
}

struct KnnProfileArgs {
    std::string in, out, truth, center;
    std::size_t k = 0;
    int bins = 40;
    double rmax = 4.0;
};

int run_knn_profile(const KnnProfileArgs& a) {
    SampleSet s(read_points_csv(a.in));
    NeighborIndex idx(s);
    PointMatrix pts(s.dim(), s.data());
    std::vector<double> dens = knn_density_batch(s, idx, pts, a.k);
    std::vector<double> center = parse_center(a.center, s.dim());
    RadialProfile p = profile_from_values(pts, dens, center, a.bins, a.rmax,
                                          parse_truth(a.truth, s.dim()));
    write_profile_csv(a.out, p);
    std::cout << "wrote " << p.bins() << " profile bins to " << a.out << "\n";
    return kExitOk;
}

struct TrainArgs {
    std::string signal, background, out;
    FitConfig cfg;
    int n_large_eval = 0;
    double epsilon = 1e-12;
};

int run_train(const TrainArgs& a) {
    SampleSet sig(read_points_csv(a.signal));
    SampleSet bkg(read_points_csv(a.background));
    if (sig.dim() != bkg.dim())
        throw DimensionError("classify train: signal and background dimensions differ");
    LikelihoodModel m = LikelihoodModel::train(std::move(sig), std::move(bkg), a.cfg,
                                               a.n_large_eval, a.epsilon);
    save_classifier(m, a.out);
    std::cout << "signal model:\n";
    print_fit_report(m.signal().report(), m.signal().sample().size(), m.dim(),
                     m.signal().fit_config().n_discr(m.dim()));
    std::cout << "background model:\n";
    print_fit_report(m.background().report(), m.background().sample().size(), m.dim(),
                     m.background().fit_config().n_discr(m.dim()));
    std::cout << "wrote classifier to " << a.out << "\n";
    return kExitOk;
}

struct ApplyArgs {
    std::string clf, in, out;
};

int run_apply(const ApplyArgs& a) {
    LikelihoodModel m = load_classifier(a.clf);
    PointMatrix q = read_points_csv(a.in);
    if (q.dim != m.dim())
        throw DimensionError("classify apply: query dimension does not match classifier");
    std::vector<double> resp = m.response_batch(q);
    write_values_csv(a.out, q, resp, "response");
    std::cout << "wrote " << resp.size() << " responses to " << a.out << "\n";
    return kExitOk;
}

struct HistArgs {
    std::string clf, in, out;
    int bins = 50;
};

int run_hist(const HistArgs& a) {
    LikelihoodModel m = load_classifier(a.clf);
    PointMatrix q = read_points_csv(a.in);
    if (q.dim != m.dim())
        throw DimensionError("classify hist: query dimension does not match classifier");
    ResponseHistogram h = response_histogram(m, q, a.bins);
    write_histogram_csv(a.out, h);
    std::cout << "wrote " << h.bins() << " histogram bins to " << a.out << "\n";
    return kExitOk;
}

struct ValidateArgs {
    int dim = 0;
    std::uint64_t seed = 7;
};

int run_validate(const ValidateArgs& a) {
    std::optional<int> dim;
    if (a.dim > 0) dim = a.dim;
    bool ok = run_validation(dim, a.seed, std::cout);
    return ok ? kExitOk : kExitFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Green's-function dipole-kernel density estimation toolkit"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)");

    GenArgs gen;
    CLI::App* c_gen = app.add_subcommand("gen", "generate a synthetic sample CSV");
    c_gen->add_option("--dist", gen.dist, "gauss|twelve");
    c_gen->add_option("--n", gen.n, "number of points (twelve: total, split 50/50)");
    c_gen->add_option("--n-signal", gen.n_signal, "twelve: signal points (overrides --n)");
    c_gen->add_option("--n-background", gen.n_background, "twelve: background points (overrides --n)");
    c_gen->add_option("--dim", gen.dim, "dimension (gauss)");
    c_gen->add_option("--sigma", gen.sigma, "gaussian sigma");
    c_gen->add_option("--seed", gen.seed, "random seed");
    c_gen->add_option("--out", gen.out, "output point CSV (gauss)");
    c_gen->add_option("--out-signal", gen.out_signal, "signal CSV (twelve)");
    c_gen->add_option("--out-background", gen.out_background, "background CSV (twelve)");

    FitArgs fita;
    CLI::App* c_fit = app.add_subcommand("fit", "fit a dipole-field density model");
    c_fit->add_option("--in", fita.in, "input point CSV")->required();
    c_fit->add_option("--n-large", fita.cfg.n_large_fit, "stable-shell point count for the fit");
    c_fit->add_option("--step-cap", fita.cfg.step_cap, "max rotation per sweep, radians");
    c_fit->add_option("--tol", fita.cfg.tolerance, "mean misalignment tolerance, radians");
    c_fit->add_option("--max-iter", fita.cfg.max_iterations, "max sweeps per restart");
    c_fit->add_option("--restarts", fita.cfg.restarts, "extra seeded restarts");
    c_fit->add_option("--seed", fita.cfg.seed, "random seed");
    c_fit->add_option("--n-large-eval", fita.n_large_eval, "evaluation shell count (default: --n-large)");
    c_fit->add_option("--out", fita.out, "output model file")->required();

    EvalArgs eval;
    CLI::App* c_eval = app.add_subcommand("eval", "evaluate densities at query points");
    c_eval->add_option("--model", eval.model, "model file")->required();
    c_eval->add_option("--in", eval.in, "query point CSV")->required();
    c_eval->add_option("--n-large-eval", eval.n_large_eval, "override evaluation shell count");
    c_eval->add_option("--out", eval.out, "output CSV")->required();

    ProfileArgs prof;
    CLI::App* c_prof = app.add_subcommand("profile", "radial profile of model estimates at its sample points");
    c_prof->add_option("--model", prof.model, "model file")->required();
    c_prof->add_option("--bins", prof.bins, "number of radial bins");
    c_prof->add_option("--rmax", prof.rmax, "max radius");
    c_prof->add_option("--truth", prof.truth, "analytic truth, e.g. gauss:1.0");
    c_prof->add_option("--center", prof.center, "profile center, comma-separated (default origin)");
    c_prof->add_option("--n-large-eval", prof.n_large_eval, "override evaluation shell count");
    c_prof->add_option("--out", prof.out, "output CSV")->required();

    KnnArgs knn;
    CLI::App* c_knn = app.add_subcommand("knn", "flat-kernel k-NN densities at query points");
    c_knn->add_option("--in", knn.in, "sample point CSV")->required();
    c_knn->add_option("--k", knn.k, "neighbour count")->required();
    c_knn->add_option("--queries", knn.queries, "query point CSV")->required();
    c_knn->add_option("--out", knn.out, "output CSV")->required();

    KnnProfileArgs knnp;
    CLI::App* c_knnp = app.add_subcommand("knn-profile", "radial profile of k-NN estimates at sample points");
    c_knnp->add_option("--in", knnp.in, "sample point CSV")->required();
    c_knnp->add_option("--k", knnp.k, "neighbour count")->required();
    c_knnp->add_option("--bins", knnp.bins, "number of radial bins");
    c_knnp->add_option("--rmax", knnp.rmax, "max radius");
    c_knnp->add_option("--truth", knnp.truth, "analytic truth, e.g. gauss:1.0");
    c_knnp->add_option("--center", knnp.center, "profile center (default origin)");
    c_knnp->add_option("--out", knnp.out, "output CSV")->required();

    CLI::App* c_classify = app.add_subcommand("classify", "likelihood-ratio classification");
    c_classify->require_subcommand(1);

    TrainArgs train;
    CLI::App* c_train = c_classify->add_subcommand("train", "fit signal and background models");
    c_train->add_option("--signal", train.signal, "signal point CSV")->required();
    c_train->add_option("--background", train.background, "background point CSV")->required();
    c_train->add_option("--n-large", train.cfg.n_large_fit, "stable-shell point count for the fits");
    c_train->add_option("--step-cap", train.cfg.step_cap, "max rotation per sweep, radians");
    c_train->add_option("--tol", train.cfg.tolerance, "mean misalignment tolerance, radians");
    c_train->add_option("--max-iter", train.cfg.max_iterations, "max sweeps per restart");
    c_train->add_option("--restarts", train.cfg.restarts, "extra seeded restarts");
    c_train->add_option("--seed", train.cfg.seed, "random seed (background uses seed+1)");
    c_train->add_option("--n-large-eval", train.n_large_eval, "evaluation shell count");
    c_train->add_option("--epsilon", train.epsilon, "response regularizer");
    c_train->add_option("--out", train.out, "output classifier file")->required();

    ApplyArgs apply;
    CLI::App* c_apply = c_classify->add_subcommand("apply", "score points with a classifier");
    c_apply->add_option("--clf", apply.clf, "classifier file")->required();
    c_apply->add_option("--in", apply.in, "query point CSV")->required();
    c_apply->add_option("--out", apply.out, "output CSV")->required();

    HistArgs hist;
    CLI::App* c_hist = c_classify->add_subcommand("hist", "response histogram over [0,1]");
    c_hist->add_option("--clf", hist.clf, "classifier file")->required();
    c_hist->add_option("--in", hist.in, "query point CSV")->required();
    c_hist->add_option("--bins", hist.bins, "number of bins");
    c_hist->add_option("--out", hist.out, "output CSV")->required();

    ValidateArgs val;
    CLI::App* c_val = app.add_subcommand("validate", "run the numerical oracle battery");
    c_val->add_option("--dim", val.dim, "restrict to one dimension");
    c_val->add_option("--seed", val.seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    set_thread_count(threads);

    try {
        if (app.got_subcommand(c_gen)) return run_gen(gen);
        if (app.got_subcommand(c_fit)) return run_fit(fita);
        if (app.got_subcommand(c_eval)) return run_eval(eval);
        if (app.got_subcommand(c_prof)) return run_profile(prof);
        if (app.got_subcommand(c_knn)) return run_knn(knn);
        if (app.got_subcommand(c_knnp)) return run_knn_profile(knnp);
        if (app.got_subcommand(c_classify)) {
            if (c_classify->got_subcommand(c_train)) return run_train(train);
            if (c_classify->got_subcommand(c_apply)) return run_apply(apply);
            if (c_classify->got_subcommand(c_hist)) return run_hist(hist);
        }
        if (app.got_subcommand(c_val)) return run_validate(val);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDimension;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
