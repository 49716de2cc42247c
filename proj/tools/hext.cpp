// Command-line front end: harmonic extension over point clouds, the 1-D
// reference demo, label propagation, refinement ladders, and the repeated
// trial protocol. Every subcommand is deterministic given its flags; CSV
// numbers carry 17 significant digits so outputs can serve as bitwise
// regression baselines.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hext/datasets.hpp"
#include "hext/error.hpp"
#include "hext/kernel.hpp"
#include "hext/methods.hpp"
#include "hext/ssl.hpp"

using json = nlohmann::ordered_json;
using namespace hext;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitUsage = 64;
constexpr int kExitFailure = 2;
constexpr int kExitInternal = 70;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CommonOpts {
    std::string metric = "graph";
    std::size_t k = 10;
    std::string t = "auto";
    double mu = 0.0;
    double delta = 0.1;
    std::string solver = "auto";
    double tol = 1e-10;
    std::uint64_t seed = 1;
    std::string out = ".";
    std::string format = "csv";
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts, bool with_metric = true) {
    if (with_metric)
        cmd->add_option("--metric", opts.metric,
                        "euclidean | cosine | graph | graph-cosine (default graph)");
    cmd->add_option("--k", opts.k, "neighbor count for the kNN graph (default 10)");
    cmd->add_option("--t", opts.t, "kernel bandwidth, or 'auto' for the mean-neighbor rule");
    cmd->add_option("--mu", opts.mu, "coupling override (default 1e4*n/m)");
    cmd->add_option("--delta", opts.delta, "layer exponent offset, in (0, 1/2)");
    cmd->add_option("--solver", opts.solver, "auto | cg | bicgstab | dense");
    cmd->add_option("--tol", opts.tol, "solver relative-residual target");
    cmd->add_option("--seed", opts.seed, "random seed");
    cmd->add_option("--out", opts.out, "output directory");
    cmd->add_option("--format", opts.format, "table format: csv | json");
}

GraphConfig graph_config(const CommonOpts& opts) {
    GraphConfig config;
    if (opts.metric == "euclidean") {
        config.metric = MetricKind::euclidean;
        config.graph_distances = false;
    } else if (opts.metric == "cosine") {
        config.metric = MetricKind::cosine;
        config.graph_distances = false;
    } else if (opts.metric == "graph") {
        config.metric = MetricKind::euclidean;
        config.graph_distances = true;
    } else if (opts.metric == "graph-cosine") {
        config.metric = MetricKind::cosine;
        config.graph_distances = true;
    } else {
        throw CLI::ValidationError("--metric", "unknown metric '" + opts.metric + "'");
    }
    config.k = opts.k;
    if (opts.t != "auto") {
        try {
            config.bandwidth = std::stod(opts.t);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--t", "expected a number or 'auto'");
        }
        if (!(config.bandwidth > 0.0)) throw CLI::ValidationError("--t", "must be positive");
    }
    return config;
}

SolveOptions solve_options(const CommonOpts& opts) {
    SolveOptions so;
    so.tolerance = opts.tol;
    if (opts.solver == "auto") so.method = SolveMethod::automatic;
    else if (opts.solver == "cg") so.method = SolveMethod::conjugate_gradient;
    else if (opts.solver == "bicgstab") so.method = SolveMethod::bicgstab;
    else if (opts.solver == "dense") so.method = SolveMethod::dense_direct;
    else throw CLI::ValidationError("--solver", "unknown solver '" + opts.solver + "'");
    return so;
}

ExtensionMethod parse_method(const std::string& name) {
    if (name == "glm") return ExtensionMethod::glm;
    if (name == "pim") return ExtensionMethod::pim;
    if (name == "vcm") return ExtensionMethod::vcm;
    if (name == "fem1d") return ExtensionMethod::fem1d;
    throw CLI::ValidationError("--method", "unknown method '" + name + "'");
}

json config_echo(const CommonOpts& opts) {
    json j;
    j["metric"] = opts.metric;
    j["k"] = opts.k;
    j["t"] = opts.t;
    j["mu"] = opts.mu;
    j["delta"] = opts.delta;
    j["solver"] = opts.solver;
    j["tol"] = opts.tol;
    j["seed"] = opts.seed;
    j["format"] = opts.format;
    return j;
}

std::filesystem::path prepare_out(const CommonOpts& opts) {
    std::filesystem::path dir(opts.out);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_meta(const std::filesystem::path& path, const CommonOpts& opts, json extra) {
    json meta;
    meta["version"] = kVersion;
    meta["seed"] = opts.seed;
    meta["config"] = config_echo(opts);
    for (auto& [key, value] : extra.items()) meta[key] = value;
    std::ofstream out(path);
    out << meta.dump(2) << "\n";
}

// A small table that can land as CSV or as a JSON array of row objects.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(const std::filesystem::path& base, const std::string& format) const {
        if (format == "json") {
            json arr = json::array();
            for (const auto& row : rows) {
                json obj;
                for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
                arr.push_back(obj);
            }
            std::ofstream out(base.string() + ".json");
            out << arr.dump(2) << "\n";
            return;
        }
        std::ofstream out(base.string() + ".csv");
        for (std::size_t i = 0; i < header.size(); ++i)
            out << header[i] << (i + 1 < header.size() ? "," : "\n");
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i)
                out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
};

PointCloud load_points_any(const std::string& path) {
    std::filesystem::path p(path);
    if (p.extension() == ".idx") return load_idx_images(path);
    if (p.extension() == ".coo") return densify(load_sparse_coo(path));
    return load_points_csv(path);
}

// Ground-truth labels: CSV uses 1-based classes as written; IDX bytes are
// shifted up by one so classes are 1-based.
std::vector<int> load_truth_any(const std::string& path, std::size_t n) {
    std::filesystem::path p(path);
    std::vector<int> truth;
    if (p.extension() == ".idx") {
        for (int raw : load_idx_labels(path)) truth.push_back(raw + 1);
    } else {
        std::map<std::size_t, int> labels = load_labels_csv(path);
        truth.assign(n, 0);
        for (const auto& [idx, cls] : labels) {
            if (idx >= n) fail(errc::invalid_parameter, "truth index out of range");
            truth[idx] = cls;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (truth[i] < 1) fail(errc::invalid_parameter, "truth must cover every point");
    }
    if (truth.size() != n) fail(errc::invalid_parameter, "truth size mismatch");
    return truth;
}

// Boundary values file: one "index,v1[,v2,...]" line per boundary point.
BoundaryCondition load_boundary(const std::string& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) fail(errc::io_error, "cannot open " + path);
    std::vector<std::size_t> indices;
    std::vector<std::vector<double>> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::vector<double> fields;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t pos = line.find(',', start);
            std::string tok = line.substr(start, pos == std::string::npos ? pos : pos - start);
            try {
                fields.push_back(std::stod(tok));
            } catch (const std::exception&) {
                fail(errc::parse_error, path + ":" + std::to_string(lineno) + ": bad number");
            }
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        if (fields.size() < 2)
            fail(errc::parse_error, path + ":" + std::to_string(lineno) + ": expected index,value");
        indices.push_back(static_cast<std::size_t>(fields[0]));
        values.push_back({fields.begin() + 1, fields.end()});
    }
    if (indices.empty()) fail(errc::parse_error, path + ": no boundary rows");
    BoundaryCondition bc;
    bc.indices = indices;
    bc.values = Matrix(indices.size(), values[0].size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (values[i].size() != values[0].size())
            fail(errc::parse_error, path + ": ragged value rows");
        for (std::size_t j = 0; j < values[i].size(); ++j) bc.values(i, j) = values[i][j];
    }
    bc.validate(n);
    return bc;
}

HarmonicField dispatch_extend(const SslPipeline& pipeline, const PointCloud& cloud,
                              ExtensionMethod method, const BoundaryCondition& bc,
                              const CommonOpts& opts) {
    SolveOptions so = solve_options(opts);
    switch (method) {
    case ExtensionMethod::glm: return extend_glm(pipeline.laplacian(), bc, so);
    case ExtensionMethod::pim: {
        PimParams params = PimParams::defaults(cloud.size(), bc.count());
        if (opts.mu > 0.0) params.mu = opts.mu;
        return extend_pim(pipeline.laplacian(), pipeline.kernel(), bc, params, so);
    }
    case ExtensionMethod::vcm: {
        VcmParams params{opts.delta};
        params.validate();
        return extend_vcm(pipeline.laplacian(), pipeline.proximity(bc.indices), bc, params, so);
    }
    case ExtensionMethod::fem1d: return extend_fem1d(cloud, bc, so);
    }
    fail(errc::invalid_parameter, "unreachable");
}

// ---------------------------------------------------------------------------
// demo1d

int cmd_demo1d(const CommonOpts& opts) {
    IntervalSample sample = sample_interval(198, opts.seed);
    const std::size_t n = sample.cloud.size();

    GraphConfig config = graph_config(opts);
    SslPipeline pipeline(sample.cloud, config);
    SolveOptions so = solve_options(opts);

    HarmonicField glm = extend_glm(pipeline.laplacian(), sample.bc, so);
    PimParams pim_params = PimParams::defaults(n, sample.bc.count());
    if (opts.mu > 0.0) pim_params.mu = opts.mu;
    HarmonicField pim = extend_pim(pipeline.laplacian(), pipeline.kernel(), sample.bc,
                                   pim_params, so);
    VcmParams vcm_params{opts.delta};
    vcm_params.validate();
    HarmonicField vcm = extend_vcm(pipeline.laplacian(), pipeline.proximity(sample.bc.indices),
                                   sample.bc, vcm_params, so);
    HarmonicField fem = extend_fem1d(sample.cloud, sample.bc, so);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sample.cloud.points(a, 0) < sample.cloud.points(b, 0);
    });

    Table table;
    table.header = {"x", "u_glm", "u_pim", "u_vcm", "u_fem1d", "u_true"};
    for (std::size_t i : order) {
        double x = sample.cloud.points(i, 0);
        table.rows.push_back({fmt17(x), fmt17(glm.values(i, 0)), fmt17(pim.values(i, 0)),
                              fmt17(vcm.values(i, 0)), fmt17(fem.values(i, 0)),
                              fmt17(interval_truth(x))});
    }
    std::filesystem::path dir = prepare_out(opts);
    table.write(dir / "demo1d", opts.format);

    json errors;
    auto record = [&](const char* name, const HarmonicField& field) {
        double linf = 0.0, acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double diff = field.values(i, 0) - interval_truth(sample.cloud.points(i, 0));
            linf = std::max(linf, std::fabs(diff));
            acc += diff * diff;
        }
        errors[name] = {{"linf", linf}, {"rms", std::sqrt(acc / static_cast<double>(n))}};
    };
    record("glm", glm);
    record("pim", pim);
    record("vcm", vcm);
    record("fem1d", fem);

    write_meta(dir / "demo1d_errors.json", opts,
               json{{"t", pipeline.bandwidth()}, {"mu", pim_params.mu}, {"n", n},
                    {"errors", errors}});
    return 0;
}

// ---------------------------------------------------------------------------
// extend

int cmd_extend(const CommonOpts& opts, const std::string& points_path,
               const std::string& boundary_path, const std::string& method_name) {
    PointCloud cloud = load_points_any(points_path);
    BoundaryCondition bc = load_boundary(boundary_path, cloud.size());
    ExtensionMethod method = parse_method(method_name);

    GraphConfig config = graph_config(opts);
    SslPipeline pipeline(cloud, config);
    HarmonicField field = dispatch_extend(pipeline, cloud, method, bc, opts);

    Table table;
    table.header = {"index"};
    for (std::size_t c = 0; c < field.values.cols(); ++c)
        table.header.push_back("u" + std::to_string(c));
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        std::vector<std::string> row{std::to_string(i)};
        for (std::size_t c = 0; c < field.values.cols(); ++c)
            row.push_back(fmt17(field.values(i, c)));
        table.rows.push_back(row);
    }
    std::filesystem::path dir = prepare_out(opts);
    table.write(dir / "field", opts.format);
    write_meta(dir / "extend_meta.json", opts,
               json{{"method", method_name},
                    {"points", points_path},
                    {"n", cloud.size()},
                    {"t", pipeline.bandwidth()},
                    {"solver", {{"iterations", field.report.iterations},
                                {"relative_residual", field.report.final_relative_residual},
                                {"converged", field.report.converged}}}});
    return 0;
}

// ---------------------------------------------------------------------------
// ssl

int cmd_ssl(const CommonOpts& opts, const std::string& points_path,
            const std::string& labels_path, const std::string& truth_path,
            const std::string& method_name) {
    PointCloud cloud = load_points_any(points_path);
    std::map<std::size_t, int> labels = load_labels_csv(labels_path);

    int classes = 0;
    for (const auto& [idx, cls] : labels) {
        (void)idx;
        if (cls < 1) fail(errc::invalid_parameter, "labels must be 1-based");
        classes = std::max(classes, cls);
    }
    std::vector<int> truth;
    if (!truth_path.empty()) {
        truth = load_truth_any(truth_path, cloud.size());
        for (int cls : truth) classes = std::max(classes, cls);
    }

    LabelAssignment assignment;
    if (method_name == "zhou") {
        GraphConfig config = graph_config(opts);
        assignment = zhou_lgc(cloud, labels, classes, config.metric);
    } else {
        LabeledDataset data{std::move(cloud), labels, classes};
        MethodConfig method;
        method.method = parse_method(method_name);
        method.mu = opts.mu;
        method.vcm = VcmParams{opts.delta};
        method.solver = solve_options(opts);
        assignment = run_ssl(data, method, graph_config(opts));
    }

    Table table;
    table.header = {"index", "label"};
    for (std::size_t i = 0; i < assignment.labels.size(); ++i)
        table.rows.push_back({std::to_string(i), std::to_string(assignment.labels[i])});
    std::filesystem::path dir = prepare_out(opts);
    table.write(dir / "labels", opts.format);

    json extra{{"method", method_name}, {"classes", classes}, {"n", assignment.labels.size()}};
    if (!truth.empty()) {
        std::size_t wrong = 0, unlabeled = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (labels.count(i)) continue;
            ++unlabeled;
            if (assignment.labels[i] != truth[i]) ++wrong;
        }
        extra["error_rate"] =
            unlabeled == 0 ? 0.0 : static_cast<double>(wrong) / static_cast<double>(unlabeled);
        extra["unlabeled"] = unlabeled;
    }
    write_meta(dir / "ssl_meta.json", opts, extra);
    return 0;
}

// ---------------------------------------------------------------------------
// convergence

struct LadderPoint {
    std::size_t level_n;
    double t;
    std::uint64_t replicate_seed;
    double pim_l2;
    double vcm_l2;
};

// One nested master draw per replicate; each level takes a prefix so that
// consecutive levels differ by genuine refinement rather than redraw luck.
LadderPoint ladder_level(bool disk_mode, const PointCloud& master, std::size_t master_n,
                         std::size_t n, double t, double delta, const SolveOptions& so) {
    PointCloud cloud;
    BoundaryCondition bc;
    if (disk_mode) {
        std::size_t m = static_cast<std::size_t>(2.0 * std::sqrt(static_cast<double>(n)));
        Matrix pts(n + m, 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < 2; ++j) pts(i, j) = master.points(i, j);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < 2; ++j) pts(n + i, j) = master.points(master_n + i, j);
        cloud = PointCloud::from_matrix(std::move(pts));
        bc.indices.resize(m);
        bc.values = Matrix(m, 1);
        for (std::size_t i = 0; i < m; ++i) {
            bc.indices[i] = n + i;
            bc.values(i, 0) = cloud.points(n + i, 0); // g = x on the circle
        }
    } else {
        std::size_t interior = n - 3;
        Matrix pts(n, 1);
        for (std::size_t i = 0; i < interior; ++i) pts(i, 0) = master.points(i, 0);
        pts(interior, 0) = 0.0;
        pts(interior + 1, 0) = 1.0;
        pts(interior + 2, 0) = 2.0;
        cloud = PointCloud::from_matrix(std::move(pts));
        bc.indices = {interior, interior + 1, interior + 2};
        bc.values = Matrix(3, 1);
        bc.values(1, 0) = 1.0;
    }

    KernelMatrix kernel =
        assemble_kernel(cloud, Metric::euclidean(), t, 4.0 * std::sqrt(t));
    GraphLaplacian laplacian = assemble_laplacian(kernel);
    PimParams pim_params = PimParams::defaults(cloud.size(), bc.count());
    HarmonicField pim = extend_pim(laplacian, kernel, bc, pim_params, so);
    BoundaryProximity prox = direct_proximity(cloud, MetricKind::euclidean, bc.indices);
    VcmParams vcm_params{delta};
    HarmonicField vcm = extend_vcm(laplacian, prox, bc, vcm_params, so);

    double layer = vcm_params.layer_radius(t);
    double pim_acc = 0.0, vcm_acc = 0.0;
    std::size_t pim_count = 0, vcm_count = 0;
    if (disk_mode) {
        const double two_pi = 6.283185307179586476925286766559;
        for (int ir = 1; ir <= 12; ++ir)
            for (int ia = 0; ia < 24; ++ia) {
                double r = (ir - 0.5) / 12.0 * 0.98;
                double theta = two_pi * ia / 24.0;
                std::vector<double> q{r * std::cos(theta), r * std::sin(theta)};
                double truth = q[0];
                double v =
                    interpolate_pim(pim, cloud, Metric::euclidean(), t, pim_params.mu, bc, q)[0];
                pim_acc += (v - truth) * (v - truth);
                ++pim_count;
                if (1.0 - r >= layer) {
                    double w = interpolate_vcm(vcm, cloud, Metric::euclidean(), t, q)[0];
                    vcm_acc += (w - truth) * (w - truth);
                    ++vcm_count;
                }
            }
    } else {
        for (int g = 1; g < 500; ++g) {
            double x = 2.0 * g / 500.0;
            std::vector<double> q{x};
            double truth = interval_truth(x);
            double v = interpolate_pim(pim, cloud, Metric::euclidean(), t, pim_params.mu, bc, q)[0];
            pim_acc += (v - truth) * (v - truth);
            ++pim_count;
            if (std::min({std::fabs(x), std::fabs(x - 1.0), std::fabs(x - 2.0)}) >= layer) {
                double w = interpolate_vcm(vcm, cloud, Metric::euclidean(), t, q)[0];
                vcm_acc += (w - truth) * (w - truth);
                ++vcm_count;
            }
        }
    }
    return {n, t, 0, std::sqrt(pim_acc / static_cast<double>(pim_count)),
            std::sqrt(vcm_acc / static_cast<double>(vcm_count))};
}

int cmd_convergence(const CommonOpts& opts, const std::string& shape, std::size_t replicates) {
    if (shape != "interval" && shape != "disk")
        throw CLI::ValidationError("--shape", "expected 'interval' or 'disk'");
    bool disk_mode = shape == "disk";
    SolveOptions so = solve_options(opts);

    const std::vector<std::size_t> levels{250, 500, 1000, 2000};
    const std::size_t master_n = levels.back();

    Table table;
    table.header = {"shape", "n", "t", "replicate_seed", "method", "l2_error"};
    Table summary;
    summary.header = {"shape", "n", "t", "method", "mean_l2_error"};

    for (std::size_t n : levels) {
        // per-window sample counts must grow for the trend to show, so the
        // bandwidth shrinks slower than the squared point spacing
        double t = disk_mode ? 0.15 / std::sqrt(static_cast<double>(n))
                             : 0.3 * std::pow(static_cast<double>(n), -2.0 / 3.0);
        double pim_mean = 0.0, vcm_mean = 0.0;
        for (std::size_t r = 0; r < replicates; ++r) {
            std::uint64_t seed = opts.seed + 1000 * r;
            PointCloud master = disk_mode
                                    ? sample_disk(master_n, 89, seed).cloud
                                    : sample_interval(master_n - 3, seed).cloud;
            LadderPoint point = ladder_level(disk_mode, master, master_n, n, t, opts.delta, so);
            table.rows.push_back({shape, std::to_string(n), fmt17(t), std::to_string(seed), "pim",
                                  fmt17(point.pim_l2)});
            table.rows.push_back({shape, std::to_string(n), fmt17(t), std::to_string(seed), "vcm",
                                  fmt17(point.vcm_l2)});
            pim_mean += point.pim_l2;
            vcm_mean += point.vcm_l2;
        }
        pim_mean /= static_cast<double>(replicates);
        vcm_mean /= static_cast<double>(replicates);
        summary.rows.push_back({shape, std::to_string(n), fmt17(t), "pim", fmt17(pim_mean)});
        summary.rows.push_back({shape, std::to_string(n), fmt17(t), "vcm", fmt17(vcm_mean)});
    }

    std::filesystem::path dir = prepare_out(opts);
    table.write(dir / "convergence", opts.format);
    summary.write(dir / "convergence_summary", opts.format);
    write_meta(dir / "convergence_meta.json", opts,
               json{{"shape", shape},
                    {"levels", levels},
                    {"replicates", replicates},
                    {"error_metric", "mean interpolant L2 error over replicates; vcm restricted "
                                     "to points at least one layer radius from the boundary"}});
    return 0;
}

// ---------------------------------------------------------------------------
// trials

int cmd_trials(const CommonOpts& opts, const std::string& points_path,
               const std::string& truth_path, const std::string& methods_csv,
               std::size_t k_labels, std::size_t n_trials) {
    std::vector<std::string> methods;
    std::size_t start = 0;
    while (start <= methods_csv.size()) {
        std::size_t pos = methods_csv.find(',', start);
        methods.push_back(methods_csv.substr(start, pos == std::string::npos ? pos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    for (const std::string& m : methods)
        if (m != "glm" && m != "pim" && m != "vcm" && m != "fem1d" && m != "zhou")
            throw CLI::ValidationError("--method", "unknown method '" + m + "'");

    PointCloud cloud = load_points_any(points_path);
    std::vector<int> truth = load_truth_any(truth_path, cloud.size());
    int classes = 0;
    for (int cls : truth) classes = std::max(classes, cls);

    MethodConfig base;
    base.mu = opts.mu;
    base.vcm = VcmParams{opts.delta};
    base.solver = solve_options(opts);

    TrialOutcome outcome = run_trials(cloud, truth, classes, k_labels, n_trials, methods,
                                      graph_config(opts), base, opts.seed);

    Table records;
    records.header = {"method", "k_labels", "trial", "error_rate"};
    for (const TrialRecord& r : outcome.records)
        records.rows.push_back({r.method, std::to_string(r.k_labels), std::to_string(r.trial),
                                fmt17(r.error_rate)});
    Table summary;
    summary.header = {"method", "k_labels", "mean", "std"};
    for (const TrialSummary& s : outcome.summary)
        summary.rows.push_back({s.method, std::to_string(s.k_labels), fmt17(s.mean_error),
                                fmt17(s.stddev_error)});

    std::filesystem::path dir = prepare_out(opts);
    records.write(dir / "trials", opts.format);
    summary.write(dir / "trials_summary", opts.format);
    write_meta(dir / "trials_meta.json", opts,
               json{{"methods", methods},
                    {"k_labels", k_labels},
                    {"trials", n_trials},
                    {"classes", classes},
                    {"n", cloud.size()},
                    {"error_bars", "mean plus/minus one sample standard deviation over trials"}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"harmonic extension toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;

    CLI::App* demo = app.add_subcommand("demo1d", "run the 1-D interval instance through all "
                                                  "four methods");
    CommonOpts demo_opts;
    demo_opts.metric = "euclidean"; // dense pairwise weights on the line
    demo_opts.seed = 12;
    demo_opts.t = "0.01";
    add_common_flags(demo, demo_opts, false);

    std::string points_path, boundary_path, truth_path;
    std::string method_name = "pim";
    CLI::App* extend = app.add_subcommand("extend", "harmonic extension of boundary values over "
                                                    "a point file");
    extend->add_option("--points", points_path, "points file (.csv, .idx, .coo)")->required();
    extend->add_option("--labels", boundary_path, "boundary values file: index,value[,...]")
        ->required();
    extend->add_option("--method", method_name, "glm | pim | vcm | fem1d");
    add_common_flags(extend, opts);

    std::string ssl_points, ssl_labels, ssl_truth;
    std::string ssl_method = "pim";
    CLI::App* ssl = app.add_subcommand("ssl", "label propagation from a partial labeling");
    ssl->add_option("--points", ssl_points, "points file (.csv, .idx, .coo)")->required();
    ssl->add_option("--labels", ssl_labels, "partial labels csv: index,class")->required();
    ssl->add_option("--truth", ssl_truth, "full labels (.csv or .idx) for scoring");
    ssl->add_option("--method", ssl_method, "glm | pim | vcm | fem1d | zhou");
    CommonOpts ssl_opts;
    add_common_flags(ssl, ssl_opts);

    std::string shape = "interval";
    std::size_t replicates = 5;
    CLI::App* conv = app.add_subcommand("convergence", "interpolant error across a refinement "
                                                       "ladder");
    conv->add_option("--shape", shape, "interval | disk");
    conv->add_option("--trials", replicates, "replicate draws per level (default 5)");
    CommonOpts conv_opts;
    add_common_flags(conv, conv_opts, false);

    std::string trials_points, trials_truth;
    std::string trials_methods = "glm,pim,vcm";
    std::size_t k_labels = 5, n_trials = 20;
    CLI::App* trials = app.add_subcommand("trials", "repeated label-budget evaluation protocol");
    trials->add_option("--points", trials_points, "points file (.csv, .idx, .coo)")->required();
    trials->add_option("--truth", trials_truth, "full labels (.csv or .idx)")->required();
    trials->add_option("--method,--methods", trials_methods,
                       "comma list: glm,pim,vcm,fem1d,zhou");
    trials->add_option("--k-labels", k_labels, "labeled points per class");
    trials->add_option("--trials", n_trials, "number of trials");
    CommonOpts trials_opts;
    add_common_flags(trials, trials_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (demo->parsed()) return cmd_demo1d(demo_opts);
        if (extend->parsed()) return cmd_extend(opts, points_path, boundary_path, method_name);
        if (ssl->parsed()) return cmd_ssl(ssl_opts, ssl_points, ssl_labels, ssl_truth, ssl_method);
        if (conv->parsed()) return cmd_convergence(conv_opts, shape, replicates);
        if (trials->parsed())
            return cmd_trials(trials_opts, trials_points, trials_truth, trials_methods, k_labels,
                              n_trials);
    } catch (const Error& e) {
        json record{{"error", errc_name(e.code())}, {"message", e.what()}};
        std::cerr << record.dump() << "\n";
        return kExitFailure;
    } catch (const CLI::ValidationError& e) {
        json record{{"error", "usage"}, {"message", e.what()}};
        std::cerr << record.dump() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        json record{{"error", "internal"}, {"message", e.what()}};
        std::cerr << record.dump() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
