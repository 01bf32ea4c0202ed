#include "qsum/analysis.hpp"
#include "qsum/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;

// largest joint dimension n·k a dense simulation request may ask for
constexpr std::size_t dim_cap = 2048;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void emit(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::fwrite(payload.data(), 1, payload.size(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << payload;
}

std::vector<unsigned> parse_values(const std::string& text) {
    std::vector<unsigned> vals;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("--values: '" + item + "' is not a residue");
        }
        if (used != item.size() || v > std::numeric_limits<unsigned>::max())
            throw std::invalid_argument("--values: '" + item + "' is not a residue");
        vals.push_back(static_cast<unsigned>(v));
        pos = comma + 1;
    }
    return vals;
}

qsum::FunctionTable draw_table(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    std::mt19937_64 rng(seed);
    const std::uint64_t top = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t leftover = (top % k + 1) % k;  // 2^64 mod k
    std::vector<unsigned> vals(n);
    for (unsigned& v : vals) {
        std::uint64_t x = rng();
        while (leftover != 0 && x > top - leftover) x = rng();
        v = static_cast<unsigned>(x % k);
    }
    return qsum::FunctionTable(k, std::move(vals));
}

struct TableOpts {
    std::optional<std::size_t> n, k;
    std::string values;
    std::string values_file;
    std::optional<std::uint64_t> seed;
};

void add_table_options(CLI::App* cmd, TableOpts& o) {
    cmd->add_option("--n", o.n, "table length");
    cmd->add_option("--k", o.k, "modulus (values live in Z_k)");
    cmd->add_option("--values", o.values, "table as comma-separated residues");
    cmd->add_option("--values-file", o.values_file,
                    "JSON file {\"k\": ..., \"values\": [...]}")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "RNG seed (also used to draw a random table)");
}

// inline --values wins over --values-file; with neither, a seeded uniform
// random table is drawn
qsum::FunctionTable resolve_table(const TableOpts& o, bool& random) {
    random = false;
    if (!o.values.empty()) {
        const std::vector<unsigned> vals = parse_values(o.values);
        if (o.n && *o.n != vals.size())
            throw std::invalid_argument("--n disagrees with the number of --values");
        if (!o.k) throw std::invalid_argument("--k is required with --values");
        return qsum::FunctionTable(*o.k, vals);
    }
    if (!o.values_file.empty()) {
        std::ifstream in(o.values_file);
        const auto doc = nlohmann::json::parse(in);
        if (!doc.contains("k") || !doc.contains("values"))
            throw std::invalid_argument("--values-file: need \"k\" and \"values\" keys");
        const auto k = doc["k"].get<std::size_t>();
        const auto vals = doc["values"].get<std::vector<unsigned>>();
        if (o.k && *o.k != k)
            throw std::invalid_argument("--k disagrees with the values file");
        if (doc.contains("n") && doc["n"].get<std::size_t>() != vals.size())
            throw std::invalid_argument("values file: \"n\" disagrees with \"values\"");
        if (o.n && *o.n != vals.size())
            throw std::invalid_argument("--n disagrees with the values file");
        return qsum::FunctionTable(k, vals);
    }
    if (!o.n || !o.k)
        throw std::invalid_argument("--n and --k are required when no table is given");
    random = true;
    return draw_table(*o.n, *o.k, o.seed.value_or(0));
}

void check_dim(const qsum::FunctionTable& f) {
    if (f.n() > dim_cap / f.k())
        throw std::invalid_argument("instance too large: need n*k <= " +
                                    std::to_string(dim_cap));
}

void put_table(ordered_json& j, const qsum::FunctionTable& f, bool random) {
    j["n"] = f.n();
    j["k"] = f.k();
    j["values"] = f.values();
    j["values_random"] = random;
    j["sum"] = f.sum();
}

int do_run(const TableOpts& opts, std::size_t r, const std::string& out_path) {
    bool random = false;
    const qsum::FunctionTable f = resolve_table(opts, random);
    check_dim(f);
    const qsum::RunReport rep = qsum::run_sum(f, r, opts.seed);

    ordered_json j;
    put_table(j, f, random);
    j["r"] = rep.params.r;
    j["s"] = rep.params.s;
    j["w"] = rep.params.w;
    j["distribution"] = rep.distribution.probs();
    j["success_prob"] = rep.success_prob;
    j["success_fraction"] =
        qsum::fraction_string(qsum::success_probability(f.n(), f.k(), r));
    j["approx_radius"] = rep.approx_radius;
    j["approx_prob"] = rep.approx_prob;
    j["central_radius"] = rep.central_radius;
    j["central_prob"] = rep.central_prob;
    j["queries_used"] = rep.queries_used;
    j["queries_unused"] = rep.queries_unused;
    if (rep.seed) j["seed"] = *rep.seed;
    if (rep.sampled_prediction) j["sampled_prediction"] = *rep.sampled_prediction;
    emit(out_path, j.dump(2) + "\n");
    return 0;
}

int do_dist(const TableOpts& opts, std::size_t r, const std::string& format,
            const std::string& out_path) {
    bool random = false;
    const qsum::FunctionTable f = resolve_table(opts, random);
    check_dim(f);
    const qsum::RunReport rep = qsum::run_sum(f, r);

    if (format == "csv") {
        std::string payload = "y,prob\n";
        for (std::size_t y = 0; y < f.k(); ++y)
            payload += std::to_string(y) + "," + fmt_double(rep.distribution[y]) + "\n";
        emit(out_path, payload);
        return 0;
    }
    ordered_json j;
    put_table(j, f, random);
    j["r"] = r;
    j["distribution"] = rep.distribution.probs();
    emit(out_path, j.dump(2) + "\n");
    return 0;
}

int do_sweep(std::size_t n, std::size_t k, const std::string& format,
             const std::string& out_path) {
    if (n > 4096) throw std::invalid_argument("sweep: need n <= 4096");
    const qsum::SweepCurves curves = qsum::sweep_curves(n, k);

    if (format == "json") {
        ordered_json j;
        j["n"] = n;
        j["k"] = k;
        j["points"] = ordered_json::array();
        for (std::size_t q = 0; q <= n; ++q) {
            const qsum::Rational& step = curves.success.points[q].p;
            const qsum::Rational pq = qsum::vandam_identify_prob(n, k, q);
            const qsum::Rational& bound = curves.bound.points[q].p;
            j["points"].push_back({{"q", q},
                                   {"sum_success", qsum::to_double(step)},
                                   {"sum_success_fraction", qsum::fraction_string(step)},
                                   {"vandam_pq", qsum::to_double(pq)},
                                   {"vandam_pq_fraction", qsum::fraction_string(pq)},
                                   {"vandam_bound", qsum::to_double(bound)},
                                   {"vandam_bound_fraction", qsum::fraction_string(bound)}});
        }
        emit(out_path, j.dump(2) + "\n");
        return 0;
    }
    std::string payload = "q,sum_success,vandam_pq,vandam_bound\n";
    for (std::size_t q = 0; q <= n; ++q) {
        payload += std::to_string(q);
        payload += "," + fmt_double(qsum::to_double(curves.success.points[q].p));
        payload += "," + fmt_double(qsum::to_double(qsum::vandam_identify_prob(n, k, q)));
        payload += "," + fmt_double(qsum::to_double(curves.bound.points[q].p));
        payload += "\n";
    }
    emit(out_path, payload);
    return 0;
}

int do_estimator(std::size_t k, std::size_t s, std::size_t a,
                 const std::string& format, const std::string& out_path) {
    if (k > dim_cap) throw std::invalid_argument("estimator: need k <= 2048");
    if (format == "json") {
        ordered_json j;
        j["k"] = k;
        j["s"] = s;
        j["a"] = a;
        j["peak_prob"] = qsum::estimator_prob(k, s, a, a);
        j["central_radius"] = k / (2 * s);
        j["central_mass"] = qsum::central_mass(k, s);
        std::vector<double> probs(k);
        for (std::size_t y = 0; y < k; ++y) probs[y] = qsum::estimator_prob(k, s, a, y);
        j["probs"] = probs;
        emit(out_path, j.dump(2) + "\n");
        return 0;
    }
    std::string payload = "y,prob\n";
    for (std::size_t y = 0; y < k; ++y)
        payload += std::to_string(y) + "," + fmt_double(qsum::estimator_prob(k, s, a, y)) + "\n";
    emit(out_path, payload);
    return 0;
}

int do_trace(const TableOpts& opts, const std::string& which,
             const std::string& out_path) {
    const qsum::SmallCase which_case = which == "two-trits"
                                           ? qsum::SmallCase::two_trits
                                           : qsum::SmallCase::three_trits;
    TableOpts shaped = opts;
    shaped.n = which == "two-trits" ? 2 : 3;
    shaped.k = shaped.k ? shaped.k : std::optional<std::size_t>{3};
    bool random = false;
    const qsum::FunctionTable f = resolve_table(shaped, random);
    const auto steps = qsum::trace_small(f, which_case);

    ordered_json j;
    j["case"] = which;
    put_table(j, f, random);
    j["steps"] = ordered_json::array();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        ordered_json amps = ordered_json::array();
        for (const qsum::cx& amp : steps[i].amps())
            amps.push_back({amp.real(), amp.imag()});
        j["steps"].push_back({{"step", i}, {"amplitudes", amps}});
    }
    emit(out_path, j.dump(2) + "\n");
    return 0;
}

int do_verify(bool extended, const std::string& out_path) {
    qsum::GridSpec grid;
    const char* env = std::getenv("QSUM_GRID_EXTENDED");
    if (extended || (env && std::string(env) == "1")) {
        grid.max_n = 5;
        grid.max_k = 5;
    }
    const qsum::VerificationReport report = qsum::check_suite(grid);
    emit(out_path, qsum::report_json(report) + "\n");
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact simulator and analysis toolkit for modular sum estimation"};
    app.require_subcommand(1);

    TableOpts run_opts;
    std::size_t run_r = 0;
    std::string run_out;
    CLI::App* run_cmd = app.add_subcommand(
        "run", "simulate one instance and report the exact outcome law");
    add_table_options(run_cmd, run_opts);
    run_cmd->add_option("--r", run_r, "queries saved (the run uses n-r)")->required();
    run_cmd->add_option("--out", run_out, "write the report here instead of stdout");

    TableOpts dist_opts;
    std::size_t dist_r = 0;
    std::string dist_out, dist_format = "json";
    CLI::App* dist_cmd =
        app.add_subcommand("dist", "exact distribution of the predicted sum");
    add_table_options(dist_cmd, dist_opts);
    dist_cmd->add_option("--r", dist_r, "queries saved")->required();
    dist_cmd->add_option("--format", dist_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    dist_cmd->add_option("--out", dist_out, "output file");

    std::size_t sweep_n = 0, sweep_k = 0;
    std::string sweep_out, sweep_format = "csv";
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "success-vs-queries curves for q = 0..n");
    sweep_cmd->add_option("--n", sweep_n, "table length")->required();
    sweep_cmd->add_option("--k", sweep_k, "modulus")->required();
    sweep_cmd->add_option("--format", sweep_format, "csv or json")
        ->check(CLI::IsMember({"json", "csv"}));
    sweep_cmd->add_option("--out", sweep_out, "output file");

    std::size_t est_k = 0, est_s = 0, est_a = 0;
    std::string est_out, est_format = "csv";
    CLI::App* est_cmd = app.add_subcommand(
        "estimator", "measurement law of the s-component estimator state");
    est_cmd->add_option("--k", est_k, "modulus")->required();
    est_cmd->add_option("--s", est_s, "superposition size")->required();
    est_cmd->add_option("--a", est_a, "true residue (default 0)");
    est_cmd->add_option("--format", est_format, "csv or json")
        ->check(CLI::IsMember({"json", "csv"}));
    est_cmd->add_option("--out", est_out, "output file");

    TableOpts trace_opts;
    std::string trace_case, trace_out;
    CLI::App* trace_cmd = app.add_subcommand(
        "trace", "step-by-step states of a fully worked small case");
    trace_cmd->add_option("--case", trace_case, "two-trits or three-trits")
        ->required()
        ->check(CLI::IsMember({"two-trits", "three-trits"}));
    add_table_options(trace_cmd, trace_opts);
    trace_cmd->add_option("--out", trace_out, "output file");

    bool verify_extended = false;
    std::string verify_out;
    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "run the exhaustive verification suite");
    verify_cmd->add_flag("--extended", verify_extended,
                         "use the n,k <= 5 grid (also: QSUM_GRID_EXTENDED=1)");
    verify_cmd->add_option("--out", verify_out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run_cmd->parsed()) return do_run(run_opts, run_r, run_out);
        if (dist_cmd->parsed()) return do_dist(dist_opts, dist_r, dist_format, dist_out);
        if (sweep_cmd->parsed()) return do_sweep(sweep_n, sweep_k, sweep_format, sweep_out);
        if (est_cmd->parsed()) return do_estimator(est_k, est_s, est_a, est_format, est_out);
        if (trace_cmd->parsed()) return do_trace(trace_opts, trace_case, trace_out);
        if (verify_cmd->parsed()) return do_verify(verify_extended, verify_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
