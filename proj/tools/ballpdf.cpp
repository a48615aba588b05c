#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <ballpdf/ballpdf.hpp>

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace ballpdf;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_domain = 3;
constexpr int exit_statistical = 4;

// standard-model neutral-current couplings
constexpr double coupling_electron = 0.964;
constexpr double coupling_proton = 0.036;
constexpr double coupling_neutron = -0.5;
constexpr double default_hard_core = 0.5e-13;

int exit_code(ErrorKind k)
{
    switch (k) {
    case ErrorKind::invalid_input: return exit_usage;
    case ErrorKind::efficiency:
    case ErrorKind::insufficient_data: return exit_statistical;
    default: return exit_domain;
    }
}

fs::path resolve_output(const std::string& path)
{
    fs::path p(path);
    if (const char* dir = std::getenv("BALLPDF_OUTPUT_DIR"); dir && *dir && p.is_relative()) p = fs::path(dir) / p;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
}

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary);
    if (!out) fail(ErrorKind::invalid_input, "cannot open " + p.string() + " for writing");
    out << text;
    if (!out) fail(ErrorKind::invalid_input, "failed writing " + p.string());
}

struct Common {
    int dimension = 3;
    double radius = 1.0;
    std::string density = "uniform";
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::uint64_t samples = 1000000;
    std::string output;
};

struct Run {
    std::string subcommand;
    ordered_json parameters = ordered_json::object();
    std::vector<fs::path> outputs;
    std::string method;
};

void write_manifest(const Run& run, const fs::path& primary, double seconds, const std::vector<std::string>& argv)
{
    ordered_json m;
    m["subcommand"] = run.subcommand;
    m["version"] = ballpdf::version;
    m["parameters"] = run.parameters;
    if (run.parameters.contains("seed")) m["seed"] = run.parameters["seed"];
    if (!run.method.empty()) m["method"] = run.method;
    m["outputs"] = ordered_json::array();
    for (const auto& p : run.outputs) m["outputs"].push_back(p.string());
    m["command_line"] = argv;
    m["duration_seconds"] = seconds;
    write_text(fs::path(primary.string() + ".manifest.json"), m.dump(2) + "\n");
}

void add_geometry(CLI::App* c, Common& o)
{
    c->add_option("-n,--dimension", o.dimension, "ball dimension n")->required()->check(CLI::Range(1, 66));
    c->add_option("-R,--radius", o.radius, "ball radius")->capture_default_str();
}

ordered_json common_parameters(const Common& o, const DensityModel& rho)
{
    ordered_json p;
    p["dimension"] = o.dimension;
    p["radius"] = o.radius;
    p["density"] = format_density(rho);
    return p;
}

int cmd_pdf(const Common& o, std::size_t grid, const std::string& repr, Run& run)
{
    const DensityModel rho = parse_density(o.density);
    const BallGeometry g = make_geometry(o.dimension, o.radius);
    AnalyticOptions opt;
    if (!repr.empty()) opt.representation = parse_representation(repr);
    opt.budget.samples = o.samples;
    opt.budget.seed = o.seed;
    opt.budget.stream = 1;
    opt.budget.threads = o.threads;
    if (grid < 2) fail(ErrorKind::invalid_input, "grid needs at least 2 points");
    const AnalyticPdf pdf = analytic_pdf(g, rho, opt);

    run.parameters = common_parameters(o, rho);
    run.parameters["grid"] = grid;
    run.parameters["representation"] = repr.empty() ? "default" : repr;
    run.parameters["samples"] = o.samples;
    run.parameters["seed"] = o.seed;
    run.method = pdf.method;

    std::string csv = "s,analytic_density\n";
    const double top = 2.0 * g.radius;
    for (std::size_t i = 0; i < grid; ++i) {
        const double s = i + 1 == grid ? top : top * static_cast<double>(i) / static_cast<double>(grid - 1);
        csv += format_double(s) + ',' + format_double(pdf.pointwise(s)) + '\n';
    }
    const fs::path out = resolve_output(o.output);
    write_text(out, csv);
    run.outputs.push_back(out);
    return exit_ok;
}

int cmd_compare(const Common& o, std::uint64_t pairs, std::size_t bins, double threshold, Run& run)
{
    const DensityModel rho = parse_density(o.density);
    const BallGeometry g = make_geometry(o.dimension, o.radius);
    AnalyticOptions opt;
    opt.budget.samples = o.samples;
    opt.budget.seed = o.seed;
    opt.budget.stream = 1;
    opt.budget.threads = o.threads;
    const AnalyticPdf pdf = analytic_pdf(g, rho, opt);

    run.parameters = common_parameters(o, rho);
    run.parameters["pairs"] = pairs;
    run.parameters["bins"] = bins;
    run.parameters["threshold"] = threshold;
    run.parameters["samples"] = o.samples;
    run.parameters["seed"] = o.seed;
    run.method = pdf.method;

    const SamplerConfig cfg{o.seed, 0, pairs, o.threads};
    const DistanceHistogram h = empirical_pair_pdf(g, rho, pairs, bins, cfg);
    const ComparisonReport rep = compare(h, pdf.f);

    const fs::path out = resolve_output(o.output);
    write_text(out, histogram_csv(h, rep));
    ordered_json j;
    j["chi_square"] = rep.chi_square;
    j["dof"] = rep.dof;
    j["p_value"] = rep.p_value;
    j["max_abs_deviation"] = rep.max_abs_deviation;
    j["threshold"] = threshold;
    j["pass"] = rep.p_value >= threshold;
    j["method"] = pdf.method;
    const fs::path report = fs::path(out.string() + ".report.json");
    write_text(report, j.dump(2) + "\n");
    run.outputs = {out, report};
    std::cout << j.dump() << "\n";
    return rep.p_value >= threshold ? exit_ok : exit_statistical;
}

int cmd_moment(const Common& o, const std::string& kind, int m, std::optional<double> sigma, std::optional<double> rc,
               Run& run)
{
    ordered_json j;
    j["dimension"] = o.dimension;
    j["m"] = m;
    if (kind == "uniform") {
        const BallGeometry g = make_geometry(o.dimension, o.radius);
        j["radius"] = o.radius;
        if (rc) {
            j["hard_core_radius"] = *rc;
            j["value"] = moment_hardcore(g, *rc, m);
            j["formula"] = "hard-core incomplete beta ratio H(m)/H(0)";
        } else {
            j["value"] = moment_uniform(g, m);
            j["formula"] = "uniform beta form 2^(n+m) n/(n+m) B((n+1)/2,(n+1+m)/2)/B((n+1)/2,1/2) R^m";
        }
    } else if (kind == "gaussian") {
        if (!sigma) fail(ErrorKind::invalid_input, "gaussian moments need --sigma");
        if (rc) fail(ErrorKind::unsupported, "hard-core moments are implemented for the uniform ball only");
        j["sigma"] = *sigma;
        j["value"] = moment_gaussian(o.dimension, *sigma, m);
        j["formula"] = "gaussian gamma ratio (2 sigma)^m Gamma((n+m)/2)/Gamma(n/2)";
    } else {
        fail(ErrorKind::invalid_input, "unknown moment density kind '" + kind + "'");
    }
    j["kind"] = kind;
    run.parameters = j;
    run.parameters.erase("value");
    run.parameters.erase("formula");
    const fs::path out = resolve_output(o.output);
    write_text(out, j.dump(2) + "\n");
    run.outputs.push_back(out);
    std::cout << j.dump() << "\n";
    return exit_ok;
}

struct EnergyArgs {
    std::string kind;
    int count = 2;
    double coupling = 1.0;
    std::optional<double> sigma;
    double rc = default_hard_core;
    std::optional<double> a2;
    std::string preset = "neutron";
};

double preset_a2(const std::string& name)
{
    if (name == "neutron") return coupling_neutron * coupling_neutron;
    if (name == "proton") return coupling_proton * coupling_proton;
    if (name == "electron") return coupling_electron * coupling_electron;
    fail(ErrorKind::invalid_input, "unknown coupling preset '" + name + "'");
}

int cmd_energy(const Common& o, const EnergyArgs& e, Run& run)
{
    ordered_json j;
    j["kind"] = e.kind;
    j["dimension"] = o.dimension;
    j["count"] = e.count;
    j["coupling"] = e.coupling;
    const double pairs = pair_count(e.count);
    auto need_sigma = [&] {
        if (!e.sigma) fail(ErrorKind::invalid_input, e.kind + " needs --sigma");
        j["sigma"] = *e.sigma;
        return *e.sigma;
    };
    if (e.kind == "coulomb") {
        const BallGeometry g = make_geometry(o.dimension, o.radius);
        j["radius"] = o.radius;
        j["pair_count"] = pairs;
        j["per_pair"] = coulomb_pair_energy(g, e.coupling);
        j["value"] = coulomb_self_energy({e.count, e.coupling, g});
    } else if (e.kind == "coulomb-gauss") {
        const double sg = need_sigma();
        j["pair_count"] = pairs;
        j["per_pair"] = coulomb_gaussian_pair_energy(o.dimension, sg, e.coupling);
        j["value"] = coulomb_gaussian(o.dimension, sg, e.count, e.coupling);
    } else if (e.kind == "nunubar" || e.kind == "nunubar-gauss") {
        if (o.dimension != 3) fail(ErrorKind::unsupported, "the exchange self-energy is implemented for n = 3");
        const double a2 = e.a2 ? *e.a2 : preset_a2(e.preset);
        j["hard_core_radius"] = e.rc;
        j["a2"] = a2;
        if (!e.a2) j["preset"] = e.preset;
        j["pair_count"] = pairs;
        if (e.kind == "nunubar") {
            const double R = o.radius;
            j["radius"] = R;
            const double v = neutrino_self_energy_uniform(R, e.rc, e.count, e.coupling, a2);
            const double lead = 3.0 * e.count * (e.count - 1.0) * e.coupling * a2
                / (16.0 * std::pow(detail::pi, 3) * e.rc * e.rc * R * R * R);
            j["value"] = v;
            j["leading_order"] = lead;
            j["ratio_to_leading"] = v / lead;
        } else {
            j["value"] = neutrino_self_energy_gaussian(need_sigma(), e.rc, e.count, e.coupling, a2);
        }
    } else {
        fail(ErrorKind::invalid_input, "unknown energy kind '" + e.kind + "'");
    }
    run.parameters = j;
    for (const char* k : {"value", "per_pair", "pair_count", "leading_order", "ratio_to_leading"}) run.parameters.erase(k);
    const fs::path out = resolve_output(o.output);
    write_text(out, j.dump(2) + "\n");
    run.outputs.push_back(out);
    std::cout << j.dump() << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pair-distance probability densities in n-dimensional balls"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ballpdf::version));

    Common o;

    std::size_t grid = 201;
    std::string repr;
    auto* pdf = app.add_subcommand("pdf", "tabulate the analytic density on a uniform grid over [0, 2R]");
    add_geometry(pdf, o);
    pdf->add_option("--density", o.density, "density spec")->capture_default_str();
    pdf->add_option("--grid", grid, "grid points")->capture_default_str();
    pdf->add_option("--representation", repr, "uniform-ball representation");
    pdf->add_option("--samples", o.samples, "integrand samples per point for Monte Carlo master formula")->capture_default_str();
    pdf->add_option("--seed", o.seed, "seed for Monte Carlo master formula")->capture_default_str();

    std::uint64_t pairs = 1000000;
    std::size_t bins = 64;
    double threshold = 0.001;
    auto* cmp = app.add_subcommand("compare", "histogram sampled pair distances and test against the analytic density");
    add_geometry(cmp, o);
    cmp->add_option("--density", o.density, "density spec")->capture_default_str();
    cmp->add_option("--pairs", pairs, "sampled pairs")->capture_default_str();
    cmp->add_option("--bins", bins, "histogram bins")->capture_default_str();
    cmp->add_option("--seed", o.seed, "seed")->capture_default_str();
    cmp->add_option("--threshold", threshold, "minimum chi-square p-value for exit 0")->capture_default_str();
    cmp->add_option("--samples", o.samples, "integrand samples per point for Monte Carlo master formula")->capture_default_str();

    std::string mkind = "uniform";
    int order = 1;
    std::optional<double> msigma, mrc;
    auto* mom = app.add_subcommand("moment", "closed-form <s^m>");
    add_geometry(mom, o);
    mom->add_option("-m,--order", order, "moment order m")->required();
    mom->add_option("--kind", mkind, "uniform | gaussian")->capture_default_str();
    mom->add_option("--sigma", msigma, "Gaussian width");
    mom->add_option("--rc", mrc, "hard-core radius (uniform only)");

    EnergyArgs e;
    auto* en = app.add_subcommand("energy", "pairwise self-energies");
    en->add_option("-n,--dimension", o.dimension, "ball dimension n")->capture_default_str()->check(CLI::Range(1, 66));
    en->add_option("-R,--radius", o.radius, "ball radius")->capture_default_str();
    en->add_option("--kind", e.kind, "coulomb | coulomb-gauss | nunubar | nunubar-gauss")->required();
    en->add_option("--count", e.count, "particle count Z or N")->capture_default_str();
    en->add_option("--coupling", e.coupling, "coupling q^2 or G_F^2 in caller units")->capture_default_str();
    en->add_option("--sigma", e.sigma, "Gaussian width");
    en->add_option("--rc", e.rc, "hard-core radius")->capture_default_str();
    en->add_option("--a2", e.a2, "coupling product a_i a_j (overrides --preset)");
    en->add_option("--preset", e.preset, "neutron | proton | electron")->capture_default_str();

    std::array<std::string, 4> outputs{"pdf.csv", "compare.csv", "moment.json", "energy.json"};
    const std::array<CLI::App*, 4> subs{pdf, cmp, mom, en};
    for (std::size_t i = 0; i < subs.size(); ++i) {
        subs[i]->add_option("-o,--output", outputs[i], "output file (BALLPDF_OUTPUT_DIR prefixes relative paths)")
            ->capture_default_str();
        subs[i]->add_option("--threads", o.threads, "worker threads; affects run time only")->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::CallForAllHelp& err) {
        return app.exit(err);
    } catch (const CLI::CallForVersion& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return exit_usage;
    }

    std::vector<std::string> args(argv, argv + argc);
    args.erase(args.begin());
    Run run;
    const auto t0 = std::chrono::steady_clock::now();
    int code = exit_ok;
    try {
        for (std::size_t i = 0; i < subs.size(); ++i)
            if (*subs[i]) {
                o.output = outputs[i];
                run.subcommand = subs[i]->get_name();
            }
        if (*pdf) code = cmd_pdf(o, grid, repr, run);
        else if (*cmp) code = cmd_compare(o, pairs, bins, threshold, run);
        else if (*mom) code = cmd_moment(o, mkind, order, msigma, mrc, run);
        else code = cmd_energy(o, e, run);
    } catch (const ballpdf::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_code(err.kind());
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_domain;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(run, run.outputs.front(), seconds, args);
    return code;
}
