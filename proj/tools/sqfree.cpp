// Command-line front end: every pipeline behind one binary with
// deterministic file outputs. Exit codes: 0 ok, 2 usage, 3 budget
// exceeded, 4 internal consistency failure.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "sqfree/analysis.hpp"
#include "sqfree/enumerate.hpp"
#include "sqfree/genfun.hpp"
#include "sqfree/morphism.hpp"
#include "sqfree/roots.hpp"
#include "sqfree/serialize.hpp"
#include "sqfree/svg.hpp"
#include "sqfree/thermo.hpp"

namespace {

namespace fs = std::filesystem;
using sqfree::Json;

void emit_json(const Json& doc, const std::string& out_path) {
    if (out_path.empty())
        std::cout << doc.dump(2) << "\n";
    else
        sqfree::write_json(out_path, doc);
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        sqfree::write_text(out_path, text);
}

bool wants_csv(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

std::string name_of(const Json& doc, const std::string& path) {
    if (doc.contains("name") && doc["name"].is_string())
        return doc["name"].get<std::string>();
    return fs::path(path).stem().string();
}

void run_count(const sqfree::RunConfig& cfg, int n, std::optional<int> ell,
               bool by_letter, const std::string& out) {
    if (by_letter) {
        if (ell)
            throw sqfree::UsageError("cli", "count",
                                     "--by-letter tabulates the unrestricted "
                                     "count; drop --ell");
        auto table = sqfree::count_by_letter(n, cfg);
        if (wants_csv(out))
            emit_text(sqfree::triangle_to_csv(table), out);
        else
            emit_json(sqfree::triangle_to_json(table), out);
        return;
    }
    auto series = ell ? sqfree::count_lsf(*ell, n, cfg)
                      : sqfree::count_square_free(n, cfg);
    if (wants_csv(out))
        emit_text(sqfree::series_to_csv(ell, series), out);
    else
        emit_json(sqfree::series_to_json(ell, series), out);
}

void run_genfun(const sqfree::RunConfig& cfg, int ell, const std::string& out,
                const std::string& text_out) {
    auto gf = sqfree::rational_gf(ell, cfg);
    if (out.empty() && text_out.empty()) {
        emit_text(sqfree::gf_to_text(ell, gf), "");
        return;
    }
    if (!out.empty()) sqfree::write_json(out, sqfree::gf_to_json(ell, gf));
    if (!text_out.empty()) sqfree::write_text(text_out, sqfree::gf_to_text(ell, gf));
}

void run_poles(const sqfree::RunConfig& cfg, int ell, int precision,
               const std::string& out, const std::string& svg) {
    auto gf = sqfree::rational_gf(ell, cfg);
    auto set = sqfree::pole_zero_report(gf, precision);
    auto dominant = sqfree::dominant_real_root(gf.den, ell);
    emit_json(sqfree::poles_to_json(set, dominant), out);
    if (!svg.empty())
        sqfree::write_text(svg, sqfree::pole_chart_svg(set, dominant));
}

void run_triple_verify(const sqfree::RunConfig& cfg, const std::string& path,
                       int depth, const std::string& out) {
    Json doc = sqfree::load_json(path);
    auto triple = sqfree::triple_from_json(doc);
    auto cert = sqfree::verify_triple(triple, depth, cfg);
    emit_json(sqfree::certificate_to_json(name_of(doc, path), triple, cert), out);
}

void run_triple_freq(const std::string& path, const std::string& out) {
    Json doc = sqfree::load_json(path);
    auto triple = sqfree::triple_from_json(doc);
    auto matrix = sqfree::substitution_matrix(triple);
    auto freq = sqfree::pf_frequencies(matrix);
    emit_json(sqfree::frequencies_to_json(name_of(doc, path), matrix, freq), out);
}

/// Rows 0..n_keep of a triangle, for feeding shallower estimators.
sqfree::CountTable truncate_table(const sqfree::CountTable& table, int n_keep) {
    sqfree::CountTable out;
    out.rows.assign(table.rows.begin(),
                    table.rows.begin() + (n_keep + 1));
    return out;
}

std::vector<sqfree::Rational> critical_q_grid() {
    using sqfree::Rational;
    return {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3),
            Rational(1),    Rational(3, 2), Rational(2),    Rational(3),
            Rational(4)};
}

sqfree::CriticalCurve desk_critical_curve(const sqfree::RunConfig& cfg,
                                          const sqfree::CountTable& table,
                                          int depth) {
    auto estimator = [&cfg](const sqfree::CountSeries& s) {
        auto pooled = sqfree::pooled_estimate(
            s, sqfree::default_family(static_cast<int>(s.values.size())), cfg);
        return std::pair<double, double>(pooled.x_c_est, pooled.x_c_spread);
    };
    return sqfree::critical_curve(truncate_table(table, depth),
                                  critical_q_grid(), estimator, "dlog-pade",
                                  cfg);
}

void run_thermo(const sqfree::RunConfig& cfg, int n, const std::string& curve,
                int depth, int points, const std::string& out,
                const std::string& svg) {
    if (!svg.empty() && curve != "critical")
        throw sqfree::UsageError("cli", "thermo",
                                 "--svg draws the critical curve only");
    if (curve == "free-energy") {
        auto table = sqfree::count_by_letter(n, cfg);
        auto tt = sqfree::make_thermo_table(table, n, sqfree::default_q_grid(),
                                            cfg);
        emit_text(sqfree::free_energy_csv(tt), out);
        return;
    }
    if (curve == "entropy") {
        auto table = sqfree::count_by_letter(n, cfg);
        auto ec = sqfree::entropy_curve(table, sqfree::default_eps_grid(points),
                                        n, cfg);
        emit_text(sqfree::entropy_csv(ec), out);
        return;
    }
    if (depth > n)
        throw sqfree::UsageError("cli", "thermo", "--depth exceeds --n");
    auto table = sqfree::count_by_letter(depth, cfg);
    auto cc = desk_critical_curve(cfg, table, depth);
    emit_text(sqfree::critical_csv(cc), out);
    if (!svg.empty()) sqfree::write_text(svg, sqfree::phase_diagram_svg(cc));
}

Json analyze_json(const sqfree::RunConfig& cfg, const sqfree::CountSeries& series,
                  const std::string& family) {
    auto orders = sqfree::named_family(
        family, static_cast<int>(series.values.size()));
    auto est = sqfree::pooled_estimate(series, orders, cfg);
    Json doc;
    doc["family_name"] = family;
    doc["n_terms"] = static_cast<int>(series.values.size());
    Json body = sqfree::estimate_to_json(est);
    for (auto& [key, value] : body.items()) doc[key] = value;
    return doc;
}

void run_analyze(const sqfree::RunConfig& cfg, const std::string& input,
                 const std::string& family, const std::string& out) {
    auto series = sqfree::series_from_json(sqfree::load_json(input));
    emit_json(analyze_json(cfg, series, family), out);
}

void run_extent(const sqfree::RunConfig& cfg, int k, int bound,
                const std::string& out) {
    emit_json(sqfree::extent_to_json(sqfree::letter_extent(k, bound, cfg)), out);
}

void run_reproduce(const sqfree::RunConfig& cfg, const std::string& scale,
                   const std::string& out_dir, const std::string& fixtures) {
    if (scale != "desk")
        throw sqfree::UsageError("cli", "reproduce",
                                 "only --scale desk is supported");
    fs::create_directories(fs::path(out_dir) / "triples");
    auto at = [&](const std::string& leaf) {
        return (fs::path(out_dir) / leaf).string();
    };

    // Exact counts to n = 45; also the analyzer input.
    auto counts = sqfree::count_square_free(45, cfg);
    sqfree::write_json(at("counts.json"),
                       sqfree::series_to_json(std::nullopt, counts));

    // Truncation caps 0..10: degrees, certified radius, entropy bound.
    Json cap_rows = Json::array();
    std::string caps_csv = "ell,d_num,d_den,x_c,entropy_bound\n";
    std::optional<sqfree::RationalGF> gf_top;
    for (int ell = 0; ell <= 10; ++ell) {
        auto gf = sqfree::rational_gf(ell, cfg);
        auto dominant = sqfree::dominant_real_root(gf.den, ell);
        std::string x_c = sqfree::fmt_bigfloat_fixed(dominant.x_c, 9);
        std::string bound =
            sqfree::fmt_bigfloat_fixed(sqfree::BigFloat(1) / dominant.x_c, 8);
        Json row;
        row["ell"] = ell;
        row["d_num"] = gf.d_num;
        row["d_den"] = gf.d_den;
        row["x_c"] = x_c;
        row["entropy_bound"] = bound;
        cap_rows.push_back(std::move(row));
        caps_csv += std::to_string(ell) + "," + std::to_string(gf.d_num) + "," +
                    std::to_string(gf.d_den) + "," + x_c + "," + bound + "\n";
        if (ell == 10) gf_top = std::move(gf);
    }
    Json caps;
    caps["rows"] = std::move(cap_rows);
    sqfree::write_json(at("caps.json"), caps);
    sqfree::write_text(at("caps.csv"), caps_csv);

    // Pole/zero geometry of the deepest cap.
    auto set = sqfree::pole_zero_report(*gf_top, 50);
    auto dominant = sqfree::dominant_real_root(gf_top->den, 10);
    sqfree::write_json(at("poles.json"), sqfree::poles_to_json(set, dominant));
    sqfree::write_text(at("poles.svg"), sqfree::pole_chart_svg(set, dominant));

    // Singularity estimate from the full-depth series.
    sqfree::write_json(at("estimate.json"),
                       analyze_json(cfg, counts, "default"));

    // Substitution certificates with exact frequencies.
    const char* names[] = {"zech_subs",   "m18_pair",   "m29",
                           "m30_alpha1",  "m30_alpha2", "m33_alpha1",
                           "m33_alpha2",  "m35"};
    for (const char* name : names) {
        Json doc = sqfree::load_json(
            (fs::path(fixtures) / (std::string(name) + ".json")).string());
        auto triple = sqfree::triple_from_json(doc);
        auto cert = sqfree::verify_triple(triple, 3, cfg);
        auto matrix = sqfree::substitution_matrix(triple);
        auto freq = sqfree::pf_frequencies(matrix);
        Json bundle;
        bundle["certificate"] = sqfree::certificate_to_json(name, triple, cert);
        bundle["frequencies"] = sqfree::frequencies_to_json(name, matrix, freq);
        sqfree::write_json(at(std::string("triples/") + name + ".json"),
                           bundle);
    }

    // Thermodynamics at n = 40 plus the estimated critical curve.
    auto table = sqfree::count_by_letter(40, cfg);
    auto tt = sqfree::make_thermo_table(table, 40, sqfree::default_q_grid(), cfg);
    sqfree::write_text(at("free_energy.csv"), sqfree::free_energy_csv(tt));
    auto ec = sqfree::entropy_curve(table, sqfree::default_eps_grid(41), 40, cfg);
    sqfree::write_text(at("entropy.csv"), sqfree::entropy_csv(ec));
    auto cc = desk_critical_curve(cfg, table, 30);
    sqfree::write_text(at("critical.csv"), sqfree::critical_csv(cc));
    sqfree::write_text(at("phase_diagram.svg"), sqfree::phase_diagram_svg(cc));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Ternary square-free words: exact counts, generating functions, "
        "pole structure, substitution certificates, thermodynamics and "
        "series analysis"};
    app.require_subcommand(1);
    app.fallthrough();  // accept the global options after the subcommand too

    sqfree::RunConfig cfg;
    app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)")
        ->capture_default_str();
    app.add_option("--budget", cfg.node_budget, "search node ceiling")
        ->envname("SQFREE_BUDGET")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "root-finder start layout perturbation")
        ->capture_default_str();

    std::function<void()> action;

    auto* count = app.add_subcommand("count", "count square-free words exactly");
    struct {
        int n = 0;
        int ell = 0;
        bool by_letter = false;
        std::string out;
    } c;
    count->add_option("--n", c.n, "maximum length")
        ->required()
        ->check(CLI::NonNegativeNumber);
    auto* c_ell = count->add_option(
        "--ell", c.ell, "square period cap (omit for fully square-free)");
    c_ell->check(CLI::NonNegativeNumber);
    count->add_flag("--by-letter", c.by_letter,
                    "tabulate by letter-a count instead of a plain series");
    count->add_option("--out", c.out,
                      "output file, .json or .csv (stdout JSON if omitted)");
    count->callback([&] {
        action = [&] {
            run_count(cfg, c.n,
                      c_ell->count() ? std::optional<int>(c.ell) : std::nullopt,
                      c.by_letter, c.out);
        };
    });

    auto* genfun = app.add_subcommand(
        "genfun", "rational generating function of a truncation cap");
    struct {
        int ell = 0;
        std::string out, text;
    } g;
    genfun->add_option("--ell", g.ell, "square period cap")
        ->required()
        ->check(CLI::NonNegativeNumber);
    genfun->add_option("--out", g.out, "JSON output file");
    genfun->add_option("--text", g.text, "plain-text polynomial output file");
    genfun->callback([&] {
        action = [&] { run_genfun(cfg, g.ell, g.out, g.text); };
    });

    auto* poles = app.add_subcommand(
        "poles", "poles and zeros of a cap's generating function");
    struct {
        int ell = 0;
        int precision = 50;
        std::string out, svg;
    } p;
    poles->add_option("--ell", p.ell, "square period cap")
        ->required()
        ->check(CLI::NonNegativeNumber);
    poles->add_option("--precision", p.precision, "root digits")
        ->check(CLI::Range(5, 90))
        ->capture_default_str();
    poles->add_option("--out", p.out, "JSON output file (stdout if omitted)");
    poles->add_option("--svg", p.svg, "complex-plane chart output file");
    poles->callback([&] {
        action = [&] { run_poles(cfg, p.ell, p.precision, p.out, p.svg); };
    });

    auto* triple = app.add_subcommand(
        "triple", "substitution triples: certificates and frequencies");
    triple->require_subcommand(1);
    struct {
        std::string fixture, out;
        int depth = 3;
    } t;
    auto* verify = triple->add_subcommand(
        "verify", "check square-freeness of every bounded substitution");
    verify->add_option("fixture", t.fixture, "fixture JSON path")
        ->required()
        ->check(CLI::ExistingFile);
    verify->add_option("--depth", t.depth, "input length to exhaust")
        ->check(CLI::Range(3, 12))
        ->capture_default_str();
    verify->add_option("--out", t.out, "JSON output file (stdout if omitted)");
    verify->callback([&] {
        action = [&] { run_triple_verify(cfg, t.fixture, t.depth, t.out); };
    });
    auto* freq = triple->add_subcommand(
        "freq", "letter-count matrix and exact stationary frequencies");
    freq->add_option("fixture", t.fixture, "fixture JSON path")
        ->required()
        ->check(CLI::ExistingFile);
    freq->add_option("--out", t.out, "JSON output file (stdout if omitted)");
    freq->callback([&] { action = [&] { run_triple_freq(t.fixture, t.out); }; });

    auto* thermo = app.add_subcommand(
        "thermo", "letter-weighted ensemble curves as CSV");
    struct {
        int n = 40;
        int depth = 30;
        int points = 41;
        std::string curve, out, svg;
    } th;
    thermo->add_option("--n", th.n, "word length for the finite-size curves")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    thermo->add_option("--curve", th.curve, "which curve to emit")
        ->required()
        ->check(CLI::IsMember({"free-energy", "critical", "entropy"}));
    thermo->add_option("--depth", th.depth,
                       "series depth for the critical estimator")
        ->check(CLI::Range(10, 45))
        ->capture_default_str();
    thermo
        ->add_option("--points", th.points, "density grid size for entropy")
        ->check(CLI::Range(2, 2001))
        ->capture_default_str();
    thermo->add_option("--out", th.out, "CSV output file (stdout if omitted)");
    thermo->add_option("--svg", th.svg, "chart output file (critical only)");
    thermo->callback([&] {
        action = [&] {
            run_thermo(cfg, th.n, th.curve, th.depth, th.points, th.out, th.svg);
        };
    });

    auto* analyze = app.add_subcommand(
        "analyze", "pooled singularity estimate from a counts file");
    struct {
        std::string input, family = "default", out;
    } a;
    analyze->add_option("--input", a.input, "counts JSON path")
        ->required()
        ->check(CLI::ExistingFile);
    analyze->add_option("--family", a.family,
                        "approximant family preset (default, diag0..diag9)")
        ->capture_default_str();
    analyze->add_option("--out", a.out, "JSON output file (stdout if omitted)");
    analyze->callback([&] {
        action = [&] { run_analyze(cfg, a.input, a.family, a.out); };
    });

    auto* extent = app.add_subcommand(
        "extent", "shortest and longest words with a given letter-a count");
    struct {
        int k = 0;
        int bound = -1;
        std::string out;
    } e;
    extent->add_option("--k", e.k, "letter-a count")
        ->required()
        ->check(CLI::NonNegativeNumber);
    extent->add_option("--bound", e.bound,
                       "search length ceiling (-1 picks 4k+3)")
        ->capture_default_str();
    extent->add_option("--out", e.out, "JSON output file (stdout if omitted)");
    extent->callback([&] {
        action = [&] { run_extent(cfg, e.k, e.bound, e.out); };
    });

    auto* reproduce = app.add_subcommand(
        "reproduce", "regenerate the desk-scale artefact tree");
    struct {
        std::string scale, out = "artifacts", fixtures = "fixtures";
    } r;
    reproduce->add_option("--scale", r.scale, "artefact scale (desk)")
        ->required();
    reproduce->add_option("--out", r.out, "output directory")
        ->capture_default_str();
    reproduce->add_option("--fixtures", r.fixtures, "fixture directory")
        ->capture_default_str();
    reproduce->callback([&] {
        action = [&] { run_reproduce(cfg, r.scale, r.out, r.fixtures); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    try {
        action();
    } catch (const sqfree::UsageError& err) {
        std::cerr << sqfree::error_to_json(err).dump() << "\n";
        return 2;
    } catch (const sqfree::BudgetError& err) {
        std::cerr << sqfree::error_to_json(err).dump() << "\n";
        return 3;
    } catch (const sqfree::Error& err) {
        std::cerr << sqfree::error_to_json(err).dump() << "\n";
        return 4;
    } catch (const std::exception& err) {
        Json doc;
        doc["error"] = {{"module", "cli"},
                        {"operation", "run"},
                        {"reason", err.what()}};
        std::cerr << doc.dump() << "\n";
        return 4;
    }
    return 0;
}
