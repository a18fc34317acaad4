// pasq_cli: build states, rasterize them, add/subtract photons, run the verification suites.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pasq/pasq.hpp"

namespace fs = std::filesystem;
using namespace pasq;

namespace {

const char* kFormats = R"(File formats:
  gauss-v1 (JSON)  closed-form gaussian states
      {"format":"gauss-v1","components":[{"weight":w,"theta":t,"sigma_x":sx,"sigma_p":sp,
        "mean_x":mx,"mean_p":mp}, ...]}           mean_x/mean_p optional, weights sum to 1
      {"format":"gauss-v1","kind":"angular-average","sigma_x":sx}
  fock-v1 (JSON)   truncated Fock amplitudes of a pure state
      {"format":"fock-v1","trunc":N,"amps":[[re,im], ...]}
  wigner-grid-v1 (CSV)  Wigner function samples
      # wigner-grid-v1 x0 dx nx p0 dp np
      # key value                                  optional metadata lines
      x,p,value                                    nx*np rows, x outer, p inner
  Two-column CSV (fig3)  header line then x,y rows.
Output directory: relative -o paths resolve against --output-dir, else $PASQ_OUTPUT_DIR, else ".".
Exit status: 0 success, 1 failed check or degenerate input, 2 usage, configuration or format error.)";

struct Common {
    std::optional<double> extent;
    std::optional<std::size_t> points;
    int order = phasespace::kDefaultStencilOrder;
    std::uint64_t seed = 0;
    std::string output_dir;
};

fs::path output_root(const Common& c) {
    if (!c.output_dir.empty()) return c.output_dir;
    if (const char* env = std::getenv("PASQ_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

fs::path resolve_output(const Common& c, const std::string& given, const std::string& fallback) {
    const fs::path p = given.empty() ? fs::path(fallback) : fs::path(given);
    return p.is_absolute() ? p : output_root(c) / p;
}

grid::GridGeometry choose_geometry(const Common& c, const grid::GridGeometry& automatic) {
    verify::SuiteConfig cfg;
    cfg.extent = c.extent;
    cfg.points = c.points;
    cfg.validate();
    return cfg.geometry(automatic);
}

std::vector<std::pair<std::string, std::string>> meta(const Common& c, const std::string& source) {
    return {{"source", source}, {"seed", std::to_string(c.seed)}};
}

nlohmann::json read_json(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    grid::write_atomically(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

/// Loads a state file (gauss-v1 or fock-v1) as a grid, or a wigner-grid-v1 CSV as is.
grid::WignerGrid load_grid(const Common& c, const fs::path& path) {
    std::ifstream probe(path);
    if (!probe) throw FormatError("cannot open " + path.string());
    const int first = probe.peek();
    probe.close();
    if (first == '#') return grid::read_grid_csv(path);
    const nlohmann::json j = read_json(path);
    const std::string format = j.value("format", std::string());
    if (format == "gauss-v1") {
        const auto state = gaussian::closed_form_from_json(j);
        return phasespace::rasterize(state, choose_geometry(c, phasespace::auto_geometry(state)));
    }
    if (format == "fock-v1") {
        const auto rho = fock::DensityMatrix::pure(fock::fock_from_json(j).normalized());
        return phasespace::wigner_from_density(rho, choose_geometry(c, phasespace::auto_geometry(rho)));
    }
    throw FormatError(path.string() + ": unrecognized format '" + format + "'");
}

std::string fmt(double v) { return grid::detail::fmt17(v); }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photon addition and subtraction on single-mode states: Fock, gaussian and Wigner-grid tools."};
    app.footer(kFormats);
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    Common common;
    app.add_option("--output-dir", common.output_dir, "Directory for relative output paths (overrides PASQ_OUTPUT_DIR)");
    app.add_option("--seed", common.seed, "Recorded in output headers; no command is random");

    auto add_geometry = [&](CLI::App* sub) {
        sub->add_option("--extent", common.extent, "Grid half-extent in x and p (default: from the state)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--points", common.points, "Grid points per axis, odd, >= 33 (default: from the state, >= 257)");
    };
    auto add_order = [&](CLI::App* sub) {
        sub->add_option("--order", common.order, "Finite-difference order")->check(CLI::IsMember({2, 4, 6, 8, 10}));
    };

    // state
    auto* state_cmd = app.add_subcommand("state", "Write a state file");
    std::string kind, state_out;
    double sigma_x = 2.0, z = std::log(2.0), theta = 0.0;
    std::optional<double> sigma_p;
    std::optional<std::size_t> number;
    std::size_t trunc = 0;
    std::vector<double> thetas = {0.0, std::numbers::pi / 4};
    std::vector<double> weights;
    state_cmd->add_option("kind", kind, "fock | gaussian | mixture | angular-average")
        ->required()
        ->check(CLI::IsMember({"fock", "gaussian", "mixture", "angular-average"}));
    state_cmd->add_option("--sigma-x", sigma_x, "Position width (gaussian, mixture, angular-average)");
    state_cmd->add_option("--sigma-p", sigma_p, "Momentum width (gaussian; default 1/sigma_x)");
    state_cmd->add_option("--theta", theta, "Rotation angle (gaussian)");
    state_cmd->add_option("--thetas", thetas, "Component angles (mixture)");
    state_cmd->add_option("--weights", weights, "Component weights (mixture; default equal)");
    state_cmd->add_option("--z", z, "Squeezing parameter (fock squeezed vacuum)");
    state_cmd->add_option("--number", number, "Number state |n> instead of a squeezed vacuum (fock)");
    state_cmd->add_option("--trunc", trunc, "Fock truncation N (default ceil(32 cosh 2z))");
    state_cmd->add_option("-o,--output", state_out, "Output file (default state.json)");

    // wigner
    auto* wigner_cmd = app.add_subcommand("wigner", "Rasterize a state file to a wigner-grid-v1 CSV");
    std::string input, grid_out;
    wigner_cmd->add_option("input", input, "gauss-v1 or fock-v1 state file")->required();
    wigner_cmd->add_option("-o,--output", grid_out, "Output grid (default wigner.csv)");
    add_geometry(wigner_cmd);

    // add / sub
    auto* add_cmd = app.add_subcommand("add", "Photon-added outcome grid (renormalized)");
    auto* sub_cmd = app.add_subcommand("sub", "Photon-subtracted outcome grid (renormalized)");
    for (auto* cmd : {add_cmd, sub_cmd}) {
        cmd->add_option("input", input, "wigner-grid-v1 CSV or state file")->required();
        cmd->add_option("-o,--output", grid_out, "Output grid (default added.csv / subtracted.csv)");
        add_geometry(cmd);
        add_order(cmd);
    }

    // residual
    auto* residual_cmd = app.add_subcommand("residual", "Identity-of-outcome residual of a grid or state");
    std::optional<double> fixed_R, max_residual;
    residual_cmd->add_option("input", input, "wigner-grid-v1 CSV or state file")->required();
    residual_cmd->add_option("--R", fixed_R, "Use this R instead of int(add)/int(sub)");
    residual_cmd->add_option("--max-residual", max_residual, "Exit 1 when the residual exceeds this value");
    add_geometry(residual_cmd);
    add_order(residual_cmd);

    // figure
    auto* figure_cmd = app.add_subcommand("figure", "Write figure data (fig1, fig2, fig3)");
    std::string figure, figure_out;
    figure_cmd->add_option("which", figure, "fig1 | fig2 | fig3")->required()->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    figure_cmd->add_option("-o,--output", figure_out, "Output directory (default: the output directory)");
    add_geometry(figure_cmd);
    add_order(figure_cmd);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Run verification suites");
    std::string suite = "all", report_out;
    std::vector<std::string> choices = verify::suite_names();
    choices.push_back("all");
    verify_cmd->add_option("--suite", suite, "Suite name or all")->check(CLI::IsMember(choices));
    verify_cmd->add_option("--trunc", trunc, "Fock truncation N (default per state)");
    verify_cmd->add_option("--json", report_out, "Also write the reports as JSON");
    add_geometry(verify_cmd);
    add_order(verify_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*state_cmd) {
            nlohmann::json j;
            if (kind == "fock") {
                if (number) {
                    j = fock::to_json(fock::FockVector::number_state(*number, trunc ? trunc : *number + 8));
                } else {
                    j = fock::to_json(fock::squeezed_vacuum(z, trunc ? trunc : fock::suggested_trunc(z)));
                }
            } else if (kind == "gaussian") {
                j = gaussian::to_json(gaussian::GaussianWignerSpec::single(sigma_x, sigma_p.value_or(1.0 / sigma_x), theta));
            } else if (kind == "mixture") {
                if (weights.empty()) weights.assign(thetas.size(), 1.0 / static_cast<double>(thetas.size()));
                if (weights.size() != thetas.size()) throw ConfigError("--weights and --thetas differ in length");
                std::vector<gaussian::GaussianComponent> comps;
                for (std::size_t k = 0; k < thetas.size(); ++k)
                    comps.push_back(gaussian::GaussianComponent::pure(sigma_x, thetas[k], weights[k]));
                j = gaussian::to_json(gaussian::GaussianWignerSpec(std::move(comps)));
            } else {
                j = gaussian::to_json(gaussian::AngularAverage(sigma_x));
            }
            const fs::path out = resolve_output(common, state_out, "state.json");
            write_json(out, j);
            std::cout << out.string() << '\n';
            return 0;
        }
        if (*wigner_cmd) {
            const auto g = load_grid(common, input);
            const fs::path out = resolve_output(common, grid_out, "wigner.csv");
            grid::write_grid_csv(out, g, meta(common, input));
            std::cout << out.string() << '\n';
            return 0;
        }
        if (*add_cmd || *sub_cmd) {
            const bool adding = static_cast<bool>(*add_cmd);
            const auto g = load_grid(common, input);
            const auto pair = phasespace::ladder_terms(g, common.order);
            const auto& term = adding ? pair.added : pair.subtracted;
            const double integral = grid::integrate(term);
            const auto outcome = phasespace::renormalize(term);
            const fs::path out = resolve_output(common, grid_out, adding ? "added.csv" : "subtracted.csv");
            grid::write_grid_csv(out, outcome, meta(common, input));
            const double i_add = grid::integrate(pair.added), i_sub = grid::integrate(pair.subtracted);
            std::cout << "output " << out.string() << '\n' << "integral " << fmt(integral) << '\n';
            if (std::fabs(i_sub) < phasespace::kNormalizationTolerance)
                std::cout << "R_used undefined (subtracted term integrates to zero)\n";
            else
                std::cout << "R_used " << fmt(i_add / i_sub) << '\n';
            return 0;
        }
        if (*residual_cmd) {
            const auto g = load_grid(common, input);
            const auto res = phasespace::identity_residual(g, fixed_R, common.order);
            std::cout << "residual " << fmt(res.residual) << '\n'
                      << "R_used " << fmt(res.R_used) << '\n'
                      << "sup_residual " << fmt(res.sup_residual) << '\n';
            if (max_residual && !(res.residual <= *max_residual)) {
                std::cerr << "residual " << fmt(res.residual) << " exceeds " << fmt(*max_residual) << '\n';
                return 1;
            }
            return 0;
        }
        if (*figure_cmd) {
            verify::SuiteConfig cfg;
            cfg.extent = common.extent;
            cfg.points = common.points;
            cfg.stencil_order = common.order;
            const fs::path dir = figure_out.empty() ? output_root(common) : resolve_output(common, figure_out, ".");
            fs::create_directories(dir);
            for (const auto& f : verify::figure_data(figure, cfg, dir)) std::cout << f.string() << '\n';
            return 0;
        }
        if (*verify_cmd) {
            verify::SuiteConfig cfg;
            cfg.extent = common.extent;
            cfg.points = common.points;
            cfg.stencil_order = common.order;
            cfg.trunc = trunc;
            const std::vector<std::string> names = suite == "all" ? verify::suite_names() : std::vector{suite};
            nlohmann::json all = nlohmann::json::array();
            std::size_t failures = 0;
            for (const auto& name : names) {
                const auto rep = verify::run_suite(name, cfg);
                for (const auto& c : rep.cases)
                    std::printf("%s  %-18s %s  measured=%.6g %s %.3g\n", c.pass ? "PASS" : "FAIL", name.c_str(),
                                c.label.c_str(), c.measured, c.relation == verify::Relation::AtMost ? "<=" : ">=",
                                c.bound);
                for (const auto& n : rep.notes) std::printf("note  %-18s %s\n", name.c_str(), n.c_str());
                failures += rep.failures();
                all.push_back(rep.to_json());
            }
            if (!report_out.empty()) write_json(resolve_output(common, report_out, "report.json"), all);
            std::printf("%zu failure(s)\n", failures);
            return failures == 0 ? 0 : 1;
        }
    } catch (const DegenerateError& e) {
        std::cerr << "degenerate input: " << e.what() << '\n';
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n' << app.help();
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
