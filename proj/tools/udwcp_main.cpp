// Command-line front end: reads a JSON run config (--config or stdin) and
// writes CSV/JSON profiles to the output directory.

#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "udwcp/commands.hpp"

namespace {

std::pair<long, long> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            const long v = std::stol(text);
            return {v, v};
        }
        return {std::stol(text.substr(0, colon)), std::stol(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw udwcp::ConfigError("range '" + text + "' must look like LO:HI");
    }
}

}  // namespace

int main(int argc, char** argv) {
    using namespace udwcp;
    using namespace udwcp::cli;

    CLI::App app{"Casimir-Polder potential and detector excitation in a 1D Dirichlet cavity"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir = ".";
    std::string format = "csv";
    app.add_option("--config", config_path, "JSON run config (default: read from stdin)");
    app.add_option("--output", output_dir, "Output directory");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    CommandOptions opt;
    std::string panel = "pexc";
    std::string n_range = "1:25", k_range = "1:25";
    double sigma = 0.0;

    auto* potential = app.add_subcommand("potential", "Casimir-Polder potential E_CP(x)");
    potential->add_flag("--split", opt.split, "Also emit the E1 and E2 columns");

    auto* excite = app.add_subcommand("excite", "Excitation probability (sigma-averaged by default)");
    auto* sigma_opt = excite->add_option("--sigma", sigma, "Interaction time; omit for the sigma average");

    app.add_subcommand("force", "Casimir-Polder force -dE_CP/dx on the interior grid points");
    app.add_subcommand("universal", "Universal profile F(x)");

    auto* prop = app.add_subcommand("proportionality", "Check E_CP against Omega(alpha-1)/2 * p_av");
    prop->add_option("--tolerance", opt.tolerance, "Pass threshold on the max relative deviation");

    auto* fmap = app.add_subcommand("fidelity-map", "Truncation fidelity over (N, K) at x = L/2");
    fmap->add_option("--panel", panel, "pexc or ecp")->check(CLI::IsMember({"pexc", "ecp"}));
    fmap->add_option("--n-range", n_range, "Odd-mode counts N as LO:HI");
    fmap->add_option("--k-range", k_range, "Gap indices K (Omega = omega_{2K+1}) as LO:HI");
    fmap->add_flag("--abs-fidelity", opt.abs_fidelity, "Report |a_N| / |S_N|");

    auto* bec = app.add_subcommand("bec", "Excited fraction of a Thomas-Fermi cloud vs. its center");
    bec->add_option("--r-tf", opt.r_tf, "Thomas-Fermi radius (repeatable); overrides the config");
    bec->add_option("--order", opt.quad.order, "Gauss-Legendre nodes per panel");
    bec->add_option("--panels", opt.quad.panels, "Quadrature panels");

    auto* oracle = app.add_subcommand("oracle", "Fixed-length extended-precision sums");
    oracle->add_option("--terms", opt.terms, "Number of modes summed")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    RunConfig rc;
    try {
        if (config_path.empty()) {
            std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
            rc = parse_run_config(text);
        } else {
            rc = load_run_config(config_path);
        }
        opt.panel = panel == "ecp" ? FidelityPanel::casimir_polder : FidelityPanel::excitation;
        opt.n_range = parse_range(n_range);
        opt.k_range = parse_range(k_range);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (*sigma_opt) opt.sigma = sigma;
    rc.output.dir = output_dir;
    rc.output.format = format == "json" ? OutputFormat::json : OutputFormat::csv;

    const std::string name = app.get_subcommands().front()->get_name();
    return run_command(name, rc, opt, std::cerr);
}
