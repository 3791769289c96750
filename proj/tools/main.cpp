#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wallflux/config.hpp"
#include "wallflux/error.hpp"
#include "wallflux/runner.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
    int quad_order = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "run configuration (JSON document)");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory override");
    cmd->add_option("--threads", opts.threads, "worker threads override");
    cmd->add_option("--quad-order", opts.quad_order, "surface quadrature order override");
}

wallflux::RunConfig load(const CommonOpts& opts) {
    wallflux::RunConfig cfg = wallflux::load_config(opts.config_path);
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (opts.threads > 0) cfg.threads = opts.threads;
    if (opts.quad_order > 0) {
        const double factor = static_cast<double>(opts.quad_order) / cfg.quad.surface_order;
        cfg.quad = cfg.quad.scaled(factor);
    }
    return cfg;
}

int finish(const wallflux::ReportDocument& doc, const wallflux::RunConfig& cfg) {
    doc.write(cfg.out_dir);
    for (const auto& r : doc.identities)
        std::printf("%-36s %s  residual=%.3e rel=%.3e tol=%.3e\n", r.id.c_str(),
                    r.pass ? "pass" : "FAIL", r.abs_residual, r.rel_residual, r.tolerance);
    for (const auto& row : doc.rate_fits.rows)
        std::printf("%-36s %s  exponent=%s limit=%s\n", row[0].c_str(), row[8].c_str(),
                    row[1].c_str(), row[5].c_str());
    for (const auto& p : doc.pairings)
        if (doc.command == "pair")
            std::printf("%-36s value=%.17g quad_error=%.3e\n", p.id.c_str(), p.value,
                        p.quad_error);
    std::printf("%s: %s (%.2fs), outputs in %s\n", doc.command.c_str(),
                doc.all_pass ? "all verdicts pass" : "VERDICT FAILURE", doc.elapsed_seconds,
                cfg.out_dir.c_str());
    return doc.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"near-wall momentum budget diagnostics"};
    app.require_subcommand(1);

    CommonOpts vopts, sopts, popts;
    std::string pairing_id;

    CLI::App* verify = app.add_subcommand("verify", "run the configured identity suite");
    add_common(verify, vopts);
    CLI::App* sweep = app.add_subcommand("sweep", "run the configured parameter sweep");
    add_common(sweep, sopts);
    CLI::App* pair = app.add_subcommand("pair", "evaluate a single configured pairing");
    add_common(pair, popts);
    pair->add_option("id", pairing_id, "pairing id from the config")->required();
    app.add_subcommand("schema", "print the configuration schema");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("schema")) {
            std::printf("%s\n", wallflux::config_schema().dump(2).c_str());
            return 0;
        }
        if (app.got_subcommand("verify")) {
            const wallflux::RunConfig cfg = load(vopts);
            return finish(wallflux::cmd_verify(cfg), cfg);
        }
        if (app.got_subcommand("sweep")) {
            const wallflux::RunConfig cfg = load(sopts);
            return finish(wallflux::cmd_sweep(cfg), cfg);
        }
        if (app.got_subcommand("pair")) {
            const wallflux::RunConfig cfg = load(popts);
            return finish(wallflux::cmd_pair(cfg, pairing_id), cfg);
        }
    } catch (const wallflux::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const wallflux::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
