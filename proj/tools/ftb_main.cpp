#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ftb/ftb.hpp"

namespace {

int run_mode(const std::string& config_path, const std::vector<std::string>& suites,
             const std::string& out_path, bool verdicts) {
    ftb::RunConfig cfg = ftb::load_config(config_path);
    if (!suites.empty()) cfg.suites = suites;
    if (!out_path.empty()) cfg.out_path = out_path;
    ftb::RunOutcome outcome = ftb::run(cfg, verdicts);
    std::string text = ftb::dump_report(outcome.report);
    if (!cfg.out_path.empty()) {
        ftb::emit_report(outcome.report, cfg.out_path);
        if (verdicts)
            std::printf("%s: %s -> %s\n", cfg.metric_name.c_str(),
                        outcome.all_pass ? "PASS" : "FAIL", cfg.out_path.c_str());
        else
            std::printf("%s: report -> %s\n", cfg.metric_name.c_str(), cfg.out_path.c_str());
    } else {
        std::fputs(text.c_str(), stdout);
    }
    return outcome.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Point-wise verification of Finsler tangent-bundle geometry"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::vector<std::string> suites;

    auto* verify = app.add_subcommand("verify", "run the selected suites and judge them");
    verify->add_option("--config", config_path, "run configuration file")->required();
    verify->add_option("--suite", suites, "suite selection (repeatable; overrides config)");
    verify->add_option("--out", out_path, "report output path (overrides config)");

    auto* report = app.add_subcommand("report", "compute residuals only, no verdicts");
    report->add_option("--config", config_path, "run configuration file")->required();
    report->add_option("--suite", suites, "suite selection (repeatable; overrides config)");
    report->add_option("--out", out_path, "report output path (overrides config)");

    auto* list = app.add_subcommand("list-metrics", "print the built-in metric registry");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& name : ftb::metric_names()) {
                ftb::FinslerFunction F = ftb::make_metric(name);
                std::printf("%-13s n=%d%s\n", name.c_str(), F.dim(),
                            name == "euclidean" || name == "randers_const"
                                ? "  (accepts metric.n; randers_const also metric.b)"
                                : "");
            }
            return 0;
        }
        return run_mode(config_path, suites, out_path, verify->parsed());
    } catch (const ftb::ConfigError& ex) {
        std::fprintf(stderr, "config error: %s\n", ex.what());
        return 1;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
}
