#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "longmem/cli.hpp"

namespace {

constexpr const char* kUsage = R"(usage: longmem <subcommand> [--key value ...] [--config file] [--print-config]

subcommands:
  simulate   generate an AR(1) path driven by the configured noise (CSV t,value)
  estimate   moment estimates from a CSV path (exit 4 when clamped)
  fmap       tabulate theta -> f(theta) over --grid lo:hi:step (CSV theta,f)
  constants  print the CLT variance constants as key=value lines
  mc         Monte Carlo replications; --out writes per-replication CSV
  sweep      mean absolute errors over --n_grid n1,n2,... (CSV)
  check      run the built-in self-check battery

common keys: model=white|fgn|arfima|custom  H= d= sigma= custom_file=
             theta= alpha= n= reps= seed= workers= tol=
environment: LONGMEM_SEED is the fallback master seed
)";

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        std::cout << kUsage;
        return args.empty() ? 2 : 0;
    }
    std::optional<std::string> env_seed;
    if (const char* s = std::getenv("LONGMEM_SEED")) env_seed = s;
    try {
        const longmem::cli::RunConfig cfg = longmem::cli::parse_config(args, env_seed);
        return longmem::cli::dispatch(cfg);
    } catch (const longmem::cli::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
