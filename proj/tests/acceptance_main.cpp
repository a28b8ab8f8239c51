// Acceptance suite runner: one pass/fail line per criterion, exit 1 on any
// failure.  `--seed N`, `--strict`, `--only k[,k...]` are forwarded to the
// suite.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "oscidos/verify.hpp"

int main(int argc, char** argv) {
    oscidos::verify::Options opt;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--strict")) {
            opt.strict = true;
        } else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) {
            opt.seed = std::strtoull(argv[++i], nullptr, 10);
        } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
            const std::string arg = argv[++i];
            std::size_t pos = 0;
            while (pos < arg.size()) {
                opt.only.push_back(std::atoi(arg.c_str() + pos));
                const auto comma = arg.find(',', pos);
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        } else {
            std::fprintf(stderr, "usage: %s [--seed N] [--strict] [--only k[,k...]]\n", argv[0]);
            return 2;
        }
    }

    const auto results = oscidos::verify::run_acceptance(opt);
    for (const auto& r : results)
        std::printf("[%s] %2d/16 %-24s measured=%.3e bound=%.3e (%.1fs) %s\n",
                    r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.measured, r.bound,
                    r.seconds, r.detail.c_str());
    if (!oscidos::verify::all_pass(results)) {
        std::printf("acceptance: FAILURES PRESENT\n");
        return 1;
    }
    std::printf("acceptance: all %zu criteria passed\n", results.size());
    return 0;
}
