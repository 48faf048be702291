// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Usage: acceptance [--quick] [--golden-dir DIR]

#include <cstring>
#include <iostream>

#include "polyrad/acceptance.hpp"

int main(int argc, char** argv) {
    polyrad::acceptance::Options opts;
    opts.golden_dir = POLYRAD_GOLDEN_DIR;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            opts.quick = true;
        } else if (std::strcmp(argv[i], "--golden-dir") == 0 && i + 1 < argc) {
            opts.golden_dir = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--quick] [--golden-dir DIR]\n";
            return 2;
        }
    }
    const auto summary = polyrad::acceptance::run(opts);
    int failed = 0;
    for (const auto& r : summary.results) {
        std::cout << polyrad::acceptance::line(r) << '\n';
        failed += r.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "ALL PASS" : "FAILED") << "  " << summary.results.size() - failed << "/"
              << summary.results.size() << " criteria\n";
    return failed == 0 ? 0 : 1;
}
