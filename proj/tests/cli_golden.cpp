#include "golden_runner.hpp"

#include <cstdio>

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: cli_golden <tool> <corpus-dir>\n");
        return 2;
    }
    auto results = golden::run_all(argv[1], argv[2]);
    if (results.empty()) {
        std::fprintf(stderr, "no cases found under %s\n", argv[2]);
        return 2;
    }
    int bad = 0;
    for (const auto& r : results) {
        if (r.ok)
            std::printf("ok   %s\n", r.name.c_str());
        else {
            std::printf("FAIL %s  (%s)\n", r.name.c_str(), r.detail.c_str());
            ++bad;
        }
    }
    std::printf("%zu cases, %d failed\n", results.size(), bad);
    return bad == 0 ? 0 : 1;
}
