// Acceptance gate: runs every registered criterion and prints one line per
// result. Exits nonzero if any criterion fails.

#include <cstdio>
#include <exception>

#include "fraclab/checks.hpp"

int main() {
    bool all_pass = true;
    for (const auto& def : fraclab::check_registry()) {
        fraclab::CheckResult r;
        try {
            r = def.fn();
        } catch (const std::exception& e) {
            r = {def.name, def.module, false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %-22s [%s] %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.module.c_str(), r.details.c_str());
        std::fflush(stdout);
        if (!r.pass) all_pass = false;
    }
    return all_pass ? 0 : 1;
}
