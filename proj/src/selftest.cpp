#include "blochlab/selftest.hpp"

namespace blochlab {

// placeholder; filled in once all modules are built
std::vector<CriterionResult> run_selftest(const SelftestOptions&) { return {}; }

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (r.blocking && !r.pass) return false;
    return true;
}

}  // namespace blochlab
