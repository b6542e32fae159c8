#ifndef SPECFLOW_VERIFY_HPP
#define SPECFLOW_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace specflow {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    double worst = 0.0;      // worst observed residual
    double tolerance = 0.0;  // pinned threshold
    std::string detail;
};

struct VerifyReport {
    std::vector<CriterionResult> criteria;

    bool all_passed() const {
        for (const auto& c : criteria) {
            if (!c.pass) return false;
        }
        return true;
    }
};

/// Runs the full verification suite (the acceptance criteria) with
/// deterministic instances derived from `seed`.  When `progress` is given,
/// one "PASS"/"FAIL" line is printed per criterion as it completes.
VerifyReport run_verification(uint64_t seed, std::ostream* progress = nullptr);

}  // namespace specflow

#endif
