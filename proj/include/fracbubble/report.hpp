#ifndef FRACBUBBLE_REPORT_HPP
#define FRACBUBBLE_REPORT_HPP

#include <string>
#include <vector>

namespace fracbubble {

// One fitted convergence case: a left-hand quantity against a geometric
// parameter ladder, with the predicted exponent and the pass rule used.
struct RateCase {
    std::string tag;
    std::vector<double> eps;
    std::vector<double> lhs;
    double slope = 0.0;
    double predicted = 0.0;
    std::string rule;  // "slope_min" | "slope_band" | "ratio_bounded"
    bool pass = false;
    std::vector<double> extra;  // rule-specific payload (e.g. bounded ratios)
};

struct RateReport {
    std::string suite;
    std::vector<RateCase> cases;
    bool pass = false;

    void finalize() {
        pass = !cases.empty();
        for (const auto& c : cases) pass = pass && c.pass;
    }
};

// Serialization (deterministic layouts; see report.cpp).
std::string rate_report_json(const RateReport& rep, const std::string& config_hash);
std::string rate_case_csv(const RateCase& c);

}  // namespace fracbubble

#endif
