#include "fracbubble/report.hpp"

#include <json.hpp>
#include <sstream>

#include "fracbubble/numerics.hpp"

namespace fracbubble {

using ordered_json = nlohmann::ordered_json;

std::string rate_report_json(const RateReport& rep,
                             const std::string& config_hash) {
    ordered_json j;
    j["suite"] = rep.suite;
    j["config_hash"] = config_hash;
    j["pass"] = rep.pass;
    j["cases"] = ordered_json::array();
    for (const auto& c : rep.cases) {
        ordered_json cj;
        cj["tag"] = c.tag;
        cj["eps"] = c.eps;
        cj["lhs"] = c.lhs;
        cj["slope"] = c.slope;
        cj["predicted"] = c.predicted;
        cj["rule"] = c.rule;
        cj["pass"] = c.pass;
        if (!c.extra.empty()) cj["extra"] = c.extra;
        j["cases"].push_back(cj);
    }
    return j.dump(2) + "\n";
}

std::string rate_case_csv(const RateCase& c) {
    std::ostringstream os;
    os << "eps,lhs\n";
    for (std::size_t i = 0; i < c.eps.size(); ++i)
        os << num::fmt17(c.eps[i]) << "," << num::fmt17(c.lhs[i]) << "\n";
    return os.str();
}

}  // namespace fracbubble
