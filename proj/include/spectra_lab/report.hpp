#pragma once

// JSON (schema 1), text tables and DOT output.

#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "checks.hpp"

namespace spectra_lab {

inline constexpr int report_schema = 1;
inline constexpr const char* tool_version = "0.1.0";

using json = nlohmann::ordered_json;

inline json cut_json(const Gap& c) {
    json j;
    if (c.is_nothing()) j["type"] = "zero";
    else if (c.is_everything()) j["type"] = "unit";
    else if (c.is_point()) {
        j["type"] = c.side() == Gap::Side::Bottom ? "at_least" : "greater_than";
        j["gamma"] = c.shift().to_short_string();
    } else {
        j["type"] = c.side() == Gap::Side::Top ? "above_subgroup" : "from_subgroup";
        j["subgroup"] = c.subgroup().to_string();
        if (!c.shift().is_zero()) j["shift"] = c.shift().to_short_string();
    }
    j["text"] = c.to_string();
    return j;
}

inline json element_json(const Element& x) {
    json j;
    j["text"] = to_string(x);
    if (is_padic(x)) {
        const PiAdic& e = as_piadic(x);
        j["p"] = e.prime();
        j["prec2"] = e.prec2();
        if (e.is_zero()) j["val2"] = nullptr;
        else j["val2"] = e.val2();
        j["digits"] = e.digits();
    } else {
        auto v = value_of(x);
        j["valuation"] = v ? json(v->to_short_string()) : json(nullptr);
    }
    return j;
}

inline json observed_json(const Observed& o) {
    return std::visit([](const auto& v) { return json(v); }, o);
}

inline json report_json(const CheckReport& r, bool with_timing = true) {
    json j;
    j["check"] = r.check_id;
    j["ring"] = r.ring;
    j["verdict"] = to_string(r.verdict);
    j["samples"] = r.samples;
    j["method"] = r.method;
    j["expected_verified"] = r.expected_verified;
    json obs = json::object();
    for (auto& [k, v] : r.observed) obs[k] = observed_json(v);
    j["observed"] = obs;
    json w = json::array();
    for (auto& x : r.witnesses) {
        json e = element_json(x.value);
        e["role"] = x.role;
        w.push_back(e);
    }
    j["witnesses"] = w;
    if (r.replay) j["replay_ok"] = r.replay();
    j["notes"] = r.notes;
    j["seed"] = r.seed;
    j["sampler"] = r.sampler;
    if (with_timing) j["wall_time"] = r.wall_time;
    return j;
}

struct SuiteResult {
    std::string ring;
    std::string descriptor;
    std::uint64_t seed = 0;
    std::vector<CheckReport> reports;
    std::vector<std::string> errors;

    std::size_t count(CheckReport::Verdict v) const {
        return static_cast<std::size_t>(std::count_if(reports.begin(), reports.end(), [v](auto& r) { return r.verdict == v; }));
    }
    std::size_t unexpected() const {
        return static_cast<std::size_t>(std::count_if(reports.begin(), reports.end(), [](auto& r) { return r.unexpected(); }));
    }
    bool ok() const { return unexpected() == 0 && errors.empty(); }
};

inline SuiteResult run_suite(const RingDescriptor& r, const Sampler& s, const std::vector<std::string>& checks, const RunOptions& o) {
    SuiteResult out{display_name(r), describe(r), s.config().seed, {}, {}};
    for (auto& name : checks) {
        try {
            for (auto& rep : run_check(name, r, s, o)) out.reports.push_back(std::move(rep));
        } catch (const std::exception& e) {
            out.errors.push_back(name + ": " + e.what());
        }
    }
    return out;
}

inline json suite_json(const SuiteResult& s, bool with_timing = true) {
    json j;
    j["schema"] = report_schema;
    j["tool"] = "spectra-lab";
    j["version"] = tool_version;
    j["ring"] = {{"name", s.ring}, {"descriptor", s.descriptor}};
    j["seed"] = s.seed;
    json reps = json::array();
    for (auto& r : s.reports) reps.push_back(report_json(r, with_timing));
    j["reports"] = reps;
    j["errors"] = s.errors;
    j["summary"] = {{"verified", s.count(CheckReport::Verdict::Verified)},
                    {"falsified", s.count(CheckReport::Verdict::Falsified)},
                    {"out_of_scope", s.count(CheckReport::Verdict::OutOfScope)},
                    {"inconclusive", s.count(CheckReport::Verdict::Inconclusive)},
                    {"unexpected", s.unexpected()},
                    {"ok", s.ok()}};
    return j;
}

// Removes every "wall_time" key, recursively.
inline void strip_timing(json& j) {
    if (j.is_object()) {
        j.erase("wall_time");
        for (auto& [k, v] : j.items()) strip_timing(v);
    } else if (j.is_array()) {
        for (auto& v : j) strip_timing(v);
    }
}

inline std::string verdict_mark(const CheckReport& r) {
    switch (r.verdict) {
    case CheckReport::Verdict::Verified: return "ok";
    case CheckReport::Verdict::Falsified: return r.unexpected() ? "FALSIFIED (unexpected)" : "falsified";
    case CheckReport::Verdict::OutOfScope: return "n/a";
    case CheckReport::Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

inline std::string suite_table(const SuiteResult& s) {
    std::ostringstream os;
    os << "ring: " << s.ring << "\n  " << s.descriptor << "\nseed: " << s.seed << "\n\n";
    for (auto& r : s.reports) {
        os << "  " << std::left << std::setw(22) << r.check_id << std::setw(24) << verdict_mark(r);
        bool first = true;
        for (auto& [k, v] : r.observed) {
            if (k == "n_max") continue;
            os << (first ? "" : " ") << k << "=" << observed_json(v).dump();
            first = false;
        }
        os << "\n";
        for (auto& w : r.witnesses) os << "      " << w.role << " = " << to_string(w.value) << "\n";
        if (r.verdict != CheckReport::Verdict::Verified)
            for (auto& n : r.notes) os << "      note: " << n << "\n";
    }
    for (auto& e : s.errors) os << "  error: " << e << "\n";
    os << "\n" << s.count(CheckReport::Verdict::Verified) << " verified, " << s.count(CheckReport::Verdict::Falsified) << " falsified ("
       << s.unexpected() << " unexpected), " << s.count(CheckReport::Verdict::OutOfScope) << " n/a, "
       << s.count(CheckReport::Verdict::Inconclusive) << " inconclusive, " << s.errors.size() << " errors\n";
    return os.str();
}

inline json chain_json(const SpecChain& c) {
    json j;
    j["schema"] = report_schema;
    j["ring"] = {{"name", display_name(c.ring)}, {"descriptor", describe(c.ring)}};
    j["dense"] = c.dense;
    json primes = json::array();
    for (std::size_t i = 0; i < c.size(); ++i) {
        PrimeSpec p = c.prime(i);
        json e;
        e["index"] = i;
        e["role"] = i == 0 ? "zero" : (i + 1 == c.size() ? "maximal" : "prime");
        e["subgroup"] = p.h.to_string();
        e["cut"] = cut_json(p.cut());
        if (i + 1 < c.size()) e["adjacent_to_next"] = static_cast<bool>(c.adjacent[i]);
        primes.push_back(e);
    }
    j["primes"] = primes;
    return j;
}

inline std::string chain_dot(const SpecChain& c) {
    std::ostringstream os;
    os << "digraph spec {\n  rankdir=BT;\n  label=" << json(display_name(c.ring)).dump() << ";\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::string text = i == 0 ? "0" : "above " + c.members[i].to_string();
        if (i + 1 == c.size() && i != 0) text = "M = " + c.prime(i).cut().to_string();
        os << "  p" << i << " [label=" << json(text).dump() << "];\n";
    }
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        os << "  p" << i << " -> p" << i + 1 << (c.adjacent[i] ? "" : " [style=dashed]") << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace spectra_lab
