#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

// Machine-readable run report. Keys are emitted sorted and numbers with round-trip
// precision, so a fixed configuration gives byte-identical files.
class Report {
public:
    explicit Report(std::string command) {
        doc_["schema"] = 1;
        doc_["command"] = std::move(command);
        doc_["checks"] = nlohmann::json::array();
        doc_["results"] = nlohmann::json::object();
    }

    nlohmann::json& results() { return doc_["results"]; }
    nlohmann::json& config() { return doc_["config"]; }

    // Numeric check: passes when value <= budget.
    void check(const std::string& name, double value, double budget) { check(name, value, budget, value <= budget); }
    void check(const std::string& name, double value, double budget, bool pass) {
        doc_["checks"].push_back({{"name", name}, {"value", value}, {"budget", budget}, {"pass", pass}});
        all_pass_ = all_pass_ && pass;
    }
    // Exact check: value counts mismatches, budget 0.
    void exact(const std::string& name, bool ok) { check(name, ok ? 0.0 : 1.0, 0.0, ok); }

    void note(const std::string& key, nlohmann::json v) { doc_["notes"][key] = std::move(v); }

    bool all_pass() const { return all_pass_; }

    std::string render(const std::string& format) {
        doc_["pass"] = all_pass_;
        if (format == "csv") {
            std::ostringstream os;
            os << "name,value,budget,pass\n";
            for (const auto& c : doc_["checks"]) {
                char buf[64];
                os << c["name"].get<std::string>() << ',';
                std::snprintf(buf, sizeof buf, "%.17g", c["value"].get<double>());
                os << buf << ',';
                std::snprintf(buf, sizeof buf, "%.17g", c["budget"].get<double>());
                os << buf << ',' << (c["pass"].get<bool>() ? "true" : "false") << '\n';
            }
            return os.str();
        }
        return doc_.dump(2) + "\n";
    }

    void write(const std::string& format, const std::string& path) {
        const std::string text = render(format);
        if (path.empty() || path == "-") {
            std::cout << text;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file " + path);
        f << text;
    }

private:
    nlohmann::json doc_;
    bool all_pass_ = true;
};
