#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "penrose/checks.hpp"

namespace penrose::cli {

enum class Command {
    schwarzschild,
    mass,
    verify_reilly,
    reflect_check,
    fit_asymptotics,
    penrose,
    perturb,
    suite,
};

const char* to_string(Command c);

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed command + parameters with precedence flags > config file > defaults.
struct Invocation {
    Command command = Command::suite;
    std::map<std::string, std::string> params;

    int get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::string get(const std::string& key) const;
    std::vector<double> get_list(const std::string& key) const;
    bool get_flag(const std::string& key) const;
};

Invocation parse_invocation(const std::vector<std::string>& args);

struct Report {
    std::string command;
    nlohmann::ordered_json inputs;
    nlohmann::ordered_json results;
    std::vector<checks::Check> checks;
    bool pass = true;
    double elapsed_seconds = 0.0;  // excluded from emitted payloads unless requested
};

Report run(const Invocation& inv);

/// Writes the report as JSON or a command-appropriate CSV table; path "-"
/// means stdout. Returns the number of bytes written.
std::size_t emit_report(const Report& report, const std::string& format, const std::string& path,
                        bool include_timing = false);

/// Exit codes: 0 all checks pass, 1 check failure, 2 usage error, 3 I/O error.
int main_entry(int argc, char** argv);

std::string usage_text();

}  // namespace penrose::cli
