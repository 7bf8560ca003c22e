#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "questsim/config.hpp"

namespace qsim::scenario {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Column {
    std::string name;
    std::string unit;  ///< "1" for dimensionless, "" for labels
};

struct Table {
    std::string name;
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows{};

    void add_row(std::vector<Cell> row);
};

struct RunOutput {
    std::string subcommand;
    std::vector<Table> tables{};
    std::vector<std::pair<std::string, Cell>> summary{};
    bool checks_passed = true;  ///< false when a built-in verification fails
};

/// Subcommand names in run-all order, run-all excluded.
const std::vector<std::string>& subcommands();
bool is_subcommand(const std::string& name);

RunOutput run_subcommand(const std::string& name, const config::ScenarioConfig& cfg);

}  // namespace qsim::scenario
