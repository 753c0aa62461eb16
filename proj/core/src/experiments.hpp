#pragma once

#include <string>
#include <vector>

#include "sfas/harness.hpp"

namespace sfas::detail {

struct PlotSpec {
    std::string table;
    std::string x;
    std::vector<std::string> ys;
    std::string ylabel;
};

struct ExperimentEntry {
    ExperimentInfo info;
    void (*defaults)(ExperimentConfig&);
    void (*run)(const ExperimentConfig&, ExperimentResult&);
    std::vector<PlotSpec> plots;
};

const std::vector<ExperimentEntry>& experiment_entries();
const ExperimentEntry& find_entry(const std::string& name);

}  // namespace sfas::detail
