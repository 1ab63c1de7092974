// Acceptance suite: one pass/fail line per criterion; exit status is the
// number of failed criteria (0 on full success).

#include <iostream>

#include "coverquant/report.hpp"

int main() {
    std::string data_dir = std::string(COVERQUANT_SOURCE_DIR) + "/data";
    int failures = coverquant::run_acceptance(data_dir, std::cout);
    if (failures == 0)
        std::cout << "acceptance: all criteria passed\n";
    else
        std::cout << "acceptance: " << failures << " criteria FAILED\n";
    return failures;
}
