#ifndef NMM_ACCEPTANCE_HPP
#define NMM_ACCEPTANCE_HPP

#include <functional>
#include <string>
#include <vector>

namespace nmm::accept {

struct Result {
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Criterion {
    int id = 0;
    std::string name;
    std::function<Result()> run;
};

/// The twelve acceptance criteria, in order. Each runs self-contained with
/// pinned tolerances and reports one pass/fail line worth of detail.
std::vector<Criterion> all_criteria();

/// Runs criteria (all, or the ids listed), printing one line per criterion.
/// Returns the number of failures.
int run_criteria(const std::vector<int>& ids = {}, bool verbose = true);

}

#endif
