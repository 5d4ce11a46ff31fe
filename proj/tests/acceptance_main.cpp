// Copyright 2026 The noon-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Prints one PASS/FAIL line per acceptance criterion, with the failing
// sub-checks underneath. Exit status is nonzero if any selected criterion fails.
//
//   noon_acceptance                 all criteria
//   noon_acceptance --criterion 4   one criterion
//   noon_acceptance -v              also list passing sub-checks

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "acceptance_suite.hpp"

int main(int argc, char **argv) {
    std::vector<int> ids;
    bool verbose = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            ids.push_back(std::stoi(argv[++i]));
        } else if (std::strcmp(argv[i], "-v") == 0 || std::strcmp(argv[i], "--verbose") == 0) {
            verbose = true;
        } else {
            std::fprintf(stderr, "usage: %s [--criterion k]... [-v]\n", argv[0]);
            return 2;
        }
    }
    if (ids.empty()) {
        for (int k = 1; k <= noon::acceptance::kCriterionCount; ++k) ids.push_back(k);
    }
    int failed = 0;
    for (int id : ids) {
        auto r = noon::acceptance::run_criterion(id);
        noon::acceptance::print(r, stdout, verbose);
        std::fflush(stdout);
        if (!r.pass()) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
