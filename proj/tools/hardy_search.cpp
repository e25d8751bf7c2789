// Copyright 2026 The qeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Derives the Hardy constants by brute force and compares them with the
// closed form used by the hardy scenario.

#include <cmath>
#include <cstdio>

#include "oracles/hardy_search.hpp"
#include "qeval/scenarios.hpp"

int main() {
    const qeval::oracle::HardyPoint best = qeval::oracle::hardy_search();
    const double closed = qeval::HardyConstants::optimum();
    std::printf("search optimum   P(L1=1, R2=0) = %.12f\n", best.value);
    std::printf("  at a=%.9f p=%.9f b=%.9f q=%.9f\n", best.a, best.p, best.b, best.q);
    std::printf("closed form u^5                = %.12f\n", closed);
    std::printf("difference                     = %.3e\n", std::abs(best.value - closed));
    return std::abs(best.value - closed) <= 1e-6 ? 0 : 1;
}
