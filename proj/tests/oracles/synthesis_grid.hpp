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

#pragma once

// Brute-force minimum of the evaluator synthesis objective for 2 x 2
// inputs, by grid search and compass refinement over the four real
// parameters of a Hermitian T.

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace qeval::oracle {

/// sqrt(min_T ||[T,A]||^2 + ||[T,Z]||^2 + ||(T - A) rho||^2).
inline double synthesis_residual_2x2(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &z,
                                     const Eigen::MatrixXcd &rho) {
    using Cx = std::complex<double>;
    auto objective = [&](const double *p) {
        Eigen::MatrixXcd t(2, 2);
        t << Cx(p[0], 0.0), Cx(p[2], p[3]), Cx(p[2], -p[3]), Cx(p[1], 0.0);
        return (t * a - a * t).squaredNorm() + (t * z - z * t).squaredNorm() +
               ((t - a) * rho).squaredNorm();
    };
    double best[4] = {0, 0, 0, 0};
    double best_v = objective(best);
    const int n = 21;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l < n; ++l) {
                    const double p[4] = {-1.0 + 2.0 * i / (n - 1), -1.0 + 2.0 * j / (n - 1),
                                         -1.0 + 2.0 * k / (n - 1), -1.0 + 2.0 * l / (n - 1)};
                    const double v = objective(p);
                    if (v < best_v) {
                        best_v = v;
                        std::copy(p, p + 4, best);
                    }
                }
            }
        }
    }
    double step = 0.1;
    while (step > 1e-12) {
        bool moved = false;
        for (int d = 0; d < 4; ++d) {
            for (double s : {1.0, -1.0}) {
                double p[4];
                std::copy(best, best + 4, p);
                p[d] += s * step;
                const double v = objective(p);
                if (v < best_v) {
                    best_v = v;
                    std::copy(p, p + 4, best);
                    moved = true;
                }
            }
        }
        if (!moved) {
            step /= 2.0;
        }
    }
    return std::sqrt(best_v);
}

} // namespace qeval::oracle
