// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0
//
// Prints the excess-loss curves of the foliage models at their published
// constants as CSV, one row per foliage depth / area step.
//
//   ./model_curves > curves.csv

#include <cstdio>

#include "sylva/models.hpp"

int main() {
    using namespace sylva;

    const ItuParams itu{34.5, 6.0};
    const A1Params a1{2.39, 0.12, 14.0};
    const A2Params a2{2.09, 17.87};
    const BParams b{38.04, 4.47};
    const CParams c{19.14, 2.09, 0.06, 18.02};
    const double f_c = 28.0;

    std::printf("depth_m,itu_db,wmed_db,a1_db,a2_db,b_db,c_db\n");
    for (int i = 0; i <= 80; ++i) {
        const double d = i * 0.5;
        std::printf("%.1f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f\n", d,
                    epl_itu(d, itu),
                    epl_wmed(d, f_c, WmedMode::strict),
                    epl_a1(d, a1),
                    epl_a2(d, a2),
                    epl_b(d, b),
                    epl_c(d, c, CModelMode::continuous));
    }
    return 0;
}
