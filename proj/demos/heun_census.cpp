// Census of dormant accessory parameters: for every level-1 radii tuple with
// a nonempty classifying set at p = 5 and p = 7, list the per-t dormant
// counts and compare their maximum with the classifying-set degree.  The two
// numbers come from entirely independent machinery — one from digit-window
// enumeration, the other from p-curvature kernels of Heun companion systems —
// so agreement across the whole census is a strong cross-check.
//
// Build:  cmake --build build --target demo_heun_census
// Run:    ./build/demo_heun_census

#include "dormant/heun.hpp"

#include <iostream>
#include <vector>

using namespace dormant;

namespace {

std::vector<Int> level1_labels(const PrimeLevel& ctx) {
    std::vector<Int> out;
    for (Int v = 0; v <= ctx.label_max(); ++v)
        if (is_edge_label_value(ctx, v)) out.push_back(v);
    return out;
}

void census(const Int& p) {
    PrimeLevel ctx(p, 1);
    std::vector<Int> labels = level1_labels(ctx);
    long tuples = 0, nonempty = 0, matches = 0;

    std::cout << "p = " << p.get_str() << "\n";
    for (const Int& a : labels)
        for (const Int& b : labels)
            for (const Int& c : labels)
                for (const Int& d : labels) {
                    ++tuples;
                    RadiiTuple4 r(ctx, {delta(ctx, a), delta(ctx, b), delta(ctx, c), delta(ctx, d)});
                    if (degree_04(r) == 0) continue;
                    ++nonempty;
                    DormancyValidation v = validate_dormant_counts(r);
                    if (v.match) ++matches;
                    std::cout << "  labels(" << a.get_str() << "," << b.get_str() << ","
                              << c.get_str() << "," << d.get_str() << ")  degree "
                              << v.degree.get_str() << "  per-t counts";
                    for (const auto& [t, cnt] : v.per_t) {
                        (void)t;
                        std::cout << " " << cnt.get_str();
                    }
                    std::cout << (v.match ? "  [max matches degree]" : "  [MISMATCH]") << "\n";
                }
    std::cout << "  " << tuples << " tuples, " << nonempty << " nonempty, " << matches
              << " matched\n\n";
}

} // namespace

int main() {
    census(5);
    census(7);

    // The flagship single instance at p = 11.
    PrimeLevel ctx(11, 1);
    RadiiTuple4 r(ctx, {RadiusClass(ctx, 3), RadiusClass(ctx, 2), RadiusClass(ctx, 4),
                        RadiusClass(ctx, 2)});
    DormancyValidation v = validate_dormant_counts(r);
    std::cout << "p = 11, radii (3,2,4,2): degree " << v.degree.get_str() << ", max count "
              << v.max_count.get_str() << (v.match ? "  [max matches degree]" : "  [MISMATCH]")
              << "\n";
    return 0;
}
