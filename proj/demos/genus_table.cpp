// Prints a small table of invariants for two worked families:
//
//   * the quarter-point family ρ_i = δ((p^N−1)/4), which has closed forms for
//     both the count and the genus, across several (p, N);
//   * the level-1 tuple (3̄,2̄,4̄,2̄) at p = 11, whose classifying sets are
//     small enough to list in full.
//
// Build:  cmake --build build --target demo_genus_table
// Run:    ./build/demo_genus_table

#include "dormant/invariants.hpp"

#include <iomanip>
#include <iostream>

using namespace dormant;

namespace {

RadiiTuple4 quarter_point(const PrimeLevel& ctx) {
    Int label = (ctx.pn - 1) / 4;
    RadiusClass rho = delta(ctx, label);
    return RadiiTuple4(ctx, {rho, rho, rho, rho});
}

void print_row(const GenusReport& rep) {
    std::cout << std::setw(4) << rep.ctx.p.get_str() << std::setw(4) << rep.ctx.N << "  "
              << std::setw(28) << rep.rho.str() << std::setw(8) << rep.cset.total.get_str()
              << std::setw(8) << rep.degree.get_str() << std::setw(10) << rep.genus.get_str()
              << std::setw(14) << rep.genus_upper.get_str() << "\n";
}

} // namespace

int main() {
    std::cout << "Quarter-point family rho_i = delta((p^N-1)/4)\n";
    std::cout << std::setw(4) << "p" << std::setw(4) << "N" << "  " << std::setw(28) << "radii"
              << std::setw(8) << "count" << std::setw(8) << "degree" << std::setw(10) << "genus"
              << std::setw(14) << "genus_upper" << "\n";

    const std::pair<int, unsigned> cases[] = {{5, 1}, {5, 2}, {5, 3}, {13, 1},
                                              {13, 2}, {17, 1}, {29, 1}};
    for (auto [p, N] : cases) {
        PrimeLevel ctx(p, N);
        GenusReport rep = genus_04(quarter_point(ctx));
        print_row(rep);

        // Closed forms for this family; they must match the table exactly.
        ExampleClosedForms cf = example_closed_forms(ctx.p, ctx.N, 0);
        if (cf.genus30 && *cf.genus30 != rep.genus)
            std::cout << "    ^ closed form disagrees: " << cf.genus30->get_str() << "\n";
    }

    std::cout << "\nLevel-1 tuple (3,2,4,2) at p = 11\n";
    PrimeLevel ctx(11, 1);
    RadiiTuple4 r(ctx, {RadiusClass(ctx, 3), RadiusClass(ctx, 2), RadiusClass(ctx, 4),
                        RadiusClass(ctx, 2)});
    GenusReport rep = genus_04(r);
    print_row(rep);

    auto show = [](const char* name, const std::vector<RadiusClass>& v) {
        std::cout << "  " << name << " = {";
        for (size_t i = 0; i < v.size(); ++i) std::cout << (i ? ", " : "") << v[i].rep.get_str();
        std::cout << "}\n";
    };
    show("C^0  ", rep.cset.c0);
    show("C^1  ", rep.cset.c1);
    show("C^inf", rep.cset.cinf);
    std::cout << "  simplified formula applicable: "
              << (rep.simplified_applicable ? "yes" : "no") << "\n";
    return 0;
}
