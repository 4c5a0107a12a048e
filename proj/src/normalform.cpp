#include "ringres/normalform.hpp"

#include <cmath>
#include <stdexcept>

namespace ringres {

NormalForm average_h0(const EpicyclicHamiltonian& epi, int order) {
    if (order != 1 && order != 2) throw std::invalid_argument("average_h0: order must be 1 or 2");
    const PoissonSeries h0 = average_phi(average_theta(epi.series));

    NormalForm nf;
    nf.order = order;
    nf.r_star = epi.center.r_star;
    nf.omega1 = h0.coefficient({0, 2, 0, 0, Trig::Cos});
    nf.omega2 = h0.coefficient({1, 0, 0, 0, Trig::Cos});
    nf.quad_i = h0.coefficient({2, 0, 0, 0, Trig::Cos});
    // <sin^2> = 1/2 turns d_{1,2} I J sin^2 into (d_{1,2}/2) I J = A I J
    nf.coupling = h0.coefficient({1, 2, 0, 0, Trig::Cos});
    // d03 sits on J^(3/2) sin^3(phi); the sin(phi) component carries 3/4 of it
    nf.d03 = epi.series.coefficient({0, 3, 0, 1, Trig::Sin}) * 4.0 / 3.0;
    nf.quad_j = (order == 2) ? h0.coefficient({0, 4, 0, 0, Trig::Cos}) : 0.0;
    nf.d04 = epi.series.coefficient({0, 4, 0, 0, Trig::Cos}) * 8.0 / 3.0;
    return nf;
}

double kam_determinant(const NormalForm& nf) {
    const double a2 = nf.coupling * nf.coupling;
    if (nf.order == 1) return -a2;
    return 0.75 * nf.d04 / (nf.r_star * nf.r_star) - a2;
}

std::vector<NondegeneracyRow> nondegeneracy_report(
    const PotentialModel& model,
    const std::vector<std::pair<std::string, double>>& resonant_radii, double floor) {
    std::vector<NondegeneracyRow> rows;
    for (const auto& [label, radius] : resonant_radii) {
        const ExpansionCenter center = ExpansionCenter::at_radius(model, radius);
        const EpicyclicHamiltonian epi = assemble(center, model);
        for (int order : {1, 2}) {
            const NormalForm nf = average_h0(epi, order);
            NondegeneracyRow row;
            row.body = model.body.name;
            row.resonance = label;
            row.order = order;
            row.omega1 = nf.omega1;
            row.omega2 = nf.omega2;
            row.coupling = nf.coupling;
            row.d04 = nf.d04;
            row.determinant = kam_determinant(nf);
            row.non_degenerate = std::abs(row.determinant) > floor;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace ringres
