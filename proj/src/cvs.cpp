#include "quadlab/cvs.hpp"

namespace quadlab {

PhiResult cvs_reverse_full(const LabeledTree& t, RootChoice choice) {
    LabeledMap lm;
    lm.m = tree_to_map(t);
    lm.labels = tree_map_labels(t, lm.m);
    lm.face_name = {0};
    return phi_reverse(lm, choice);
}

PointedQuadrangulation cvs_reverse(const LabeledTree& t, RootChoice choice) {
    PhiResult pr = cvs_reverse_full(t, choice);
    PointedQuadrangulation out;
    out.q = std::move(pr.dq.q);
    out.v_star = pr.sink_vertex[0];
    out.vertex_labels = std::move(pr.q_labels);
    return out;
}

PointedQuadrangulation sample_quadrangulation(int n, Rng& rng) {
    LabeledTree t = sample_labeled_tree(n, rng);
    RootChoice choice = rng.fair_bit() ? RootChoice::kReversed : RootChoice::kForward;
    return cvs_reverse(t, choice);
}

PointedQuadrangulation sample_quadrangulation(int n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_quadrangulation(n, rng);
}

BigInt count_quadrangulations(int n) {
    if (n < 1) throw Error("need at least one face");
    BigInt binom = 1;
    for (int i = 1; i <= n; ++i) {
        binom *= (n + i);
        binom /= i;
    }
    BigInt p3 = 1;
    for (int i = 0; i < n; ++i) p3 *= 3;
    BigInt num = 2 * p3 * binom;
    return num / ((n + 1) * (n + 2));
}

}  // namespace quadlab
