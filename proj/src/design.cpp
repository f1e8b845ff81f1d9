#include "propriety/design.hpp"
#include "propriety/errors.hpp"

#include <algorithm>

namespace propriety {

Partition partition_indices(const std::vector<long>& y, const std::vector<long>& m) {
    Partition part;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == 0)
            part.i1.push_back(static_cast<int>(i));
        else if (y[i] == m[i])
            part.i2.push_back(static_cast<int>(i));
        else
            part.i3.push_back(static_cast<int>(i));
    }
    return part;
}

namespace {

RatMatrix augment(const RatMatrix& base, const std::vector<int>& extra_rows) {
    RatMatrix out(base.rows() + extra_rows.size(), base.cols());
    for (std::size_t i = 0; i < base.rows(); ++i)
        for (std::size_t j = 0; j < base.cols(); ++j)
            out(i, j) = base(i, j);
    for (std::size_t r = 0; r < extra_rows.size(); ++r)
        for (std::size_t j = 0; j < base.cols(); ++j)
            out(base.rows() + r, j) = base(static_cast<std::size_t>(extra_rows[r]), j);
    return out;
}

RatMatrix apply_signs(const RatMatrix& m, const std::vector<int>& t) {
    RatMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = t[i] * m(i, j);
    return out;
}

} // namespace

DesignBundle build_bundle(const ValidatedModel& model, const Partition& part) {
    if (model.family() == FamilyKind::Poisson)
        throw WrongFamily("bundle construction expects binomial-form responses");

    const int n = model.n();
    DesignBundle bundle;
    bundle.t.assign(static_cast<std::size_t>(n + part.k()), 1);
    for (int i : part.i2) bundle.t[static_cast<std::size_t>(i)] = -1;
    for (int r = 0; r < part.k(); ++r) bundle.t[static_cast<std::size_t>(n + r)] = -1;

    bundle.x_tri = augment(model.X(), part.i3);
    bundle.z_tri = augment(model.Z(), part.i3);
    bundle.xstar_tri = apply_signs(bundle.x_tri, bundle.t);
    bundle.zstar_tri = apply_signs(bundle.z_tri, bundle.t);
    return bundle;
}

std::pair<RatMatrix, RatMatrix> build_binary_star(const ValidatedModel& model) {
    if (model.family() != FamilyKind::Bernoulli)
        throw WrongFamily("binary star construction needs a bernoulli model");
    std::vector<int> c(static_cast<std::size_t>(model.n()));
    for (int i = 0; i < model.n(); ++i)
        c[static_cast<std::size_t>(i)] = 1 - 2 * static_cast<int>(model.y()[static_cast<std::size_t>(i)]);
    return {apply_signs(model.X(), c), apply_signs(model.Z(), c)};
}

ValidatedModel poissonize(const ValidatedModel& model) {
    if (model.family() != FamilyKind::Poisson)
        throw WrongFamily("poissonize needs a poisson model");
    if (model.link().kind != LinkKind::Log)
        throw WrongLink("poissonize needs the log link");
    const long y_max = *std::max_element(model.y().begin(), model.y().end());
    if (y_max == 0)
        throw DegenerateAllZero("all responses are zero; the pseudo-binomial "
                                "reduction needs max(y) >= 1");

    GlmmModel pseudo = model.model();
    pseudo.family = FamilyKind::Binomial;
    pseudo.link = Link{LinkKind::Logit, std::nullopt};
    pseudo.m.assign(model.y().size(), y_max);
    return validate(pseudo);
}

} // namespace propriety
