#include "propriety/model.hpp"
#include "propriety/errors.hpp"
#include "propriety/special.hpp"

#include <cmath>

namespace propriety {

bool cumulant_is_monotone(FamilyKind family) {
    switch (family) {
        case FamilyKind::Binomial:
        case FamilyKind::Bernoulli:
        case FamilyKind::Poisson:
            return true;
    }
    return false;
}

std::string family_name(FamilyKind family) {
    switch (family) {
        case FamilyKind::Binomial: return "binomial";
        case FamilyKind::Bernoulli: return "bernoulli";
        case FamilyKind::Poisson: return "poisson";
    }
    return "?";
}

std::string link_name(LinkKind link) {
    switch (link) {
        case LinkKind::Logit: return "logit";
        case LinkKind::Probit: return "probit";
        case LinkKind::Log: return "log";
        case LinkKind::UserCdf: return "user_cdf";
    }
    return "?";
}

double Link::mean(double eta) const {
    switch (kind) {
        case LinkKind::Logit: return logistic_cdf(eta);
        case LinkKind::Probit: return normal_cdf(eta);
        case LinkKind::Log: return std::exp(eta);
        case LinkKind::UserCdf: break;
    }
    throw WrongLink("user-supplied cdf links carry no evaluable mean");
}

double Link::mean_derivative(double eta) const {
    switch (kind) {
        case LinkKind::Logit: {
            const double f = logistic_cdf(eta);
            return f * (1.0 - f);
        }
        case LinkKind::Probit: return normal_pdf(eta);
        case LinkKind::Log: return std::exp(eta);
        case LinkKind::UserCdf: break;
    }
    throw WrongLink("user-supplied cdf links carry no evaluable mean derivative");
}

bool ValidatedModel::all_gamma() const {
    for (const auto& blk : model_.blocks)
        if (blk.b == 0) return false;
    return true;
}

bool ValidatedModel::all_power() const {
    for (const auto& blk : model_.blocks)
        if (blk.b != 0) return false;
    return true;
}

ValidatedModel validate(const GlmmModel& model) {
    const std::size_t n = model.y.size();
    if (model.X.rows() != n)
        throw DimensionMismatch("X has " + std::to_string(model.X.rows()) +
                                " rows but y has length " + std::to_string(n));
    if (model.Z.rows() != n)
        throw DimensionMismatch("Z has " + std::to_string(model.Z.rows()) +
                                " rows but y has length " + std::to_string(n));
    if (model.X.cols() == 0) throw DimensionMismatch("X has no columns");
    if (model.Z.cols() == 0) throw DimensionMismatch("Z has no columns");

    std::vector<long> trials;
    switch (model.family) {
        case FamilyKind::Binomial: {
            if (model.m.size() != n)
                throw DimensionMismatch("binomial model needs trial counts of length " +
                                        std::to_string(n));
            for (std::size_t i = 0; i < n; ++i) {
                if (model.m[i] < 1)
                    throw ResponseOutOfRange("trial count m[" + std::to_string(i + 1) +
                                             "] must be at least 1");
                if (model.y[i] < 0 || model.y[i] > model.m[i])
                    throw ResponseOutOfRange("y[" + std::to_string(i + 1) +
                                             "] outside 0..m");
            }
            trials = model.m;
            if (model.link.kind == LinkKind::Log)
                throw WrongLink("binomial responses need a cdf link");
            break;
        }
        case FamilyKind::Bernoulli: {
            if (!model.m.empty()) {
                if (model.m.size() != n)
                    throw DimensionMismatch("trial counts length mismatch");
                for (long mi : model.m)
                    if (mi != 1)
                        throw ResponseOutOfRange("bernoulli trial counts must all be 1");
            }
            for (std::size_t i = 0; i < n; ++i)
                if (model.y[i] != 0 && model.y[i] != 1)
                    throw ResponseOutOfRange("y[" + std::to_string(i + 1) +
                                             "] outside {0,1}");
            trials.assign(n, 1);
            if (model.link.kind == LinkKind::Log)
                throw WrongLink("bernoulli responses need a cdf link");
            break;
        }
        case FamilyKind::Poisson: {
            if (!model.m.empty())
                throw DimensionMismatch("poisson models carry no trial counts");
            for (std::size_t i = 0; i < n; ++i)
                if (model.y[i] < 0)
                    throw ResponseOutOfRange("y[" + std::to_string(i + 1) +
                                             "] negative");
            if (model.link.kind != LinkKind::Log)
                throw WrongLink("poisson models are supported with the log link only");
            break;
        }
    }

    if (model.blocks.empty()) throw EmptyBlock("no random-effect blocks");
    long qsum = 0;
    for (std::size_t j = 0; j < model.blocks.size(); ++j) {
        const auto& blk = model.blocks[j];
        if (blk.q < 1)
            throw EmptyBlock("block " + std::to_string(j + 1) + " has q = 0");
        if (blk.b < 0)
            throw WrongPriorKind("block " + std::to_string(j + 1) + " has b < 0");
        qsum += blk.q;
    }
    if (qsum != static_cast<long>(model.Z.cols()))
        throw DimensionMismatch("blocks cover " + std::to_string(qsum) +
                                " columns but Z has " + std::to_string(model.Z.cols()));

    if (model.link.kind == LinkKind::UserCdf && model.link.declared_moment_order &&
        *model.link.declared_moment_order < 0)
        throw ResponseOutOfRange("declared moment order must be nonnegative");

    ValidatedModel vm;
    vm.model_ = model;
    vm.trials_ = std::move(trials);
    vm.n_ = static_cast<int>(n);
    vm.p_ = static_cast<int>(model.X.cols());
    vm.q_ = static_cast<int>(model.Z.cols());
    vm.offsets_.resize(model.blocks.size());
    int off = 0;
    for (std::size_t j = 0; j < model.blocks.size(); ++j) {
        vm.offsets_[j] = off;
        off += model.blocks[j].q;
    }
    vm.xd_ = model.X.to_eigen();
    vm.zd_ = model.Z.to_eigen();
    return vm;
}

ValidatedModel validate(const ValidatedModel& model) {
    return validate(model.model());
}

} // namespace propriety
