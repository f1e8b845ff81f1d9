#pragma once
#include "propriety/model.hpp"
#include "propriety/rational.hpp"

#include <string>
#include <vector>

namespace testsupport {

using propriety::FamilyKind;
using propriety::GlmmModel;
using propriety::Link;
using propriety::LinkKind;
using propriety::PriorBlock;
using propriety::RatMatrix;
using propriety::Rational;

inline RatMatrix rmat(const std::vector<std::vector<std::string>>& rows) {
    RatMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(i, j) = propriety::rational_from_decimal(rows[i][j]);
    return m;
}

inline RatMatrix rmat_int(const std::vector<std::vector<long>>& rows) {
    RatMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(i, j) = rows[i][j];
    return m;
}

// Two clusters of three observations sharing one intercept-plus-slope
// design; trial counts vary and several responses are saturated.
inline GlmmModel oneway_binomial_example(Rational a = Rational(3, 2),
                                         Rational b = Rational(1, 10),
                                         LinkKind link = LinkKind::Logit) {
    GlmmModel model;
    model.family = FamilyKind::Binomial;
    model.link = Link{link, std::nullopt};
    model.y = {0, 4, 2, 4, 3, 5};
    model.m = {3, 4, 5, 4, 3, 5};
    model.X = rmat({{"1", "2.9"}, {"1", "1.7"}, {"1", "2.6"},
                    {"1", "3.1"}, {"1", "3.8"}, {"1", "4.2"}});
    model.Z = rmat_int({{1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 1}});
    model.blocks = {PriorBlock{2, a, b}};
    return model;
}

// Same clustering with count responses, almost all zero.
inline GlmmModel oneway_poisson_example(Rational a = Rational(3, 2),
                                        Rational b = Rational(1, 10)) {
    GlmmModel model;
    model.family = FamilyKind::Poisson;
    model.link = Link{LinkKind::Log, std::nullopt};
    model.y = {0, 0, 0, 2, 0, 0};
    model.X = rmat({{"1", "9.4"}, {"1", "8.7"}, {"1", "10.2"},
                    {"1", "9.1"}, {"1", "8.9"}, {"1", "9.5"}});
    model.Z = rmat_int({{1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 1}});
    model.blocks = {PriorBlock{2, a, b}};
    return model;
}

// Crossed grouping: three row groups and two column groups over six
// observations, so Z's blocks of indicator columns are each rank deficient
// jointly (both groups' indicators sum to the ones vector).
inline GlmmModel twoway_binomial_example(Rational a1 = Rational(3, 2),
                                         Rational b1 = Rational(1, 10),
                                         Rational a2 = Rational(3, 2),
                                         Rational b2 = Rational(1, 10)) {
    GlmmModel model;
    model.family = FamilyKind::Binomial;
    model.link = Link{LinkKind::Logit, std::nullopt};
    model.y = {0, 1, 2, 0, 2, 2};
    model.m = {2, 2, 2, 2, 2, 2};
    model.X = rmat({{"1", "1.8"}, {"1", "2.1"}, {"1", "3.2"},
                    {"1", "4.9"}, {"1", "5.3"}, {"1", "6.1"}});
    model.Z = rmat_int({{1, 0, 0, 1, 0},
                        {1, 0, 0, 0, 1},
                        {0, 1, 0, 1, 0},
                        {0, 1, 0, 0, 1},
                        {0, 0, 1, 1, 0},
                        {0, 0, 1, 0, 1}});
    model.blocks = {PriorBlock{3, a1, b1}, PriorBlock{2, a2, b2}};
    return model;
}

inline std::string oneway_binomial_json() {
    return R"({
  "family": "binomial",
  "link": "logit",
  "y": [0, 4, 2, 4, 3, 5],
  "m": [3, 4, 5, 4, 3, 5],
  "X": [[1, 2.9], [1, 1.7], [1, 2.6], [1, 3.1], [1, 3.8], [1, 4.2]],
  "Z": [[1, 0], [1, 0], [1, 0], [0, 1], [0, 1], [0, 1]],
  "blocks": [{"q": 2, "a": 1.5, "b": 0.1}]
})";
}

} // namespace testsupport
