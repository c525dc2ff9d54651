#pragma once

#include <cstdint>
#include <vector>

#include "twistlab/matrix.hpp"

namespace tsupport {

// Small deterministic generator so every "random" test is reproducible
// from its literal seed.
struct Lcg {
    std::uint64_t s;
    explicit Lcg(std::uint64_t seed) : s(seed) {}
    std::uint32_t next() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return std::uint32_t(s >> 33);
    }
    std::uint32_t below(std::uint32_t n) { return n ? next() % n : 0; }
    // small signed integer in [-3, 3], for rational test data
    long small() { return long(below(7)) - 3; }
};

template <class F>
twistlab::Matrix<F> mat(const F& k, const std::vector<std::vector<long>>& rows) {
    std::size_t m = rows.size(), n = m ? rows[0].size() : 0;
    twistlab::Matrix<F> r(k, m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) r.at(i, j) = k.from_int(rows[i][j]);
    return r;
}

inline twistlab::Matrix<twistlab::Rationals>
matq(const std::vector<std::vector<const char*>>& rows) {
    twistlab::Rationals k;
    std::size_t m = rows.size(), n = m ? rows[0].size() : 0;
    twistlab::Matrix<twistlab::Rationals> r(k, m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) r.at(i, j) = k.parse(rows[i][j]);
    return r;
}

template <class F>
twistlab::Matrix<F> random_mat(const F& k, Lcg& g, std::size_t m, std::size_t n,
                               std::uint32_t span) {
    twistlab::Matrix<F> r(k, m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            r.at(i, j) = k.from_int(long(g.below(span)));
    return r;
}

} // namespace tsupport
