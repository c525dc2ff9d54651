#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"
#include "twistlab/matrix.hpp"

using namespace twistlab;
using tsupport::Lcg;
using tsupport::mat;
using tsupport::matq;

TEST_CASE("prime field arithmetic") {
    PrimeField k(101);
    for (std::uint32_t a = 1; a < 101; ++a) {
        REQUIRE(k.mul(a, k.inv(a)) == k.one());
    }
    REQUIRE(k.from_int(-1) == 100u);
    REQUIRE(k.add(100, 1) == 0u);
    REQUIRE(k.sub(0, 1) == 100u);
    REQUIRE_THROWS_AS(k.inv(0), contract_error);
    REQUIRE_THROWS_AS(PrimeField(91), shape_error); // 7*13
    PrimeField f2(2);
    REQUIRE(f2.add(1, 1) == 0u);
    REQUIRE(f2.inv(1) == 1u);
}

TEST_CASE("rationals are canonical") {
    Rationals k;
    REQUIRE(k.eq(k.parse("3/6"), k.parse("1/2")));
    REQUIRE(k.to_string(k.parse("-4/6")) == "-2/3");
    REQUIRE(k.eq(k.mul(k.parse("2/3"), k.parse("3/2")), k.one()));
    REQUIRE(k.eq(k.inv(k.parse("-5/7")), k.parse("-7/5")));
    REQUIRE_THROWS_AS(k.inv(k.zero()), contract_error);
    REQUIRE_THROWS_AS(k.parse("0x12"), shape_error);
}

TEST_CASE("sign_pow") {
    Rationals k;
    REQUIRE(k.eq(sign_pow(k, 0), k.one()));
    REQUIRE(k.eq(sign_pow(k, -3), k.neg(k.one())));
    REQUIRE(k.eq(sign_pow(k, 4), k.one()));
    REQUIRE(k.eq(sign_pow(k, -2), k.one()));
}

TEST_CASE("rref picks leftmost pivots and full reduction") {
    auto a = matq({{"1", "2", "3"}, {"2", "4", "6"}, {"1", "1", "1"}});
    auto w = a;
    auto piv = w.rref_in_place();
    REQUIRE(piv == std::vector<std::size_t>{0, 1});
    REQUIRE(w == matq({{"1", "0", "-1"}, {"0", "1", "2"}, {"0", "0", "0"}}));
    REQUIRE(rank(a) == 2);
}

TEST_CASE("kernel basis standard form") {
    auto a = matq({{"1", "2", "3"}, {"2", "4", "6"}, {"1", "1", "1"}});
    auto ker = kernel_basis(a);
    REQUIRE(ker == matq({{"1"}, {"-2"}, {"1"}}));
    REQUIRE((a * ker).is_zero());

    // zero map: kernel is everything, in coordinate order
    Rationals q;
    Matrix<Rationals> z(q, 2, 3);
    REQUIRE(kernel_basis(z) == Matrix<Rationals>::identity(q, 3));
}

TEST_CASE("column basis keeps the pivot columns") {
    auto a = matq({{"1", "2", "0"}, {"2", "4", "1"}});
    REQUIRE(column_basis(a) == matq({{"1", "0"}, {"2", "1"}}));
    Rationals q;
    REQUIRE(column_basis(Matrix<Rationals>(q, 3, 2)).cols() == 0);
}

TEST_CASE("solve_linear sets free variables to zero") {
    PrimeField f2(2);
    auto a = mat(f2, {{1, 1}, {0, 1}});
    auto b = mat(f2, {{1}, {1}});
    auto x = solve_linear(a, b);
    REQUIRE(x.has_value());
    REQUIRE(*x == mat(f2, {{0}, {1}}));

    auto underdet = matq({{"1", "1"}});
    auto sol = solve_linear(underdet, matq({{"1"}}));
    REQUIRE(sol.has_value());
    REQUIRE(*sol == matq({{"1"}, {"0"}}));

    auto bad = solve_linear(matq({{"1"}, {"1"}}), matq({{"1"}, {"0"}}));
    REQUIRE(!bad.has_value());
}

TEST_CASE("solver agrees with exhaustive search over F_3") {
    PrimeField f3(3);
    Lcg g(20260814);
    for (int trial = 0; trial < 40; ++trial) {
        auto a = tsupport::random_mat(f3, g, 3, 3, 3);
        auto b = tsupport::random_mat(f3, g, 3, 1, 3);
        bool solvable = false;
        std::size_t nsol = 0, nker = 0;
        for (int c = 0; c < 27; ++c) {
            Matrix<PrimeField> x(f3, 3, 1);
            x.at(0, 0) = c % 3;
            x.at(1, 0) = (c / 3) % 3;
            x.at(2, 0) = c / 9;
            if (a * x == b) { solvable = true; ++nsol; }
            if ((a * x).is_zero()) ++nker;
        }
        auto got = solve_linear(a, b);
        REQUIRE(got.has_value() == solvable);
        if (got) REQUIRE(a * *got == b);
        std::size_t dim = kernel_basis(a).cols();
        std::size_t pw = 1;
        for (std::size_t i = 0; i < dim; ++i) pw *= 3;
        REQUIRE(pw == nker);
        if (solvable) REQUIRE(nsol == nker);
    }
}

TEST_CASE("inverse") {
    auto a = matq({{"1", "2"}, {"3", "4"}});
    auto inv = inverse(a);
    REQUIRE(inv.has_value());
    REQUIRE(*inv == matq({{"-2", "1"}, {"3/2", "-1/2"}}));
    REQUIRE(*inv * a == Matrix<Rationals>::identity(Rationals{}, 2));
    REQUIRE(!inverse(matq({{"1", "2"}, {"2", "4"}})).has_value());
}

TEST_CASE("matrix product is associative (spot check)") {
    PrimeField f7(7);
    Lcg g(7);
    for (int t = 0; t < 10; ++t) {
        auto a = tsupport::random_mat(f7, g, 2, 3, 7);
        auto b = tsupport::random_mat(f7, g, 3, 4, 7);
        auto c = tsupport::random_mat(f7, g, 4, 2, 7);
        REQUIRE((a * b) * c == a * (b * c));
    }
}

TEST_CASE("cohomology of a two-step pair") {
    // exact in the middle: ker(d_out) = im(d_in), so H = 0
    auto d_in = matq({{"1"}, {"1"}});
    auto d_out = matq({{"1", "-1"}});
    Cohomology<Rationals> h(d_in, d_out);
    REQUIRE(h.dim() == 0);

    // zero differentials: H is the whole middle term with coordinate reps
    Rationals q;
    Cohomology<Rationals> h2(Matrix<Rationals>(q, 2, 1), Matrix<Rationals>(q, 1, 2));
    REQUIRE(h2.dim() == 2);
    REQUIRE(h2.reps() == Matrix<Rationals>::identity(q, 2));
    auto [c, w] = h2.decompose(matq({{"3"}, {"4"}}));
    REQUIRE(c == matq({{"3"}, {"4"}}));

    REQUIRE_THROWS_AS(Cohomology<Rationals>(matq({{"1"}, {"0"}}), matq({{"1", "0"}})),
                      contract_error);
}

TEST_CASE("cohomology decompose recovers the class") {
    PrimeField f5(5);
    Lcg g(55);
    for (int t = 0; t < 20; ++t) {
        auto d_in = tsupport::random_mat(f5, g, 4, 2, 5);
        // build a d_out that kills im(d_in): rows spanning ker(d_in^T)
        auto d_out = kernel_basis(d_in.transposed()).transposed();
        Cohomology<PrimeField> h(d_in, d_out);
        auto cs = tsupport::random_mat(f5, g, h.dim(), 1, 5);
        auto ws = tsupport::random_mat(f5, g, 2, 1, 5);
        auto z = h.reps() * cs + d_in * ws;
        auto [c, w] = h.decompose(z);
        REQUIRE(c == cs);
        REQUIRE(h.reps() * c + d_in * w == z);
    }
}
