#include <doctest.h>

#include "rydfloq/basis.hpp"

using namespace rydfloq;

namespace {

long lucas(int n)
{
    long a = 2, b = 1;
    for (int i = 0; i < n; ++i) {
        long c = a + b;
        a = b;
        b = c;
    }
    return a;
}

long fib(int n)
{
    long a = 0, b = 1;
    for (int i = 0; i < n; ++i) {
        long c = a + b;
        a = b;
        b = c;
    }
    return a;
}

}  // namespace

TEST_CASE("is_legal")
{
    CHECK(is_legal(0b0101, 4, Boundary::periodic));
    CHECK_FALSE(is_legal(0b1001, 4, Boundary::periodic));
    CHECK(is_legal(0b1001, 4, Boundary::open));
    CHECK_FALSE(is_legal(0b0110, 4, Boundary::open));
    CHECK_THROWS_AS(is_legal(0, 1, Boundary::open), std::invalid_argument);
}

TEST_CASE("enumerate_basis dimensions")
{
    CHECK(enumerate_basis(4, Boundary::periodic).dim() == 7);
    CHECK(enumerate_basis(4, Boundary::open).dim() == 8);
    CHECK(enumerate_basis(16, Boundary::periodic).dim() == 2207);
    for (int L = 4; L <= 20; ++L) {
        CHECK(enumerate_basis(L, Boundary::periodic).dim() == static_cast<std::size_t>(lucas(L)));
        if (L >= 6)
            CHECK(enumerate_basis(L, Boundary::periodic).dim() ==
                  enumerate_basis(L - 1, Boundary::periodic).dim() + enumerate_basis(L - 2, Boundary::periodic).dim());
    }
    for (int L = 2; L <= 20; ++L) CHECK(enumerate_basis(L, Boundary::open).dim() == static_cast<std::size_t>(fib(L + 2)));
    CHECK_THROWS_AS(enumerate_basis(1, Boundary::open), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_basis(31, Boundary::open), std::invalid_argument);
}

TEST_CASE("basis matches brute force for L <= 14")
{
    for (auto bc : {Boundary::periodic, Boundary::open})
        for (int L = 2; L <= 14; ++L) {
            ConstrainedBasis b(L, bc);
            std::vector<Config> brute;
            for (Config c = 0; c < (Config{1} << L); ++c)
                if (is_legal(c, L, bc)) brute.push_back(c);
            REQUIRE(brute == b.states());
        }
}

TEST_CASE("index_of")
{
    ConstrainedBasis b(4, Boundary::periodic);
    CHECK(b.index_of(0b0000) == 0);
    CHECK(b.index_of(0b1010) == 6);
    CHECK_THROWS_AS(b.index_of(0b0110), NotFound);
    for (std::size_t k = 0; k < b.dim(); ++k) CHECK(b.index_of(b.state(k)) == k);
}

TEST_CASE("neel states")
{
    CHECK(neel_z2(4) == 0b0101);
    CHECK(neel_z2_prime(4) == 0b1010);
    CHECK(boundary_from_string("open") == Boundary::open);
    CHECK_THROWS(boundary_from_string("twisted"));
}
