// Chain assembly: parameter selection, the Taylor-chain block structure, the
// single-entry oracle, sparsity accounting, and the backward-difference
// baseline chain.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eigsim/complex_matrix.hpp"
#include "eigsim/encoding.hpp"
#include "eigsim/rng.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

using namespace eigsim;

namespace {

CMatrix random_dense(Index n, std::uint64_t seed) {
    Rng rng(seed);
    CMatrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m(i, j) = rng.complex_gaussian();
    return m;
}

// Ring-banded operator with exactly s nonzeros in every row and column.
ComplexMatrix banded_ring(Index n, Index s, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<CTriplet> ts;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < s; ++j)
            ts.emplace_back(i, (i + j) % n, rng.complex_gaussian() + cxd(2.0, 0.0));
    return ComplexMatrix::from_triplets(n, n, ts);
}

}  // namespace

TEST_CASE("step/degree selection for the real-spectrum pipeline") {
    const EncodingParams p64 = algorithm1_params(1.0, 1.0 / 64.0);
    CHECK(p64.dt == 0.5);
    CHECK(p64.m == 64);
    CHECK(p64.k == 8);  // ceil(log2 64) = 6, raised until (k+1)! >= 64^2 * 64
    CHECK(p64.d == 576);
    CHECK_FALSE(p64.dt_rho_ok);  // 2 pi * 0.5 * 1 = pi >= 1

    const EncodingParams p32 = algorithm1_params(1.0, 1.0 / 32.0);
    CHECK(p32.m == 32);
    CHECK(p32.k == 7);
    CHECK(p32.d == 256);

    const EncodingParams p2 = algorithm1_params(2.0, 1.0 / 64.0);
    CHECK(p2.dt == 0.25);
    CHECK(p2.m == 128);
    CHECK(p2.k == 9);  // (k+1)! must reach 128^2 * 64
}

TEST_CASE("step/degree selection for the complex-spectrum pipeline") {
    const EncodingParams p32 = algorithm2_params(1.0, 1.0 / 32.0);
    CHECK(p32.dt == 1.0);
    CHECK(p32.m == 32);
    CHECK(p32.k == 10);  // doubled log degree 2 * ceil(log2 32)
    CHECK(p32.d == 352);

    const EncodingParams p64 = algorithm2_params(1.0, 1.0 / 64.0);
    CHECK(p64.m == 64);
    CHECK(p64.k == 12);
    CHECK(p64.d == 832);
}

TEST_CASE("explicit parameter overrides recompute the derived fields") {
    const EncodingParams p = custom_params(1.0, 0.5, 0.1, 4, 2);
    CHECK(p.d == 12);
    CHECK(p.dt_rho_ok);  // 2 pi * 0.1 * 1 < 1
    CHECK_FALSE(custom_params(1.0, 0.5, 0.5, 4, 2).dt_rho_ok);

    CHECK_THROWS_AS(algorithm1_params(0.5, 0.01), PreconditionError);  // rho < 1
    CHECK_THROWS_AS(algorithm1_params(1.0, 1.5), PreconditionError);   // eps outside (0,1)
    CHECK_THROWS_AS(custom_params(1.0, 0.5, -0.1, 4, 2), PreconditionError);
    CHECK_THROWS_AS(custom_params(1.0, 0.5, 0.1, 0, 2), PreconditionError);
    CHECK_THROWS_AS(custom_params(1.0, 0.5, 0.1, 4, 0), PreconditionError);
}

TEST_CASE("truncated Taylor partial sums") {
    CHECK(taylor_trunc(cxd(3.0, -2.0), 0) == cxd(1.0, 0.0));
    CHECK(taylor_trunc(cxd(0.0, 0.0), 5) == cxd(1.0, 0.0));
    const cxd z(0.5, 0.0);
    CHECK(std::abs(taylor_trunc(z, 3) - cxd(1.0 + 0.5 + 0.125 + 0.125 / 6.0, 0.0)) < 1e-15);
    const cxd zi(0.2, -0.7);
    CHECK(std::abs(taylor_trunc(zi, 40) - std::exp(zi)) < 1e-15);
}

TEST_CASE("m=2, k=2 chain matches the displayed block pattern entry for entry") {
    const Index n = 2;
    const CMatrix a = random_dense(n, 5);
    const EncodingParams params = custom_params(1.0, 0.5, 0.5, 2, 2);
    const BlockSystem sys = build_cmk(ComplexMatrix::from_dense(a), params);

    REQUIRE(sys.block_count == 7);  // d + 1 = m(k+1) + 1
    REQUIRE(sys.matrix.rows() == 7 * n);

    // Block layout: x_{0,0} x_{0,1} x_{0,2} x_{1,0} x_{1,1} x_{1,2} x_{2,0}.
    const CMatrix eye = CMatrix::Identity(n, n);
    const CMatrix zero = CMatrix::Zero(n, n);
    auto block = [&](Index i, Index j) -> CMatrix {
        return sys.matrix.to_dense().block(i * n, j * n, n, n);
    };
    for (Index i = 0; i < 7; ++i) CHECK((block(i, i) - eye).cwiseAbs().maxCoeff() == 0.0);

    CHECK((block(1, 0) + a).cwiseAbs().maxCoeff() == 0.0);        // -A
    CHECK((block(2, 1) + 0.5 * a).cwiseAbs().maxCoeff() == 0.0);  // -A/2
    CHECK((block(3, 0) + eye).cwiseAbs().maxCoeff() == 0.0);      // segment launch: -I -I -I
    CHECK((block(3, 1) + eye).cwiseAbs().maxCoeff() == 0.0);
    CHECK((block(3, 2) + eye).cwiseAbs().maxCoeff() == 0.0);
    CHECK((block(4, 3) + a).cwiseAbs().maxCoeff() == 0.0);        // second segment
    CHECK((block(5, 4) + 0.5 * a).cwiseAbs().maxCoeff() == 0.0);
    CHECK((block(6, 3) + eye).cwiseAbs().maxCoeff() == 0.0);
    CHECK((block(6, 4) + eye).cwiseAbs().maxCoeff() == 0.0);
    CHECK((block(6, 5) + eye).cwiseAbs().maxCoeff() == 0.0);

    // Every block not named above is zero.
    const std::vector<std::pair<Index, Index>> named = {
        {1, 0}, {2, 1}, {3, 0}, {3, 1}, {3, 2}, {4, 3}, {5, 4}, {6, 3}, {6, 4}, {6, 5}};
    for (Index i = 0; i < 7; ++i)
        for (Index j = 0; j < 7; ++j) {
            if (i == j) continue;
            bool is_named = false;
            for (const auto& [r, c] : named) is_named = is_named || (r == i && c == j);
            if (!is_named) CHECK((block(i, j) - zero).cwiseAbs().maxCoeff() == 0.0);
        }

    // Right-hand side: input state in the leading block, zero elsewhere.
    CHECK(sys.rhs(0) == cxd(1.0, 0.0));
    CHECK(sys.rhs.tail(7 * n - 1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("custom input state lands in the leading right-hand-side block") {
    const ComplexMatrix a = ComplexMatrix::from_dense(random_dense(3, 8));
    CVector x0(3);
    x0 << cxd(0.6, 0.0), cxd(0.0, 0.8), cxd(0.0, 0.0);
    const BlockSystem sys = build_cmk(a, custom_params(1.0, 0.5, 0.5, 2, 2), x0);
    CHECK((sys.rhs.head(3) - x0).cwiseAbs().maxCoeff() == 0.0);

    CVector bad(2);
    bad << cxd(1, 0), cxd(0, 0);
    CHECK_THROWS_AS(build_cmk(a, custom_params(1.0, 0.5, 0.5, 2, 2), bad), DimensionError);
}

TEST_CASE("single-entry oracle agrees with the assembled operator everywhere") {
    const Index n = 2;
    const CMatrix a = random_dense(n, 13);
    const EncodingParams params = custom_params(1.0, 0.5, 0.4, 3, 2);
    const CMatrix assembled = build_cmk(ComplexMatrix::from_dense(a), params).matrix.to_dense();

    Index queries = 0;
    EntryOracle oracle;
    oracle.dim = n;
    oracle.entry = [&](Index r, Index c) {
        ++queries;
        return a(r, c);
    };
    const Index rows = assembled.rows();
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < rows; ++j)
            CHECK(cmk_entry(oracle, i, j, params) == assembled(i, j));
    // The generator is consulted at most once per entry.
    CHECK(queries <= rows * rows);

    CHECK_THROWS_AS(cmk_entry(oracle, rows, 0, params), DimensionError);
    CHECK_THROWS_AS(cmk_entry(EntryOracle{}, 0, 0, params), PreconditionError);
}

TEST_CASE("assembled chain sparsity stays within the s + k + 2 cap") {
    for (Index s : {Index(1), Index(2), Index(4)})
        for (Index k : {Index(2), Index(4), Index(8)})
            for (Index m : {Index(4), Index(16)}) {
                const ComplexMatrix a = banded_ring(5, s, 100 * s + 10 * k + m);
                REQUIRE(a.max_row_nonzeros() == s);
                REQUIRE(a.max_col_nonzeros() == s);
                const BlockSystem sys = build_cmk(a, custom_params(1.0, 0.5, 0.25, m, k));
                CHECK(sys.matrix.max_row_nonzeros() <= s + k + 2);
                CHECK(sys.matrix.max_col_nonzeros() <= s + k + 2);
            }
}

TEST_CASE("dimension cap: default, environment override, and rejection") {
    unsetenv("EIGSIM_DIM_CAP");
    CHECK(dimension_cap() == (Index(1) << 20));
    // (d+1)*n = (2^20+1)*2 rows overflows the default cap before assembly.
    const ComplexMatrix tiny = ComplexMatrix::identity(2);
    CHECK_THROWS_AS(build_cmk(tiny, custom_params(1.0, 0.5, 0.5, Index(1) << 19, 1)),
                    DimensionCapError);

    setenv("EIGSIM_DIM_CAP", "100", 1);
    CHECK(dimension_cap() == 100);
    CHECK_THROWS_AS(build_cmk(tiny, custom_params(1.0, 0.5, 0.5, 16, 3)), DimensionCapError);
    CHECK_NOTHROW(build_cmk(tiny, custom_params(1.0, 0.5, 0.5, 8, 3)));  // 50 rows

    setenv("EIGSIM_DIM_CAP", "banana", 1);
    CHECK_THROWS_AS(dimension_cap(), PreconditionError);
    unsetenv("EIGSIM_DIM_CAP");
}

TEST_CASE("backward-difference chain structure") {
    const Index n = 2, steps = 3;
    const double dt = 0.3;
    const CMatrix m = random_dense(n, 17);
    CVector x0(n);
    x0 << cxd(0.0, 1.0), cxd(0.0, 0.0);
    const BlockSystem sys = build_euler(ComplexMatrix::from_dense(m), steps, dt, x0);

    CHECK(sys.kind == ChainKind::Euler);
    CHECK(sys.block_count == steps);
    CHECK(sys.matrix.rows() == steps * n);
    const CMatrix dense = sys.matrix.to_dense();
    const CMatrix diag_block = CMatrix::Identity(n, n) - cxd(0.0, kTwoPi * dt) * m;
    for (Index p = 0; p < steps; ++p) {
        CHECK((dense.block(p * n, p * n, n, n) - diag_block).cwiseAbs().maxCoeff() < 1e-15);
        if (p > 0)
            CHECK((dense.block(p * n, (p - 1) * n, n, n) + CMatrix::Identity(n, n))
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
    }
    CHECK((sys.rhs.head(n) - x0).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(build_euler(ComplexMatrix::from_dense(m), 0, dt), PreconditionError);
    CHECK_THROWS_AS(build_euler(ComplexMatrix::from_dense(m), 3, 0.0), PreconditionError);
}
