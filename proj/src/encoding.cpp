#include "eigsim/encoding.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace eigsim {

namespace {

void validate_rho_eps(double rho, double eps) {
    if (!(rho >= 1.0)) throw PreconditionError("spectral budget rho must be >= 1, got " + std::to_string(rho));
    if (!(eps > 0.0 && eps < 1.0))
        throw PreconditionError("accuracy eps must lie in (0, 1), got " + std::to_string(eps));
}

// Smallest k with (k+1)! >= threshold; keeps the truncation tail below the
// per-step budget the chain length demands.
Index factorial_floor(Index k, double threshold) {
    double fact = 1.0;
    for (Index j = 2; j <= k + 1; ++j) fact *= static_cast<double>(j);
    while (fact < threshold) {
        ++k;
        fact *= static_cast<double>(k + 1);
    }
    return k;
}

EncodingParams finalize(double rho, double eps, double dt, Index m, Index k) {
    if (!(dt > 0.0)) throw PreconditionError("chain step dt must be positive");
    if (m < 1) throw PreconditionError("chain length m must be >= 1");
    if (k < 1) throw PreconditionError("Taylor degree k must be >= 1");
    EncodingParams p;
    p.rho = rho;
    p.eps = eps;
    p.dt = dt;
    p.m = m;
    p.k = k;
    p.d = m * (k + 1);
    p.dt_rho_ok = kTwoPi * dt * rho < 1.0;
    return p;
}

}  // namespace

EncodingParams algorithm1_params(double rho, double eps) {
    validate_rho_eps(rho, eps);
    const Index m = static_cast<Index>(std::ceil(rho / eps));
    Index k = std::max<Index>(1, static_cast<Index>(std::ceil(std::log2(rho / eps))));
    k = factorial_floor(k, static_cast<double>(m) * static_cast<double>(m) / eps);
    return finalize(rho, eps, 1.0 / (2.0 * rho), m, k);
}

EncodingParams algorithm2_params(double rho, double eps) {
    validate_rho_eps(rho, eps);
    const Index m = static_cast<Index>(std::ceil(rho / eps));
    Index k = std::max<Index>(1, 2 * static_cast<Index>(std::ceil(std::log2(rho / eps))));
    k = factorial_floor(k, static_cast<double>(m) * static_cast<double>(m) / eps);
    return finalize(rho, eps, 1.0 / rho, m, k);
}

EncodingParams custom_params(double rho, double eps, double dt, Index m, Index k) {
    validate_rho_eps(rho, eps);
    return finalize(rho, eps, dt, m, k);
}

cxd taylor_trunc(cxd z, Index k) {
    if (k < 0) throw PreconditionError("Taylor degree must be non-negative");
    cxd acc(1.0, 0.0);
    for (Index j = k; j >= 1; --j) acc = cxd(1.0, 0.0) + z / static_cast<double>(j) * acc;
    return acc;
}

Index dimension_cap() {
    const char* raw = std::getenv("EIGSIM_DIM_CAP");
    if (raw == nullptr || *raw == '\0') return Index(1) << 20;
    char* end = nullptr;
    const long long parsed = std::strtoll(raw, &end, 10);
    if (end == raw || *end != '\0' || parsed <= 0)
        throw PreconditionError(std::string("EIGSIM_DIM_CAP must be a positive integer, got \"") +
                                raw + "\"");
    return static_cast<Index>(parsed);
}

namespace {

CVector initial_block(const CVector& x0, Index n) {
    if (x0.size() == 0) {
        CVector e = CVector::Zero(n);
        e(0) = cxd(1.0, 0.0);
        return e;
    }
    if (x0.size() != n)
        throw DimensionError("input state has dimension " + std::to_string(x0.size()) +
                             ", operator expects " + std::to_string(n));
    return x0;
}

void check_cap(Index rows) {
    const Index cap = dimension_cap();
    if (rows > cap)
        throw DimensionCapError("assembled system has " + std::to_string(rows) +
                                " rows, above the configured cap of " + std::to_string(cap));
}

}  // namespace

BlockSystem build_cmk(const ComplexMatrix& a, const EncodingParams& params, const CVector& x0) {
    if (a.rows() != a.cols())
        throw DimensionError("chain generator must be square, got " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()));
    if (a.rows() == 0) throw DimensionError("chain generator is empty");
    const Index n = a.rows();
    const Index m = params.m, k = params.k, d = params.d;
    const Index rows = (d + 1) * n;
    check_cap(rows);

    const auto a_triplets = a.triplets();
    std::vector<CTriplet> entries;
    entries.reserve(static_cast<std::size_t>(rows + m * k * a.non_zeros() + m * (k + 1) * n));

    for (Index g = 0; g <= d; ++g)
        for (Index r = 0; r < n; ++r) entries.emplace_back(g * n + r, g * n + r, cxd(1.0, 0.0));

    for (Index p = 0; p < m; ++p)
        for (Index q = 0; q < k; ++q) {
            const Index row0 = (p * (k + 1) + q + 1) * n;
            const Index col0 = (p * (k + 1) + q) * n;
            const double inv = 1.0 / static_cast<double>(q + 1);
            for (const auto& t : a_triplets)
                entries.emplace_back(row0 + t.row(), col0 + t.col(), -t.value() * inv);
        }

    for (Index p = 0; p < m; ++p)
        for (Index q = 0; q <= k; ++q) {
            const Index row0 = (p + 1) * (k + 1) * n;
            const Index col0 = (p * (k + 1) + q) * n;
            for (Index r = 0; r < n; ++r)
                entries.emplace_back(row0 + r, col0 + r, cxd(-1.0, 0.0));
        }

    BlockSystem sys;
    sys.matrix = ComplexMatrix::from_triplets(rows, rows, entries);
    sys.rhs = CVector::Zero(rows);
    sys.rhs.head(n) = initial_block(x0, n);
    sys.params = params;
    sys.inner_dim = n;
    sys.kind = ChainKind::Taylor;
    sys.block_count = d + 1;
    return sys;
}

cxd cmk_entry(const EntryOracle& a, Index row, Index col, const EncodingParams& params) {
    if (a.dim <= 0 || !a.entry) throw PreconditionError("generator oracle is not configured");
    const Index n = a.dim;
    const Index rows = (params.d + 1) * n;
    if (row < 0 || row >= rows || col < 0 || col >= rows)
        throw DimensionError("entry index (" + std::to_string(row) + ", " + std::to_string(col) +
                             ") outside a " + std::to_string(rows) + "-row system");

    const Index g1 = row / n, r1 = row % n;
    const Index g2 = col / n, r2 = col % n;
    const Index p1 = g1 / (params.k + 1), q1 = g1 % (params.k + 1);
    const Index p2 = g2 / (params.k + 1), q2 = g2 % (params.k + 1);

    // The three entry kinds are mutually exclusive (Taylor steps and hops both
    // sit strictly below the diagonal, with q1 >= 1 and q1 == 0 respectively),
    // so at most one branch fires and the oracle is queried at most once.
    if (g1 == g2 && r1 == r2) return cxd(1.0, 0.0);
    if (p2 <= params.m - 1 && q2 <= params.k - 1 && p1 == p2 && q1 == q2 + 1)
        return -a.entry(r1, r2) / static_cast<double>(q2 + 1);
    if (p2 <= params.m - 1 && p1 == p2 + 1 && q1 == 0 && r1 == r2) return cxd(-1.0, 0.0);
    return cxd(0.0, 0.0);
}

BlockSystem build_euler(const ComplexMatrix& m, Index steps, double dt, const CVector& x0) {
    if (m.rows() != m.cols())
        throw DimensionError("operator must be square, got " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
    if (m.rows() == 0) throw DimensionError("operator is empty");
    if (steps < 1) throw PreconditionError("backward-difference chain needs at least one step");
    if (!(dt > 0.0)) throw PreconditionError("chain step dt must be positive");
    const Index n = m.rows();
    const Index rows = steps * n;
    check_cap(rows);

    std::vector<CTriplet> entries;
    entries.reserve(static_cast<std::size_t>(steps * (m.non_zeros() + 2 * n)));
    const cxd scale = cxd(0.0, -kTwoPi * dt);  // -2*pi*i*dt
    const auto m_triplets = m.triplets();
    for (Index p = 0; p < steps; ++p) {
        const Index base = p * n;
        for (Index r = 0; r < n; ++r) entries.emplace_back(base + r, base + r, cxd(1.0, 0.0));
        for (const auto& t : m_triplets)
            entries.emplace_back(base + t.row(), base + t.col(), scale * t.value());
        if (p > 0)
            for (Index r = 0; r < n; ++r)
                entries.emplace_back(base + r, base - n + r, cxd(-1.0, 0.0));
    }

    BlockSystem sys;
    sys.matrix = ComplexMatrix::from_triplets(rows, rows, entries);
    sys.rhs = CVector::Zero(rows);
    sys.rhs.head(n) = initial_block(x0, n);
    sys.params = custom_params(std::max(1.0, gershgorin_bound(m)), 0.5, dt, steps, 1);
    sys.inner_dim = n;
    sys.kind = ChainKind::Euler;
    sys.block_count = steps;
    return sys;
}

}  // namespace eigsim
