#include "qrf/group.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>

#include "qrf/errors.hpp"

namespace qrf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Fills inverses and conjugacy classes once mul/identity/labels are set.
GroupTable finish_table(GroupTable g) {
    const int n = g.order;
    g.inv.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (g.mul[a][b] == g.identity) {
                g.inv[a] = b;
                break;
            }
        }
        if (g.inv[a] < 0)
            throw NumericError("group element without inverse: " + g.labels[a]);
    }

    std::vector<bool> seen(n, false);
    for (int a = 0; a < n; ++a) {
        if (seen[a]) continue;
        std::set<int> cls;
        for (int h = 0; h < n; ++h)
            cls.insert(g.mul[g.mul[h][a]][g.inv[h]]);
        std::vector<int> members(cls.begin(), cls.end());
        for (int m : members) seen[m] = true;
        g.conjugacy_classes.push_back(std::move(members));
    }
    return g;
}

GroupTable make_cyclic(int n) {
    GroupTable g;
    g.spec = {GroupKind::Cyclic, n};
    g.name = "Z" + std::to_string(n);
    g.order = n;
    g.identity = 0;
    g.mul.assign(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            g.mul[a][b] = (a + b) % n;
    g.labels.resize(n);
    for (int k = 0; k < n; ++k)
        g.labels[k] = (k == 0) ? "e" : (k == 1 ? "g" : "g^" + std::to_string(k));
    return finish_table(std::move(g));
}

// Dihedral elements are encoded as s^i r^k with index i*n + k. The defining
// relations r^n = s^2 = e and s r s = r^-1 give
//   (s^i r^k)(s^j r^l) = s^(i+j) r^(l + (-1)^j k).
GroupTable make_dihedral(int n) {
    GroupTable g;
    g.spec = {GroupKind::Dihedral, n};
    g.name = "D" + std::to_string(n);
    g.order = 2 * n;
    g.identity = 0;
    g.mul.assign(2 * n, std::vector<int>(2 * n));
    auto idx = [n](int i, int k) { return i * n + ((k % n + n) % n); };
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < n; ++l) {
                    int kk = (j == 0) ? k + l : l - k;
                    g.mul[idx(i, k)][idx(j, l)] = idx((i + j) % 2, kk);
                }
    g.labels.resize(2 * n);
    for (int k = 0; k < n; ++k) {
        std::string rot = (k == 0) ? "" : (k == 1 ? "r" : "r^" + std::to_string(k));
        g.labels[k] = rot.empty() ? "e" : rot;
        g.labels[n + k] = rot.empty() ? "s" : "s" + rot;
    }
    return finish_table(std::move(g));
}

std::vector<std::array<int, 3>> s3_permutations() {
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> p = {0, 1, 2};
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return perms; // lexicographic: 012, 021, 102, 120, 201, 210
}

GroupTable make_symmetric3() {
    auto perms = s3_permutations();
    const int n = static_cast<int>(perms.size());
    GroupTable g;
    g.spec = {GroupKind::Symmetric, 3};
    g.name = "S3";
    g.order = n;
    g.mul.assign(n, std::vector<int>(n));
    auto find = [&perms](const std::array<int, 3>& q) {
        for (std::size_t i = 0; i < perms.size(); ++i)
            if (perms[i] == q) return static_cast<int>(i);
        throw NumericError("permutation composition left the group");
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::array<int, 3> c{};
            for (int x = 0; x < 3; ++x) c[x] = perms[a][perms[b][x]];
            g.mul[a][b] = find(c);
        }
    g.identity = 0;
    g.labels.resize(n);
    for (int a = 0; a < n; ++a)
        g.labels[a] = std::to_string(perms[a][0]) + std::to_string(perms[a][1]) +
                      std::to_string(perms[a][2]);
    return finish_table(std::move(g));
}

Eigen::MatrixXcd rotation2(double angle) {
    Eigen::MatrixXcd m(2, 2);
    double c = std::cos(angle), s = std::sin(angle);
    m << c, -s, s, c;
    return m;
}

IrrepTable cyclic_irreps(const GroupTable& g) {
    const int n = g.order;
    IrrepTable t;
    for (int q = 0; q < n; ++q) {
        Irrep ir;
        ir.label = "q" + std::to_string(q);
        ir.dim = 1;
        ir.matrices.resize(n);
        for (int k = 0; k < n; ++k) {
            int m = (q * k) % n;
            double angle = kTwoPi * m / n;
            ir.matrices[k] = Eigen::MatrixXcd::Constant(
                1, 1, std::complex<double>(std::cos(angle), std::sin(angle)));
        }
        t.irreps.push_back(std::move(ir));
    }
    return t;
}

IrrepTable dihedral_irreps(const GroupTable& g) {
    const int n = g.spec.n;
    const int order = 2 * n;
    IrrepTable t;

    auto one_dim = [&](const std::string& label, auto chi) {
        Irrep ir;
        ir.label = label;
        ir.dim = 1;
        ir.matrices.resize(order);
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < n; ++k)
                ir.matrices[i * n + k] =
                    Eigen::MatrixXcd::Constant(1, 1, std::complex<double>(chi(i, k), 0.0));
        t.irreps.push_back(std::move(ir));
    };

    one_dim("A1", [](int, int) { return 1.0; });
    one_dim("A2", [](int i, int) { return i ? -1.0 : 1.0; });
    if (n % 2 == 0) {
        one_dim("B1", [](int, int k) { return (k % 2) ? -1.0 : 1.0; });
        one_dim("B2", [](int i, int k) { return ((i + k) % 2) ? -1.0 : 1.0; });
    }

    // Two-dimensional irreps E_h: r^k acts as rotation by 2*pi*h*k/n and s as
    // diag(1,-1). Angles are evaluated directly from (h*k mod n) so no error
    // accumulates through repeated matrix products.
    Eigen::MatrixXcd refl(2, 2);
    refl << 1, 0, 0, -1;
    const int two_dim_count = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
    for (int h = 1; h <= two_dim_count; ++h) {
        Irrep ir;
        ir.label = "E" + std::to_string(h);
        ir.dim = 2;
        ir.matrices.resize(order);
        for (int k = 0; k < n; ++k) {
            Eigen::MatrixXcd rot = rotation2(kTwoPi * ((h * k) % n) / n);
            ir.matrices[k] = rot;
            ir.matrices[n + k] = refl * rot;
        }
        t.irreps.push_back(std::move(ir));
    }
    return t;
}

IrrepTable symmetric3_irreps(const GroupTable& g) {
    auto perms = s3_permutations();
    const int n = g.order;
    IrrepTable t;

    Irrep triv;
    triv.label = "triv";
    triv.dim = 1;
    triv.matrices.assign(n, Eigen::MatrixXcd::Constant(1, 1, 1.0));
    t.irreps.push_back(std::move(triv));

    Irrep sign;
    sign.label = "sign";
    sign.dim = 1;
    sign.matrices.resize(n);
    for (int a = 0; a < n; ++a) {
        int inversions = 0;
        for (int x = 0; x < 3; ++x)
            for (int y = x + 1; y < 3; ++y)
                if (perms[a][x] > perms[a][y]) ++inversions;
        double s = (inversions % 2) ? -1.0 : 1.0;
        sign.matrices[a] = Eigen::MatrixXcd::Constant(1, 1, s);
    }
    t.irreps.push_back(std::move(sign));

    // Standard 2-dim irrep: restrict the permutation action on C^3 to the
    // plane x+y+z = 0, expressed in a fixed orthonormal basis of that plane.
    Eigen::MatrixXd basis(3, 2);
    basis << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0),
        -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0),
        0.0, -2.0 / std::sqrt(6.0);
    Irrep std_rep;
    std_rep.label = "std";
    std_rep.dim = 2;
    std_rep.matrices.resize(n);
    for (int a = 0; a < n; ++a) {
        Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(3, 3);
        for (int j = 0; j < 3; ++j) perm(perms[a][j], j) = 1.0;
        Eigen::MatrixXd d = basis.transpose() * perm * basis;
        std_rep.matrices[a] = d.cast<std::complex<double>>();
    }
    t.irreps.push_back(std::move(std_rep));
    return t;
}

} // namespace

GroupTable group_from_spec(const GroupSpec& spec) {
    GroupTable g;
    switch (spec.kind) {
    case GroupKind::Cyclic:
        if (spec.n < 1) throw ConfigError("cyclic group needs n >= 1");
        g = make_cyclic(spec.n);
        break;
    case GroupKind::Dihedral:
        if (spec.n < 3) throw ConfigError("dihedral group needs n >= 3");
        g = make_dihedral(spec.n);
        break;
    case GroupKind::Symmetric:
        if (spec.n != 3)
            throw ConfigError("symmetric group is supported for n = 3 only");
        g = make_symmetric3();
        break;
    }
    validate_group(g);
    return g;
}

void validate_group(const GroupTable& g) {
    const int n = g.order;
    if (n <= 0 || static_cast<int>(g.mul.size()) != n)
        throw NumericError("group table has inconsistent size");
    for (int a = 0; a < n; ++a) {
        std::vector<bool> row(n, false), col(n, false);
        for (int b = 0; b < n; ++b) {
            int r = g.mul[a][b], c = g.mul[b][a];
            if (r < 0 || r >= n || c < 0 || c >= n)
                throw NumericError("group table entry out of range");
            if (row[r] || col[c])
                throw NumericError("group table row/column is not a permutation");
            row[r] = col[c] = true;
        }
        if (g.mul[g.identity][a] != a || g.mul[a][g.identity] != a)
            throw NumericError("identity element does not act as identity");
        if (g.mul[a][g.inv[a]] != g.identity || g.mul[g.inv[a]][a] != g.identity)
            throw NumericError("inverse table is wrong");
    }
    if (n <= 24) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (g.mul[g.mul[a][b]][c] != g.mul[a][g.mul[b][c]])
                        throw NumericError("group multiplication is not associative");
    }
}

int IrrepTable::index_of(const std::string& label) const {
    for (std::size_t q = 0; q < irreps.size(); ++q)
        if (irreps[q].label == label) return static_cast<int>(q);
    std::string known;
    for (const auto& ir : irreps) known += (known.empty() ? "" : ", ") + ir.label;
    throw ConfigError("unknown irrep label \"" + label + "\" (known: " + known + ")");
}

IrrepTable irreps_for(const GroupTable& g) {
    IrrepTable t;
    switch (g.spec.kind) {
    case GroupKind::Cyclic: t = cyclic_irreps(g); break;
    case GroupKind::Dihedral: t = dihedral_irreps(g); break;
    case GroupKind::Symmetric: t = symmetric3_irreps(g); break;
    }
    t.group_order = g.order;

    t.characters.resize(static_cast<Eigen::Index>(t.irreps.size()), g.order);
    for (std::size_t q = 0; q < t.irreps.size(); ++q)
        for (int a = 0; a < g.order; ++a)
            t.characters(static_cast<Eigen::Index>(q), a) = t.irreps[q].matrices[a].trace();

    t.trivial = -1;
    for (std::size_t q = 0; q < t.irreps.size(); ++q) {
        bool all_one = true;
        for (int a = 0; a < g.order; ++a)
            if (std::abs(t.characters(static_cast<Eigen::Index>(q), a) - 1.0) > 1e-12)
                all_one = false;
        if (all_one) {
            t.trivial = static_cast<int>(q);
            break;
        }
    }
    if (t.trivial < 0) throw NumericError("no trivial irrep found");

    t.conjugate.assign(t.irreps.size(), -1);
    for (std::size_t q = 0; q < t.irreps.size(); ++q) {
        for (std::size_t p = 0; p < t.irreps.size(); ++p) {
            double dev = 0.0;
            for (int a = 0; a < g.order; ++a)
                dev = std::max(dev, std::abs(t.characters(static_cast<Eigen::Index>(p), a) -
                                             std::conj(t.characters(static_cast<Eigen::Index>(q), a))));
            if (dev < 1e-9) {
                t.conjugate[q] = static_cast<int>(p);
                break;
            }
        }
        if (t.conjugate[q] < 0)
            throw NumericError("irrep " + t.irreps[q].label + " has no conjugate partner");
    }

    validate_irreps(g, t);
    return t;
}

void validate_irreps(const GroupTable& g, const IrrepTable& t) {
    const int n = g.order;
    long dim_sq = 0;
    for (const auto& ir : t.irreps) {
        dim_sq += static_cast<long>(ir.dim) * ir.dim;
        if (static_cast<int>(ir.matrices.size()) != n)
            throw NumericError("irrep " + ir.label + " has wrong element count");
        for (int a = 0; a < n; ++a) {
            const auto& u = ir.matrices[a];
            if (u.rows() != ir.dim || u.cols() != ir.dim)
                throw NumericError("irrep " + ir.label + " matrix has wrong shape");
            double unit = (u.adjoint() * u - Eigen::MatrixXcd::Identity(ir.dim, ir.dim))
                              .cwiseAbs()
                              .maxCoeff();
            if (unit > 1e-12)
                throw NumericError("irrep " + ir.label + " is not unitary at " + g.labels[a]);
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double dev = (ir.matrices[a] * ir.matrices[b] - ir.matrices[g.mul[a][b]])
                                 .cwiseAbs()
                                 .maxCoeff();
                if (dev > 1e-12)
                    throw NumericError("irrep " + ir.label + " violates the homomorphism law");
            }
    }
    if (dim_sq != n)
        throw NumericError("irrep dimensions do not satisfy sum d^2 = |G|");

    for (std::size_t p = 0; p < t.irreps.size(); ++p)
        for (std::size_t q = 0; q < t.irreps.size(); ++q) {
            std::complex<double> acc = 0.0;
            for (int a = 0; a < n; ++a)
                acc += t.characters(static_cast<Eigen::Index>(p), a) *
                       std::conj(t.characters(static_cast<Eigen::Index>(q), a));
            double expect = (p == q) ? 1.0 : 0.0;
            if (std::abs(acc / static_cast<double>(n) - expect) > 1e-12)
                throw NumericError("character orthogonality fails for " +
                                   t.irreps[p].label + ", " + t.irreps[q].label);
        }
}

int fusion_coefficient(const IrrepTable& t, int a, int b, int c) {
    const int nirr = static_cast<int>(t.irreps.size());
    if (a < 0 || a >= nirr || b < 0 || b >= nirr || c < 0 || c >= nirr)
        throw ConfigError("fusion_coefficient: irrep index out of range");
    std::complex<double> acc = 0.0;
    for (int g = 0; g < t.group_order; ++g)
        acc += t.characters(a, g) * t.characters(b, g) * std::conj(t.characters(c, g));
    acc /= static_cast<double>(t.group_order);
    double rounded = std::round(acc.real());
    if (std::abs(acc.real() - rounded) > 1e-9 || std::abs(acc.imag()) > 1e-9)
        throw NumericError("fusion coefficient did not round to an integer");
    return static_cast<int>(rounded);
}

} // namespace qrf
