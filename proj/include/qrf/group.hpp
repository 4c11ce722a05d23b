#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qrf {

enum class GroupKind { Cyclic, Dihedral, Symmetric };

struct GroupSpec {
    GroupKind kind = GroupKind::Cyclic;
    /// Cyclic order, dihedral rotation order, or symmetric degree (3 only).
    int n = 1;

    bool operator==(const GroupSpec&) const = default;
};

/// A finite group given by an explicit multiplication table.
///
/// Element indices follow a fixed convention per kind:
///   cyclic(n)    powers of the generator: e, g, g^2, ...
///   dihedral(n)  rotations r^k first, then reflections s*r^k, k = 0..n-1
///   symmetric(3) permutations in lexicographic one-line order: 012, 021, ...
struct GroupTable {
    GroupSpec spec;
    std::string name;
    int order = 0;
    int identity = 0;
    std::vector<std::vector<int>> mul; ///< mul[a][b] = index of a*b
    std::vector<int> inv;
    std::vector<std::string> labels;
    /// Each class sorted ascending; classes ordered by smallest member.
    std::vector<std::vector<int>> conjugacy_classes;

    int product(int a, int b) const { return mul[a][b]; }
    int inverse(int a) const { return inv[a]; }
};

/// Builds the table for a supported spec. Throws ConfigError for unsupported
/// parameters (cyclic needs n >= 1, dihedral n >= 3, symmetric n == 3).
GroupTable group_from_spec(const GroupSpec& spec);

/// Checks the group axioms on the table: Latin-square rows/columns, identity,
/// inverses, and (for order <= 24) exhaustive associativity. Throws
/// NumericError on violation. Called by group_from_spec before returning.
void validate_group(const GroupTable& g);

struct Irrep {
    std::string label;
    int dim = 1;
    std::vector<Eigen::MatrixXcd> matrices; ///< one unitary per group element
};

/// Complete set of inequivalent unitary irreps with characters and the
/// conjugation map q -> q-bar (the irrep with complex-conjugate character).
struct IrrepTable {
    std::vector<Irrep> irreps;
    Eigen::MatrixXcd characters; ///< irreps.size() x |G|
    std::vector<int> conjugate;
    int group_order = 0;
    int trivial = 0;

    std::size_t size() const { return irreps.size(); }
    int dim_of(int q) const { return irreps[static_cast<std::size_t>(q)].dim; }
    /// Index of the irrep with the given label; throws ConfigError if unknown.
    int index_of(const std::string& label) const;
};

IrrepTable irreps_for(const GroupTable& g);

/// Verifies unitarity, the homomorphism property over all element pairs,
/// sum of squared dimensions, and character orthogonality. Throws
/// NumericError on violation. Called by irreps_for before returning.
void validate_irreps(const GroupTable& g, const IrrepTable& t);

/// Multiplicity of irrep c inside a (x) b, from the character average
/// (1/|G|) sum_g chi_a(g) chi_b(g) conj(chi_c(g)). The average must land
/// within 1e-9 of an integer, otherwise NumericError.
int fusion_coefficient(const IrrepTable& t, int a, int b, int c);

} // namespace qrf
