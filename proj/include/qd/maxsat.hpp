#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "qd/bloch.hpp"
#include "qd/tensor_norm.hpp"

namespace qd {

struct Literal {
    int var = 0;          // 1-based
    bool negated = false;
};

struct SatInstance {
    int num_vars = 0;
    std::vector<std::vector<Literal>> clauses;

    // Rejects variable indices outside [1, num_vars] and clauses that
    // mention a variable twice (duplicates and tautologies both break the
    // exact satisfied-clause count).
    void validate() const;
};

SatInstance parse_dimacs(std::istream& in);
SatInstance parse_dimacs_file(const std::string& path);

// z-monomial expansion of the clause energy. Coefficients are stored in
// "n-form": the evaluated contraction constant + sum_S coeff_S prod_{j in S}
// theta_j equals the number of satisfied clauses at theta = +/-1, and the
// energy is its negation.
struct EnergyTensor {
    int num_vars = 0;
    double constant = 0.0; // coefficient of the empty monomial
    std::vector<std::pair<std::vector<int>, double>> coeffs; // sorted var sets

    double satisfied_count(const std::vector<int8_t>& assignment) const;
};

// Expands each clause through its unique falsifying assignment,
// H_i = -1 + prod_j (1 - s_j theta_j)/2, which yields the same polynomial
// as summing the satisfying assignments with exponentially fewer terms.
// Clauses longer than 8 literals are rejected (2^k expansion).
EnergyTensor encode(const SatInstance& instance);

// H(theta) at a +/-1 assignment; -H equals the number of satisfied clauses.
double eval_energy(const EnergyTensor& t, const std::vector<int8_t>& assignment);

// The tensor's monomials as Bloch coefficients (digit 3 on each variable in
// the subset); the constant term is dropped since the all-identity
// coefficient is implicit. Requires num_vars <= 12.
BlochTensor to_bloch_tensor(const EnergyTensor& t);

struct BruteforceSatResult {
    int max_satisfied = 0;
    // Assignments as bitmasks, bit (v-1) set means v = T; ascending order.
    std::vector<std::uint32_t> maximizers;
};

// Exhaustive scan with direct clause evaluation (independent of the tensor
// encoding); num_vars <= 24.
BruteforceSatResult solve_bruteforce(const SatInstance& instance, int threads = 0);

struct TensorSatResult {
    int max_satisfied = 0; // lower bound on the true optimum
    std::vector<int8_t> assignment; // +1 = T, -1 = F
    double energy = 0.0;
};

// Mean-field descent on the encoded tensor with directions pinned to the
// z-axis: each site update reduces to the sign of the local field.
TensorSatResult solve_via_tensor(const SatInstance& instance, const OptimizerConfig& cfg);

} // namespace qd
