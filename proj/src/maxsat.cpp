#include "qd/maxsat.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <omp.h>

#include "qd/errors.hpp"
#include "qd/rng.hpp"

namespace qd {

namespace {

int resolve_threads(int threads) {
    return threads > 0 ? threads : omp_get_max_threads();
}

} // namespace

void SatInstance::validate() const {
    if (num_vars < 1) throw argument_error("instance needs at least one variable");
    for (const auto& clause : clauses) {
        std::vector<int> seen;
        for (const Literal& lit : clause) {
            if (lit.var < 1 || lit.var > num_vars)
                throw argument_error("literal references variable " + std::to_string(lit.var) +
                                     " outside 1.." + std::to_string(num_vars));
            if (std::find(seen.begin(), seen.end(), lit.var) != seen.end())
                throw argument_error("variable " + std::to_string(lit.var) +
                                     " appears twice in a clause (duplicate or tautology)");
            seen.push_back(lit.var);
        }
    }
}

SatInstance parse_dimacs(std::istream& in) {
    SatInstance inst;
    bool have_header = false;
    long declared_clauses = -1;
    std::string line;
    std::vector<Literal> current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
        if (line[0] == 'p') {
            std::istringstream hs(line);
            std::string p, fmt;
            hs >> p >> fmt >> inst.num_vars >> declared_clauses;
            if (fmt != "cnf" || !hs)
                throw argument_error("expected DIMACS header 'p cnf <vars> <clauses>'");
            have_header = true;
            continue;
        }
        if (!have_header) throw argument_error("clause data before the DIMACS header");
        std::istringstream ls(line);
        long lit;
        while (ls >> lit) {
            if (lit == 0) {
                inst.clauses.push_back(current);
                current.clear();
            } else {
                current.push_back({static_cast<int>(std::abs(lit)), lit < 0});
            }
        }
    }
    if (!have_header) throw argument_error("missing DIMACS header");
    if (!current.empty()) inst.clauses.push_back(current); // tolerate a missing final 0
    if (declared_clauses >= 0 && declared_clauses != static_cast<long>(inst.clauses.size()))
        throw argument_error("header declares " + std::to_string(declared_clauses) +
                             " clauses but " + std::to_string(inst.clauses.size()) + " were read");
    inst.validate();
    return inst;
}

SatInstance parse_dimacs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw argument_error("cannot open '" + path + "'");
    return parse_dimacs(in);
}

double EnergyTensor::satisfied_count(const std::vector<int8_t>& assignment) const {
    if (static_cast<int>(assignment.size()) != num_vars)
        throw argument_error("assignment length must equal the variable count");
    double total = constant;
    for (const auto& [vars, c] : coeffs) {
        double w = c;
        for (int v : vars) w *= assignment[static_cast<std::size_t>(v - 1)];
        total += w;
    }
    return total;
}

EnergyTensor encode(const SatInstance& instance) {
    instance.validate();
    EnergyTensor t;
    t.num_vars = instance.num_vars;
    std::map<std::vector<int>, double> acc;
    for (const auto& clause : instance.clauses) {
        const int k = static_cast<int>(clause.size());
        if (k > 8) throw resource_limit_error("clause with " + std::to_string(k) +
                                              " literals exceeds the expansion limit of 8");
        if (k == 0) continue; // an empty clause is never satisfied
        std::vector<Literal> lits = clause;
        std::sort(lits.begin(), lits.end(),
                  [](const Literal& a, const Literal& b) { return a.var < b.var; });
        const double scale = std::ldexp(1.0, -k); // 2^-k
        t.constant += 1.0 - scale;
        for (std::uint32_t subset = 1; subset < (1u << k); ++subset) {
            std::vector<int> vars;
            double coeff = -scale; // minus from H = -1 + product, negated to n-form
            for (int j = 0; j < k; ++j) {
                if (!(subset & (1u << j))) continue;
                vars.push_back(lits[static_cast<std::size_t>(j)].var);
                coeff *= lits[static_cast<std::size_t>(j)].negated ? 1.0 : -1.0; // -s_j
            }
            acc[vars] += coeff;
        }
    }
    for (auto& [vars, c] : acc) {
        if (c != 0.0) t.coeffs.emplace_back(vars, c);
    }
    return t;
}

double eval_energy(const EnergyTensor& t, const std::vector<int8_t>& assignment) {
    return -t.satisfied_count(assignment);
}

BlochTensor to_bloch_tensor(const EnergyTensor& t) {
    BlochTensor n(t.num_vars);
    for (const auto& [vars, c] : t.coeffs) {
        std::size_t a = 0;
        for (int v : vars) a |= std::size_t{3} << (2 * (t.num_vars - v));
        n.set_coeff(a, c);
    }
    return n;
}

BruteforceSatResult solve_bruteforce(const SatInstance& instance, int threads) {
    instance.validate();
    const int nv = instance.num_vars;
    if (nv > 24) throw resource_limit_error("exhaustive scan limited to 24 variables");

    // Clause satisfaction masks: satisfied iff a positive literal's bit is
    // set or a negated literal's bit is clear.
    struct ClauseMask {
        std::uint32_t pos = 0;
        std::uint32_t neg = 0;
    };
    std::vector<ClauseMask> masks;
    masks.reserve(instance.clauses.size());
    for (const auto& clause : instance.clauses) {
        ClauseMask cm;
        for (const Literal& lit : clause)
            (lit.negated ? cm.neg : cm.pos) |= 1u << (lit.var - 1);
        masks.push_back(cm);
    }

    const std::uint32_t total = 1u << nv;
    const int nthreads = resolve_threads(threads);
    const std::uint32_t chunk = (total + static_cast<std::uint32_t>(nthreads) - 1) /
                                static_cast<std::uint32_t>(nthreads);

    std::vector<int> chunk_best(static_cast<std::size_t>(nthreads), -1);
    std::vector<std::vector<std::uint32_t>> chunk_args(static_cast<std::size_t>(nthreads));

#pragma omp parallel for schedule(static, 1) num_threads(nthreads)
    for (int c = 0; c < nthreads; ++c) {
        const std::uint32_t lo = static_cast<std::uint32_t>(c) * chunk;
        const std::uint32_t hi = std::min(total, lo + chunk);
        int best = -1;
        std::vector<std::uint32_t> args;
        for (std::uint32_t mask = lo; mask < hi; ++mask) {
            int sat = 0;
            for (const ClauseMask& cm : masks)
                sat += ((mask & cm.pos) != 0 || (~mask & cm.neg) != 0) ? 1 : 0;
            if (sat > best) {
                best = sat;
                args.clear();
                args.push_back(mask);
            } else if (sat == best) {
                args.push_back(mask);
            }
        }
        chunk_best[static_cast<std::size_t>(c)] = best;
        chunk_args[static_cast<std::size_t>(c)] = std::move(args);
    }

    BruteforceSatResult r;
    r.max_satisfied = *std::max_element(chunk_best.begin(), chunk_best.end());
    for (int c = 0; c < nthreads; ++c)
        if (chunk_best[static_cast<std::size_t>(c)] == r.max_satisfied)
            r.maximizers.insert(r.maximizers.end(), chunk_args[static_cast<std::size_t>(c)].begin(),
                                chunk_args[static_cast<std::size_t>(c)].end());
    return r;
}

TensorSatResult solve_via_tensor(const SatInstance& instance, const OptimizerConfig& cfg) {
    cfg.validate();
    const EnergyTensor t = encode(instance);
    const int nv = t.num_vars;

    // Per-variable adjacency into the coefficient list.
    std::vector<std::vector<int>> touching(static_cast<std::size_t>(nv));
    for (int ci = 0; ci < static_cast<int>(t.coeffs.size()); ++ci)
        for (int v : t.coeffs[static_cast<std::size_t>(ci)].first)
            touching[static_cast<std::size_t>(v - 1)].push_back(ci);

    const auto local_field_z = [&](const std::vector<int8_t>& a, int var) {
        double f = 0.0;
        for (int ci : touching[static_cast<std::size_t>(var - 1)]) {
            const auto& [vars, c] = t.coeffs[static_cast<std::size_t>(ci)];
            double w = c;
            for (int v : vars)
                if (v != var) w *= a[static_cast<std::size_t>(v - 1)];
            f += w;
        }
        return f;
    };

    TensorSatResult best;
    best.max_satisfied = -1;

    const int starts = cfg.restarts + 2; // all-true and all-false seeds first
    for (int s = 0; s < starts; ++s) {
        std::vector<int8_t> a(static_cast<std::size_t>(nv));
        if (s == 0) {
            std::fill(a.begin(), a.end(), int8_t{1});
        } else if (s == 1) {
            std::fill(a.begin(), a.end(), int8_t{-1});
        } else {
            Rng rng(cfg.seed + static_cast<std::uint64_t>(s - 2));
            for (auto& x : a) x = rng.uniform01() < 0.5 ? int8_t{-1} : int8_t{1};
        }
        for (int it = 0; it < cfg.max_iterations; ++it) {
            bool changed = false;
            for (int v = 1; v <= nv; ++v) {
                const double f = local_field_z(a, v);
                if (f == 0.0) continue;
                const int8_t want = f > 0.0 ? int8_t{1} : int8_t{-1};
                if (a[static_cast<std::size_t>(v - 1)] != want) {
                    a[static_cast<std::size_t>(v - 1)] = want;
                    changed = true;
                }
            }
            if (!changed) break;
        }
        const double count = t.satisfied_count(a);
        const int sat = static_cast<int>(std::lround(count));
        if (std::abs(count - sat) > 1e-9)
            throw inconsistency_error("tensor evaluation is not an integer clause count");
        if (sat > best.max_satisfied) {
            best.max_satisfied = sat;
            best.assignment = a;
            best.energy = -count;
        }
    }
    return best;
}

} // namespace qd
