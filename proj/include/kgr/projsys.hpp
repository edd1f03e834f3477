#ifndef KGR_PROJSYS_HPP
#define KGR_PROJSYS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgr/measures.hpp"

namespace kgr {

// Lambda-projective system on the path space at cylinder resolution:
// a measure mu plus the cocycle family { f_lambda : d(lambda) <= cap },
// each f_lambda a depth-D cylinder function with |f_lambda|^2 equal to the
// Radon-Nikodym derivative of mu o sigma_lambda^{-1} against mu.
class ProjectiveSystem {
public:
    ProjectiveSystem(CylinderMeasure mu, int depth, Degree cap,
                     std::map<Path, CylinderFunction> cocycles,
                     std::vector<Path> dropped_null_atoms);

    const CylinderMeasure& measure() const { return mu_; }
    const KGraph& graph() const { return mu_.graph(); }
    int depth() const { return depth_; }
    const Degree& cap() const { return cap_; }

    const CylinderFunction& cocycle(const Path& lambda) const;
    std::vector<Path> family() const; // all lambda with d(lambda) <= cap
    // Atoms where some f_lambda was undefined because mu vanished.
    const std::vector<Path>& dropped_null_atoms() const { return dropped_; }

    // Copy with one cocycle replaced (used to inject faults in tests and to
    // attach sign tables).
    ProjectiveSystem with_cocycle(const Path& lambda, CylinderFunction f) const;

private:
    CylinderMeasure mu_;
    int depth_;
    Degree cap_;
    std::map<Path, CylinderFunction> cocycles_;
    std::vector<Path> dropped_;
};

// The standard system: f_lambda = + sqrt( d(mu o sigma_lambda^{-1}) / d mu )
// at depth D for every lambda with d(lambda) <= cap. Atoms with mu = 0 are
// dropped from the cocycles and reported on the system.
ProjectiveSystem standard_system(const CylinderMeasure& mu, int depth, const Degree& cap);

// Multiply each f_lambda by the character (-1)^{# marked edges in lambda}.
// The marking must be square-compatible so the character is well defined.
ProjectiveSystem character_signs(const ProjectiveSystem& s, const std::vector<EdgeId>& marked);

// System over d mu' = g1 d mu with
// f~_lambda = sqrt(g1 o sigma^{d(lambda)}) / sqrt(g1) * f_lambda.
// Requires g1 > 0 on mu-positive atoms and depth(g1) + max(cap) <= depth(s).
ProjectiveSystem rescale_system(const ProjectiveSystem& s, const CylinderFunction& g1);

struct CheckRecord {
    std::string name;
    int subspace_depth = 0;
    double max_deviation = 0.0;
    bool exact = true;
    bool pass = true;
    std::vector<std::string> witnesses;
};

struct VerifyReport {
    bool pass = true;
    std::vector<CheckRecord> checks;

    const CheckRecord* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// Checks the support, modulus and cocycle identities of the system at its
// resolution; failures are report entries, never exceptions.
VerifyReport verify_projective(const ProjectiveSystem& s, double tol = 1e-9);

// Finite-level sigma-algebra check on the path space: at level n the
// partition generated by { Z(lambda) : |d(lambda)| <= n } is computed on the
// positive-mass depth-(n,...,n) atoms; unseparated groups are obstructions.
struct MonicLevel {
    int level = 0;
    double mesh = 0.0;          // max atom mass of the generated partition
    int groups = 0;             // number of partition classes
    int unseparated_atoms = 0;  // positive atoms sharing a class with another
};

struct MonicReport {
    std::string verdict; // monic-likely | not-monic | obstructed-at-depth
    std::vector<MonicLevel> levels;
    std::vector<std::string> obstructions; // descriptions of certified obstructions
};

MonicReport monic_sigma_check_pathspace(const CylinderMeasure& mu, int n_max);

} // namespace kgr

#endif
