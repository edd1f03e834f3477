#ifndef KGR_ERRORS_HPP
#define KGR_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace kgr {

// All library errors carry a stable machine-readable code (used by the CLI
// to map failures to exit status 2) plus a human-readable message naming the
// offending vertex/edge/path.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

inline Error malformed_spec(const std::string& msg) { return Error("MalformedSpec", msg); }
inline Error missing_square(const std::string& msg) { return Error("MissingSquare", msg); }
inline Error non_bijective_squares(const std::string& msg) { return Error("NonBijectiveSquares", msg); }
inline Error hexagon_failure(const std::string& msg) { return Error("HexagonFailure", msg); }
inline Error has_source(const std::string& msg) { return Error("HasSource", msg); }
inline Error not_composable(const std::string& msg) { return Error("NotComposable", msg); }
inline Error degree_out_of_range(const std::string& msg) { return Error("DegreeOutOfRange", msg); }
inline Error not_cubic_degree(const std::string& msg) { return Error("NotCubicDegree", msg); }

inline Error weight_row_not_stochastic(const std::string& msg) { return Error("WeightRowNotStochastic", msg); }
inline Error square_incompatible_weights(const std::string& msg) { return Error("SquareIncompatibleWeights", msg); }
inline Error not_sequentializable(const std::string& msg) { return Error("NotSequentializable", msg); }
inline Error not_stochastic(const std::string& msg) { return Error("NotStochastic", msg); }
inline Error not_stationary(const std::string& msg) { return Error("NotStationary", msg); }
inline Error not_strongly_connected(const std::string& msg) { return Error("NotStronglyConnected", msg); }
inline Error inconsistent_measure(const std::string& msg) { return Error("InconsistentMeasure", msg); }
inline Error depth_too_small_for_closure(const std::string& msg) { return Error("DepthTooSmallForClosure", msg); }

inline Error null_atom_under_cap(const std::string& msg) { return Error("NullAtomUnderCap", msg); }
inline Error inconsistent_density(const std::string& msg) { return Error("InconsistentDensity", msg); }
inline Error ranges_overlap(const std::string& msg) { return Error("RangesOverlap", msg); }
inline Error cover_failure(const std::string& msg) { return Error("CoverFailure", msg); }
inline Error composition_mismatch(const std::string& msg) { return Error("CompositionMismatch", msg); }

inline Error depth_budget_exceeded(const std::string& msg) { return Error("DepthBudgetExceeded", msg); }
inline Error non_negative_required(const std::string& msg) { return Error("NonNegativeRequired", msg); }

inline Error overflow_error(const std::string& msg) { return Error("Overflow", msg); }
inline Error numeric_error(const std::string& msg) { return Error("Numeric", msg); }
inline Error exactness_error(const std::string& msg) { return Error("ExactnessRequired", msg); }

} // namespace kgr

#endif
