#pragma once

#include <stdexcept>
#include <string>

namespace pcdp {

enum class errc {
    non_monotone,
    unsorted_breakpoints,
    empty_piece_list,
    out_of_domain,
    out_of_codomain,
    domain_mismatch,
    tag_mismatch,
    empty_list,
    negative_shift,
    inf_minus_inf,
    precondition_violated,
    empty_interval,
    cycle_detected,
    piece_bound_exceeded,
    unknown_row,
    would_create_cycle,
    no_such_edge,
    not_a_tree,
    bad_epsilon,
    bad_argument,
    unknown_item,
    stale_query,
    infeasible,
    weight_too_large,
    height_bound_exceeded,
    unsorted_beads,
    length_mismatch,
    would_unsort,
    index_out_of_range,
    budget_exceeded,
    parse_error,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::non_monotone: return "NonMonotone";
    case errc::unsorted_breakpoints: return "UnsortedBreakpoints";
    case errc::empty_piece_list: return "EmptyPieceList";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::out_of_codomain: return "OutOfCodomain";
    case errc::domain_mismatch: return "DomainMismatch";
    case errc::tag_mismatch: return "TagMismatch";
    case errc::empty_list: return "EmptyList";
    case errc::negative_shift: return "NegativeShift";
    case errc::inf_minus_inf: return "InfMinusInf";
    case errc::precondition_violated: return "PreconditionViolated";
    case errc::empty_interval: return "EmptyInterval";
    case errc::cycle_detected: return "CycleDetected";
    case errc::piece_bound_exceeded: return "PieceBoundExceeded";
    case errc::unknown_row: return "UnknownRow";
    case errc::would_create_cycle: return "WouldCreateCycle";
    case errc::no_such_edge: return "NoSuchEdge";
    case errc::not_a_tree: return "NotATree";
    case errc::bad_epsilon: return "BadEpsilon";
    case errc::bad_argument: return "BadArgument";
    case errc::unknown_item: return "UnknownItem";
    case errc::stale_query: return "StaleQuery";
    case errc::infeasible: return "Infeasible";
    case errc::weight_too_large: return "WeightTooLarge";
    case errc::height_bound_exceeded: return "HeightBoundExceeded";
    case errc::unsorted_beads: return "UnsortedBeads";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::would_unsort: return "WouldUnsort";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::parse_error: return "ParseError";
    }
    return "Unknown";
}

} // namespace pcdp
