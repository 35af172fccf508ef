#include "parhodge/errors.hpp"

namespace parhodge {

const char* errc_name(errc c) {
    switch (c) {
    case errc::division_by_zero: return "DivisionByZero";
    case errc::ctx_mismatch: return "CtxMismatch";
    case errc::precision_exhausted: return "PrecisionExhausted";
    case errc::support_violation: return "SupportViolation";
    case errc::singular_gauge: return "SingularGauge";
    case errc::pole_escape: return "PoleEscape";
    case errc::non_diagonal_input: return "NonDiagonalInput";
    case errc::zero_input: return "ZeroInput";
    case errc::depth_violation: return "DepthViolation";
    case errc::non_trivial_rational_part: return "NonTrivialRationalPart";
    case errc::non_rational_input: return "NonRationalInput";
    case errc::membership_violation: return "MembershipViolation";
    case errc::equivariance_violation: return "EquivarianceViolation";
    case errc::wild_ramification: return "WildRamification";
    case errc::rational_residue_in_higgs: return "RationalResidueInHiggs";
    case errc::extension_cap_exceeded: return "ExtensionCapExceeded";
    case errc::not_irreducible: return "NotIrreducible";
    case errc::parse_error: return "ParseError";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::internal: return "InternalError";
    }
    return "UnknownError";
}

} // namespace parhodge
