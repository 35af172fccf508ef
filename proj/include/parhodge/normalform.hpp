#pragma once

#include <optional>

#include "parhodge/connection.hpp"
#include "parhodge/poly.hpp"

namespace parhodge {

std::uint32_t default_max_extension_degree(); // 12, PARHODGE_MAX_M overrides

struct DecomposeOptions {
    std::uint32_t max_abs_degree = default_max_extension_degree();
    // diagonal matrix commuting with the input; when set, the eigenbasis is
    // refined so every conj column sits in a single rho-eigenspace
    const ConstMat* rho = nullptr;
};

// a = s + nil over the splitting field of its characteristic polynomial,
// with a deterministic diagonalizing frame for s (eigenvalues sorted by the
// coordinate order, generalized eigenspace bases echelonized).
struct JordanDecomposition {
    FieldCtxPtr ctx;   // splitting field; equals the input ctx when no extension was needed
    Embedding emb;     // input field -> ctx
    ConstMat a;        // embedded input
    ConstMat s, nil;   // original frame
    ConstMat conj, conj_inv; // conj_inv * s * conj is diagonal
    std::vector<FieldElement> eigenvalues; // per conj column
};

JordanDecomposition jordan_decompose(const ConstMat& a, const DecomposeOptions& opts = {});

// s = tau + sigma relative to the 1-coordinate projection in the power basis
// of the splitting field: tau_i is the 1-component of the i-th eigenvalue.
// Both parts are diagonal in the conj frame.
struct RationalSplit {
    ConstMat tau;   // diagonal, entries in F_p
    ConstMat sigma; // diagonal, zero 1-components
};
RationalSplit rational_split(const JordanDecomposition& jd);

// Residue data used by the correspondence pipelines: in the conj frame,
// conj_inv a conj = tau + sigma + nil_conj with tau, sigma diagonal.
struct ResidueDecomposition {
    FieldCtxPtr ctx;
    Embedding emb;
    ConstMat tau, sigma;     // diagonal, conj frame
    ConstMat nil;            // conj frame
    ConstMat conj, conj_inv;
    std::vector<FieldElement> eigenvalues;
};
ResidueDecomposition decompose_residue(const ConstMat& a0, const DecomposeOptions& opts = {});

// g = I + X for X of positive filtration depth; Ad(g) = id + ad(X) modulo the
// deeper filtration step
GaugeElement build_gauge_step(const MatSeries& X, const Rational& k, const TameWeight& theta);

struct StandardFormResult {
    TameConnection B;
    GaugeElement g;
    ResidueDecomposition decomposition;
};

// Gauge A so that b_i lies in the generalized eigenspace of ad(b_0) with
// eigenvalue i mod p, keeping b_0 = a_0.
StandardFormResult standard_form(const TameConnection& A, const DecomposeOptions& opts = {});

// standard_form plus the check that the rational part vanishes; the output is
// then supported on the p-lattice entrywise
StandardFormResult standard_form_irrational(const TameConnection& A,
                                            const DecomposeOptions& opts = {});

// certificate: (ad(b0) - i)^{n^2} annihilates b_i for every i below the window
bool eigenspace_certificate(const MatSeries& B);

// integral weight with entries the canonical [0, p) representatives of tau's
// diagonal
TameWeight choose_theta_tau(const ConstMat& tau);

// C = Ad(z^{-theta_tau})(B - tau); requires B in standard form with tau its
// diagonal rational part, and lands on the p-lattice in O
MatSeries twist_out_rational(const TameConnection& B, const ConstMat& tau);

struct ParahoricFormResult {
    MatSeries B;
    GaugeElement g; // element of P_theta(O); K-valued in general
    ResidueDecomposition cover_decomposition;
    ConstMat tau; // downstairs rational part, diagonal over F_p
};

// standard form for a parahoric connection, computed through the tame cover
// so the gauge stays in P_theta(O)
ParahoricFormResult standard_form_parahoric(const MatSeries& A, const TameWeight& theta,
                                            const DecomposeOptions& opts = {});

// solver core: one normalization step per z-order, skipping coefficients that
// already sit in their eigenspace (so inputs in standard form come back
// untouched with g = I)
struct SolverOutput {
    MatSeries B;
    GaugeElement g;
    std::size_t steps_used = 0;
};
SolverOutput standard_form_solver(const MatSeries& A);

} // namespace parhodge
