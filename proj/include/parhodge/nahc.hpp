#pragma once

#include "parhodge/covers.hpp"
#include "parhodge/normalform.hpp"

namespace parhodge {

// One step of a correspondence certificate.  Certificates are replayed by
// folding these over the input; the pipelines themselves are implemented as
// exactly that fold, so replay equality is structural.
struct PipelineStep {
    enum class Kind { cover_lift, gauge, descend };
    Kind kind;
    std::string label;
    GaugeElement g;       // gauge steps (O-valued, constant conjugation, or z-power twist)
    std::int64_t k = 1;   // descent degree
};

struct NahcResult {
    FieldCtxPtr ctx;          // field phi lives in
    TameWeight theta;         // input weight (zero for the plain pipelines)
    ConstMat tau;             // diagonal rational residue class, entries in F_p
    TameWeight theta_tau;     // integral lift
    HiggsField phi;           // tagged frobenius_twist
    TameWeight target_weight; // theta_tau/p, or (theta' + theta_tau)/p on covers
    std::vector<PipelineStep> steps;
    std::int64_t d = 1;
    FieldElement zeta;        // recorded root-of-unity choice (1 when d = 1)
};

// apply one certificate step (embedding the value into the step's field when
// the frame extended it)
MatSeries apply_step(const MatSeries& x, const PipelineStep& step, const TameWeight& theta);

// fold all steps over the input; every pipeline output equals this fold
MatSeries replay_steps(const MatSeries& input, const NahcResult& res);

// exact agreement of the replayed fold with the recorded phi
bool replay_certificate(const MatSeries& input, const NahcResult& res);

// fold the step list backwards from phi; recovers the pipeline input on its
// guaranteed window (works for the parahoric certificates too, where the
// plain inverse pipeline does not apply)
MatSeries invert_certificate(const NahcResult& res);

// irrational case: standard form lands in g(O^p), descend to the twist
HiggsField locsys_to_higgs_irr(const TameConnection& A, const DecomposeOptions& opts = {});

// general residue: standard form, split off tau, twist by z^{-theta_tau},
// descend; the Higgs field lives on the twist for the weight theta_tau/p
NahcResult locsys_to_higgs_tau(const TameConnection& A, const DecomposeOptions& opts = {});

// inverse direction: A = tau + Ad(z^{theta_tau}) phi(z^p)
TameConnection higgs_tau_to_locsys(const ConstMat& tau, const HiggsField& phi,
                                   const DecomposeOptions& opts = {});

struct FlatClassification {
    bool flat = false;
    ConstMat tau;     // sorted diagonal, set when flat
    GaugeElement g;   // gauge with g * A = tau, set when flat
    MatSeries psi;    // the nonzero p-curvature otherwise
};

// zero p-curvature test and constructive trivialization
FlatClassification pcurv_zero_classify(const TameConnection& A, const DecomposeOptions& opts = {});

// full parahoric correspondence through the d-fold cover; degenerates to
// locsys_to_higgs_tau when theta = 0 (bit-identical certificates)
NahcResult parahoric_nahc(const MatSeries& A, const TameWeight& theta,
                          const DecomposeOptions& opts = {});

} // namespace parhodge
